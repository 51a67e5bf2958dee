#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "twowell/mat2.hpp"

namespace twowell {

/// Uniform grid on the square window [-L, L]^2 with n cells per side.
///
/// Vertices are indexed (i, j) with 0 <= i, j <= n at position
/// (-L + i h, -L + j h); cells (i, j) with 0 <= i, j < n have their center at
/// (-L + (i + 1/2) h, -L + (j + 1/2) h). The index i runs along x1.
struct GridSpec {
  int n = 0;
  double L = 0.0;

  /// Validated constructor: n >= 8, n even, L > 0.
  static GridSpec make(int n, double L);

  double h() const { return 2.0 * L / n; }
  double cell_area() const { return h() * h(); }
  std::size_t cell_count() const { return static_cast<std::size_t>(n) * n; }
  std::size_t vertex_count() const { return static_cast<std::size_t>(n + 1) * (n + 1); }

  Vec2 vertex(int i, int j) const { return {-L + i * h(), -L + j * h()}; }
  Vec2 cell_center(int i, int j) const { return {-L + (i + 0.5) * h(), -L + (j + 0.5) * h()}; }

  bool contains(const Vec2& x) const {
    return x.x1 >= -L && x.x1 <= L && x.x2 >= -L && x.x2 <= L;
  }
  /// Cell containing x, clamped to the window.
  std::pair<int, int> cell_of(const Vec2& x) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Cell-centered scalar field; holds the phase indicator chi.
///
/// Values are exactly 0 or 1 in indicator mode. `exact_perimeter`, when set by
/// a rasterizer of an analytic shape, is the length of that shape's boundary
/// and takes precedence over the contour estimate; it must be cleared by
/// anyone who edits `values`.
struct ScalarField {
  GridSpec grid;
  std::vector<double> values;
  std::optional<double> exact_perimeter;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g, double fill = 0.0)
      : grid(g), values(g.cell_count(), fill) {}

  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * grid.n + i]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.n + i]; }
  /// Value of the cell containing x (nearest-cell lookup); 0 outside the window.
  double nearest(const Vec2& x) const;
  bool is_indicator() const;
};

/// Vertex-sampled deformation v.
struct VectorField {
  GridSpec grid;
  std::vector<Vec2> values;

  VectorField() = default;
  explicit VectorField(const GridSpec& g) : grid(g), values(g.vertex_count()) {}

  Vec2& at(int i, int j) { return values[static_cast<std::size_t>(j) * (grid.n + 1) + i]; }
  const Vec2& at(int i, int j) const {
    return values[static_cast<std::size_t>(j) * (grid.n + 1) + i];
  }

  /// v sampled from a callable at every vertex.
  template <class Fn>
  static VectorField sample(const GridSpec& g, Fn&& fn) {
    VectorField v(g);
    for (int j = 0; j <= g.n; ++j)
      for (int i = 0; i <= g.n; ++i) v.at(i, j) = fn(g.vertex(i, j));
    return v;
  }
  static VectorField identity(const GridSpec& g) {
    return sample(g, [](const Vec2& x) { return x; });
  }
  static VectorField affine(const GridSpec& g, const Mat2& A, const Vec2& p = {}) {
    return sample(g, [&](const Vec2& x) { return A * x + p; });
  }

  /// Bilinear interpolation of v at x (x clamped to the window).
  Vec2 interpolate(const Vec2& x) const;
};

}  // namespace twowell
