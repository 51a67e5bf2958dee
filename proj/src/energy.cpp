#include "twowell/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "twowell/errors.hpp"

namespace twowell {

Mat2 gradient(const VectorField& v, int i, int j) {
  const int n = v.grid.n;
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw std::out_of_range("gradient: cell (" + std::to_string(i) + "," + std::to_string(j) +
                            ") outside grid");
  }
  const double inv2h = 0.5 / v.grid.h();
  const Vec2& v00 = v.at(i, j);
  const Vec2& v10 = v.at(i + 1, j);
  const Vec2& v01 = v.at(i, j + 1);
  const Vec2& v11 = v.at(i + 1, j + 1);
  const Vec2 d1 = inv2h * ((v10 + v11) - (v00 + v01));
  const Vec2 d2 = inv2h * ((v01 + v11) - (v00 + v10));
  return Mat2::from_columns(d1, d2);
}

double elastic_density(double chi, const Mat2& G, const WellPair& W) {
  double e = 0.0;
  if (chi != 1.0) {
    const double d = dist_so2(G);
    e += (1.0 - chi) * d * d;
  }
  if (chi != 0.0) {
    const double d = dist_well(G, W.F);
    e += chi * d * d;
  }
  return e;
}

double inverse_elastic_density(double chi, const Mat2& G, const WellPair& W) {
  double e = 0.0;
  if (chi != 1.0) {
    const double d = dist_so2(G);
    e += (1.0 - chi) * d * d;
  }
  if (chi != 0.0) {
    const double d = dist_right_well(G, W.Finv);
    e += chi * d * d;
  }
  return e;
}

double volume(const ScalarField& chi) {
  double s = 0.0;
  for (double c : chi.values) s += c;
  return s * chi.grid.cell_area();
}

double contour_length(const ScalarField& chi, const std::optional<Ball>& region) {
  const GridSpec& g = chi.grid;
  const int n = g.n;

  // Summed-area table over cells, padded by one row/column of zeros.
  std::vector<double> sat(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
  auto S = [&](int i, int j) -> double& { return sat[static_cast<std::size_t>(j) * (n + 1) + i]; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) S(i + 1, j + 1) = chi.at(i, j) + S(i, j + 1) + S(i + 1, j) - S(i, j);
  auto box = [&](int i0, int j0, int i1, int j1) {  // sum over cells [i0,i1) x [j0,j1)
    i0 = std::clamp(i0, 0, n);
    j0 = std::clamp(j0, 0, n);
    i1 = std::clamp(i1, 0, n);
    j1 = std::clamp(j1, 0, n);
    if (i1 <= i0 || j1 <= j0) return 0.0;
    return S(i1, j1) - S(i0, j1) - S(i1, j0) + S(i0, j0);
  };

  std::vector<double> vert(static_cast<std::size_t>(n + 1) * (n + 1));
  auto V = [&](int i, int j) -> double& { return vert[static_cast<std::size_t>(j) * (n + 1) + i]; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) V(i, j) = box(i - 2, j - 2, i + 2, j + 2) / 16.0;

  constexpr double iso = 0.5;
  double length = 0.0;
  auto add = [&](const Vec2& p, const Vec2& q) {
    if (region && !region->contains(0.5 * (p + q))) return;
    length += norm(q - p);
  };

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::array<double, 4> val{V(i, j), V(i + 1, j), V(i + 1, j + 1), V(i, j + 1)};
      const std::array<Vec2, 4> pos{g.vertex(i, j), g.vertex(i + 1, j), g.vertex(i + 1, j + 1),
                                    g.vertex(i, j + 1)};
      int mask = 0;
      for (int k = 0; k < 4; ++k)
        if (val[k] >= iso) mask |= 1 << k;
      if (mask == 0 || mask == 15) continue;

      std::array<Vec2, 4> cut{};
      for (int k = 0; k < 4; ++k) {
        const int l = (k + 1) % 4;
        if ((val[k] >= iso) != (val[l] >= iso)) {
          const double t = (iso - val[k]) / (val[l] - val[k]);
          cut[k] = pos[k] + t * (pos[l] - pos[k]);
        }
      }
      // Edge k joins corner k and corner k+1.
      if (mask == 5 || mask == 10) {
        const double center = 0.25 * (val[0] + val[1] + val[2] + val[3]);
        const bool corner0_in = (mask == 5);
        if ((center >= iso) == corner0_in) {
          add(cut[0], cut[1]);
          add(cut[2], cut[3]);
        } else {
          add(cut[3], cut[0]);
          add(cut[1], cut[2]);
        }
        continue;
      }
      std::array<int, 2> edges{};
      int found = 0;
      for (int k = 0; k < 4; ++k)
        if (((mask >> k) & 1) != ((mask >> ((k + 1) % 4)) & 1)) edges[found++] = k;
      add(cut[edges[0]], cut[edges[1]]);
    }
  }
  return length;
}

double interface_energy(const ScalarField& chi) {
  return chi.exact_perimeter ? *chi.exact_perimeter : contour_length(chi);
}

double elastic_energy(const ScalarField& chi, const VectorField& v, const WellPair& W) {
  if (!(chi.grid == v.grid)) throw ShapeError("elastic_energy: chi and v live on different grids");
  const int n = chi.grid.n;
  double s = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) s += elastic_density(chi.at(i, j), gradient(v, i, j), W);
  return s * chi.grid.cell_area();
}

EnergyBreakdown total_energy(const ScalarField& chi, const VectorField& v, const WellPair& W) {
  if (!(chi.grid == v.grid)) throw ShapeError("total_energy: chi and v live on different grids");
  EnergyBreakdown e;
  e.elastic = elastic_energy(chi, v, W);
  e.interface = interface_energy(chi);
  e.total = e.interface + e.elastic;
  e.mu = volume(chi);
  return e;
}

double elastic_energy_ball(const ScalarField& chi, const VectorField& v, const WellPair& W,
                           const Vec2& center, double radius) {
  if (!(chi.grid == v.grid)) throw ShapeError("elastic_energy_ball: grid mismatch");
  const GridSpec& g = chi.grid;
  const double h = g.h();
  const int i0 = std::max(0, static_cast<int>(std::floor((center.x1 - radius + g.L) / h)));
  const int i1 = std::min(g.n - 1, static_cast<int>(std::ceil((center.x1 + radius + g.L) / h)));
  const int j0 = std::max(0, static_cast<int>(std::floor((center.x2 - radius + g.L) / h)));
  const int j1 = std::min(g.n - 1, static_cast<int>(std::ceil((center.x2 + radius + g.L) / h)));
  const double r2 = radius * radius;
  double s = 0.0;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const Vec2 d = g.cell_center(i, j) - center;
      if (dot(d, d) > r2) continue;
      s += elastic_density(chi.at(i, j), gradient(v, i, j), W);
    }
  }
  return s * g.cell_area();
}

Mat2 interpolated_gradient(const VectorField& v, const Vec2& x) {
  const GridSpec& g = v.grid;
  const double h = g.h();
  // Coordinates relative to the lattice of cell centers.
  const double u = std::clamp((x.x1 + g.L) / h - 0.5, 0.0, g.n - 1.0);
  const double w = std::clamp((x.x2 + g.L) / h - 0.5, 0.0, g.n - 1.0);
  const int i = std::min(static_cast<int>(u), g.n - 2);
  const int j = std::min(static_cast<int>(w), g.n - 2);
  const double s = u - i;
  const double t = w - j;
  return (1 - s) * (1 - t) * gradient(v, i, j) + s * (1 - t) * gradient(v, i + 1, j) +
         (1 - s) * t * gradient(v, i, j + 1) + s * t * gradient(v, i + 1, j + 1);
}

double segment_energy(const ScalarField& chi, const VectorField& v, const WellPair& W,
                      const Vec2& x, const Vec2& y) {
  if (!(chi.grid == v.grid)) throw ShapeError("segment_energy: grid mismatch");
  const GridSpec& g = v.grid;
  if (!g.contains(x) || !g.contains(y)) throw DomainError("segment_energy: segment leaves the window");
  const double len = norm(y - x);
  if (len == 0.0) return 0.0;
  const int nodes = std::max(4, static_cast<int>(std::ceil(4.0 * len / g.h())));
  double s = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const Vec2 z = x + ((k + 0.5) / nodes) * (y - x);
    s += elastic_density(chi.nearest(z), interpolated_gradient(v, z), W);
  }
  return s * len / nodes;
}

BilipReport bilip_constant(const VectorField& v) {
  BilipReport r;
  const int n = v.grid.n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Mat2 G = gradient(v, i, j);
      if (!(det(G) > 0.0)) {
        if (r.admissible) {
          r.admissible = false;
          r.cell_i = i;
          r.cell_j = j;
          r.m = std::numeric_limits<double>::infinity();
        }
        continue;
      }
      const auto [smax, smin] = singular_values(G);
      r.m = std::max({r.m, smax, 1.0 / smin});
    }
  }
  return r;
}

}  // namespace twowell
