#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "twowell/energy.hpp"
#include "twowell/grid.hpp"
#include "twowell/matrixcore.hpp"

namespace twowell {

/// Radial cutoff: 1 on [0, R], 0 beyond 2R, cubic smoothstep in between.
/// The slope is at most 1.5 / R.
struct CutoffProfile {
  double R = 1.0;

  double operator()(double r) const;
  /// d omega / dr
  double derivative(double r) const;
  static constexpr double max_slope_constant = 1.5;
};

/// Lens Q = B_rho(x1) cap B_rho(x2) of diameter Rlen and thickness T, with
/// the centers on the x2-axis, and the displacement u0 built on it.
struct LensConstruction {
  double Rlen = 0.0;
  double T = 0.0;
  double rho = 0.0;
  std::array<Vec2, 2> centers{};  ///< centers[0] below the origin, centers[1] above
  WellPair W;                     ///< shear normal form F = Id + nu1 e1 (x) e2
  double cutoff_R = 0.0;
  double mu_target = 0.0;

  /// Geometry from Rlen and T; W and cutoff_R are left for the caller.
  static LensConstruction from_geometry(double Rlen, double T);

  bool contains(const Vec2& x) const;
  double area() const;
  double perimeter() const;
  /// Euclidean distance to the lens (0 inside).
  double distance(const Vec2& x) const;
  CutoffProfile cutoff() const { return CutoffProfile{cutoff_R}; }
};

/// Area of the lens with diameter Rlen and thickness T (two circular
/// segments of sagitta T/2).
double lens_area(double Rlen, double T);

/// Thickness T with lens_area(Rlen, T) = mu. Throws DomainError when mu is
/// at least the area of the disc of diameter Rlen.
LensConstruction solve_lens(double mu, double Rlen);

/// u0: nu1 x2 e1 in the lens; constant along the outward normals of each arc
/// (the value at the foot point); 0 in the two lateral wedges.
Vec2 u0(const Vec2& x, const LensConstruction& lens);

/// v(x) = omega(|x|) u0(x) + x.
Vec2 deformation(const Vec2& x, const LensConstruction& lens);

/// Reduce an arbitrary well to the shear normal form used by the
/// construction: polar part first, then the rank-one conjugation.
WellPair shear_well(const WellPair& W);

struct Configuration {
  ScalarField chi;
  VectorField v;
  std::optional<LensConstruction> lens;  ///< empty on the ball branch
  WellPair W;                            ///< shear form the fields are built for
  double ball_radius = 0.0;              ///< ball branch only
  bool ball_branch() const { return !lens.has_value(); }
};

/// Lens configuration for mu > 1 (Rlen defaults to mu^(2/3), cutoff_R =
/// Rlen), ball of area mu with v = id for mu <= 1. Throws ResolutionError
/// when the window cannot hold B_{2 cutoff_R} or T spans fewer than 8 cells.
Configuration build_configuration(double mu, const WellPair& W, const GridSpec& grid,
                                  std::optional<double> Rlen = std::nullopt);

/// Ball of radius r at the origin, rasterized by cell centers, with its
/// analytic perimeter attached.
ScalarField ball_indicator(const GridSpec& grid, double r, const Vec2& center = {});

struct AdmissibilityReport {
  double outside_deviation = 0.0;  ///< max |grad v - Id| over cells clear of the lens
  double C_outside = 0.0;          ///< outside_deviation / (|F| mu^(-1/3))
  BilipReport bilip;
  int injectivity_pairs = 0;
  int injectivity_failures = 0;
  double min_stretch = 1.0;        ///< min |v(x)-v(y)| / |x-y| over sampled pairs
  double u0_gradient = 0.0;        ///< max |grad u0| over cells clear of the lens
  double C_u0 = 0.0;               ///< u0_gradient / (T / Rlen)
  bool admissible = true;
  int cell_i = -1;                 ///< first offending cell, if any
  int cell_j = -1;
};

/// Certificates for a built configuration. Random pairs are drawn from a
/// generator seeded with `seed`.
AdmissibilityReport admissibility_report(const Configuration& cfg, std::uint64_t seed = 1,
                                         int pairs = 10000);

}  // namespace twowell
