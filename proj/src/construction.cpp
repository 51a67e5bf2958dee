#include "twowell/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "twowell/errors.hpp"

namespace twowell {

double CutoffProfile::operator()(double r) const {
  if (r <= R) return 1.0;
  if (r >= 2.0 * R) return 0.0;
  const double s = (r - R) / R;
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

double CutoffProfile::derivative(double r) const {
  if (r <= R || r >= 2.0 * R) return 0.0;
  const double s = (r - R) / R;
  return -6.0 * s * (1.0 - s) / R;
}

double lens_area(double Rlen, double T) {
  const double rho = (Rlen * Rlen + T * T) / (4.0 * T);
  // Segment of sagitta T/2: half-angle theta with cos(theta) = (rho - T/2) / rho.
  const double c = std::clamp((rho - 0.5 * T) / rho, -1.0, 1.0);
  const double theta = std::acos(c);
  return 2.0 * rho * rho * (theta - std::sin(theta) * c);
}

LensConstruction LensConstruction::from_geometry(double Rlen, double T) {
  if (!(Rlen > 0.0) || !(T > 0.0) || T > Rlen) {
    throw DomainError("lens geometry needs 0 < T <= Rlen");
  }
  LensConstruction lens;
  lens.Rlen = Rlen;
  lens.T = T;
  lens.rho = (Rlen * Rlen + T * T) / (4.0 * T);
  const double off = lens.rho - 0.5 * T;
  lens.centers = {Vec2{0.0, -off}, Vec2{0.0, off}};
  lens.cutoff_R = Rlen;
  lens.mu_target = lens.area();
  return lens;
}

bool LensConstruction::contains(const Vec2& x) const {
  return norm(x - centers[0]) <= rho && norm(x - centers[1]) <= rho;
}

double LensConstruction::area() const { return lens_area(Rlen, T); }

double LensConstruction::perimeter() const { return 4.0 * rho * std::asin(std::min(1.0, Rlen / (2.0 * rho))); }

namespace {

// Which part of the plane x is in: the lens, the normal fan of the upper arc
// (rays from the lower center), the fan of the lower arc, or a side wedge.
enum class Region { Inside, UpperFan, LowerFan, Wedge };

Region classify(const Vec2& x, const LensConstruction& lens) {
  if (lens.contains(x)) return Region::Inside;
  const double sin_alpha = std::min(1.0, 0.5 * lens.Rlen / lens.rho);
  const Vec2 du = x - lens.centers[0];
  const double nu = norm(du);
  if (nu >= lens.rho && du.x2 > 0.0 && std::abs(du.x1) <= sin_alpha * nu) return Region::UpperFan;
  const Vec2 dl = x - lens.centers[1];
  const double nl = norm(dl);
  if (nl >= lens.rho && dl.x2 < 0.0 && std::abs(dl.x1) <= sin_alpha * nl) return Region::LowerFan;
  return Region::Wedge;
}

}  // namespace

double LensConstruction::distance(const Vec2& x) const {
  switch (classify(x, *this)) {
    case Region::Inside:
      return 0.0;
    case Region::UpperFan:
      return norm(x - centers[0]) - rho;
    case Region::LowerFan:
      return norm(x - centers[1]) - rho;
    case Region::Wedge:
      break;
  }
  return std::min(norm(x - Vec2{0.5 * Rlen, 0.0}), norm(x - Vec2{-0.5 * Rlen, 0.0}));
}

LensConstruction solve_lens(double mu, double Rlen) {
  if (!(mu > 0.0) || !(Rlen > 0.0)) throw DomainError("solve_lens: mu and Rlen must be positive");
  const double disc = std::numbers::pi * Rlen * Rlen / 4.0;
  if (mu >= disc) {
    throw DomainError("solve_lens: area " + std::to_string(mu) + " needs T >= Rlen = " +
                      std::to_string(Rlen) + "; choose Rlen > " +
                      std::to_string(2.0 * std::sqrt(mu / std::numbers::pi)));
  }
  double lo = 0.0;
  double hi = Rlen;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lens_area(Rlen, mid) < mu) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * Rlen) break;
  }
  LensConstruction lens = LensConstruction::from_geometry(Rlen, 0.5 * (lo + hi));
  lens.mu_target = mu;
  return lens;
}

Vec2 u0(const Vec2& x, const LensConstruction& lens) {
  const Mat2 D = lens.W.F - Mat2::identity();
  switch (classify(x, lens)) {
    case Region::Inside:
      return D * x;
    case Region::UpperFan: {
      const Vec2 d = x - lens.centers[0];
      return D * (lens.centers[0] + (lens.rho / norm(d)) * d);
    }
    case Region::LowerFan: {
      const Vec2 d = x - lens.centers[1];
      return D * (lens.centers[1] + (lens.rho / norm(d)) * d);
    }
    case Region::Wedge:
      break;
  }
  return {};
}

Vec2 deformation(const Vec2& x, const LensConstruction& lens) {
  return lens.cutoff()(norm(x)) * u0(x, lens) + x;
}

WellPair shear_well(const WellPair& W) {
  const Mat2& F = W.F;
  if (F.a11 == 1.0 && F.a21 == 0.0 && F.a22 == 1.0 && F.a12 > 0.0) return W;
  const Mat2 U = polar_decompose(F).U;
  return WellPair::from_shear(shear_normal_form(U).nu.x1);
}

ScalarField ball_indicator(const GridSpec& grid, double r, const Vec2& center) {
  ScalarField chi(grid);
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i)
      if (norm(grid.cell_center(i, j) - center) <= r) chi.at(i, j) = 1.0;
  chi.exact_perimeter = 2.0 * std::numbers::pi * r;
  return chi;
}

Configuration build_configuration(double mu, const WellPair& W, const GridSpec& grid,
                                  std::optional<double> Rlen) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("build_configuration: mu must be positive");
  Configuration cfg;
  cfg.W = shear_well(W);
  const double h = grid.h();

  if (mu <= 1.0) {
    const double r = std::sqrt(mu / std::numbers::pi);
    if (2.0 * r < 8.0 * h) {
      throw ResolutionError("construction: ball of diameter " + std::to_string(2.0 * r) +
                            " spans fewer than 8 cells (h = " + std::to_string(h) + ")");
    }
    if (grid.L < 2.0 * r) throw ResolutionError("construction: window too small for the ball");
    cfg.ball_radius = r;
    cfg.chi = ball_indicator(grid, r);
    cfg.v = VectorField::identity(grid);
    return cfg;
  }

  LensConstruction lens = solve_lens(mu, Rlen.value_or(std::pow(mu, 2.0 / 3.0)));
  lens.W = cfg.W;
  lens.cutoff_R = lens.Rlen;
  if (grid.L < 2.0 * lens.cutoff_R) {
    throw ResolutionError("construction: window halfwidth " + std::to_string(grid.L) +
                          " < 2 cutoff_R = " + std::to_string(2.0 * lens.cutoff_R));
  }
  if (lens.T < 8.0 * h) {
    throw ResolutionError("construction: lens thickness " + std::to_string(lens.T) +
                          " spans fewer than 8 cells (h = " + std::to_string(h) + ")");
  }

  cfg.chi = ScalarField(grid);
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i)
      if (lens.contains(grid.cell_center(i, j))) cfg.chi.at(i, j) = 1.0;
  cfg.chi.exact_perimeter = lens.perimeter();
  cfg.v = VectorField::sample(grid, [&](const Vec2& x) { return deformation(x, lens); });
  cfg.lens = lens;
  return cfg;
}

AdmissibilityReport admissibility_report(const Configuration& cfg, std::uint64_t seed, int pairs) {
  AdmissibilityReport rep;
  const GridSpec& g = cfg.v.grid;
  const double h = g.h();
  rep.bilip = bilip_constant(cfg.v);
  if (!rep.bilip.admissible) {
    rep.admissible = false;
    rep.cell_i = rep.bilip.cell_i;
    rep.cell_j = rep.bilip.cell_j;
  }

  if (cfg.lens) {
    const LensConstruction& lens = *cfg.lens;
    const VectorField u = VectorField::sample(g, [&](const Vec2& x) { return u0(x, lens); });
    const double clear = h / std::sqrt(2.0) * (1.0 + 1e-9);
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) {
        if (lens.distance(g.cell_center(i, j)) <= clear) continue;
        rep.outside_deviation = std::max(rep.outside_deviation, frob(gradient(cfg.v, i, j) - Mat2::identity()));
        rep.u0_gradient = std::max(rep.u0_gradient, frob(gradient(u, i, j)));
      }
    }
    rep.C_outside = rep.outside_deviation / (frob(lens.W.F) * std::pow(lens.mu_target, -1.0 / 3.0));
    rep.C_u0 = rep.u0_gradient / (lens.T / lens.Rlen);
  }

  // Grid-level injectivity: sampled pairs further apart than one cell must
  // have distinct images. Half the pairs are global, half are a few cells apart.
  const double reach = cfg.lens ? std::min(g.L, 2.0 * cfg.lens->cutoff_R) : g.L;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-reach, reach);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double collide = 1e-9 * g.L;
  for (int k = 0; k < pairs; ++k) {
    const Vec2 x{coord(rng), coord(rng)};
    Vec2 y;
    if (k % 2 == 0) {
      y = Vec2{coord(rng), coord(rng)};
    } else {
      const double r = h * (1.0 + 3.0 * unit(rng));
      const double a = 2.0 * std::numbers::pi * unit(rng);
      y = x + Vec2{r * std::cos(a), r * std::sin(a)};
      if (!g.contains(y)) y = x - Vec2{r * std::cos(a), r * std::sin(a)};
    }
    const double dx = norm(x - y);
    if (dx <= h) continue;
    ++rep.injectivity_pairs;
    const double dv = norm(cfg.v.interpolate(x) - cfg.v.interpolate(y));
    rep.min_stretch = std::min(rep.min_stretch, dv / dx);
    if (dv <= collide) {
      ++rep.injectivity_failures;
      if (rep.admissible) {
        const auto [ci, cj] = g.cell_of(x);
        rep.cell_i = ci;
        rep.cell_j = cj;
      }
      rep.admissible = false;
    }
  }
  return rep;
}

}  // namespace twowell
