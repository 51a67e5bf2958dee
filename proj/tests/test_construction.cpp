#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "twowell/construction.hpp"
#include "twowell/energy.hpp"
#include "twowell/errors.hpp"

using namespace twowell;

namespace {

// Lens area as a slice integral over x1: the height at x1 is twice the
// circular cap sqrt(rho^2 - x1^2) - (rho - T/2). Midpoint rule, 10^4 slices.
double slice_area(double Rlen, double T) {
  const double rho = (Rlen * Rlen + T * T) / (4.0 * T);
  const int n = 10000;
  const double w = Rlen / n;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = -0.5 * Rlen + (k + 0.5) * w;
    s += 2.0 * (std::sqrt(rho * rho - x * x) - (rho - 0.5 * T));
  }
  return s * w;
}

}  // namespace

TEST_CASE("chord relation for the arc radius") {
  const LensConstruction lens = LensConstruction::from_geometry(10.0, 1.0);
  CHECK(lens.rho == doctest::Approx(25.25).epsilon(1e-15));
  CHECK(lens.centers[0].x2 == doctest::Approx(-24.75));
  CHECK(lens.centers[1].x2 == doctest::Approx(24.75));
  // Corners and poles lie on both circles / the right one.
  CHECK(norm(Vec2{5.0, 0.0} - lens.centers[0]) == doctest::Approx(lens.rho));
  CHECK(norm(Vec2{0.0, 0.5} - lens.centers[0]) == doctest::Approx(lens.rho));
  CHECK_THROWS_AS(LensConstruction::from_geometry(1.0, 2.0), DomainError);
}

TEST_CASE("lens area matches the slice integral") {
  for (const auto& [R, T] : {std::pair{10.0, 1.0}, {4.0, 3.0}, {16.0, 6.0}, {2.0, 2.0}}) {
    const double ref = slice_area(R, T);
    CHECK(lens_area(R, T) == doctest::Approx(ref).epsilon(1e-5));
  }
  CHECK(lens_area(2.0, 2.0) == doctest::Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("thin lenses approach two thirds of R T") {
  const double R = 10.0;
  for (double T : {1e-2, 1e-3}) CHECK(lens_area(R, T) / (R * T) == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("solve_lens hits the target area") {
  for (const auto& [mu, R] : {std::pair{64.0, 16.0}, {4.0, 4.0}, {1e-3, 1.0}, {1024.0, 101.6}}) {
    const LensConstruction lens = solve_lens(mu, R);
    CHECK(std::abs(lens.area() - mu) <= 1e-8 * mu);
    CHECK(std::abs(slice_area(R, lens.T) - mu) <= 1e-6 * mu);
    CHECK(lens.T < R);
  }
  CHECK(solve_lens(128.0, 16.0).T > solve_lens(64.0, 16.0).T);
  CHECK_THROWS_AS(solve_lens(300.0, 16.0), DomainError);
  CHECK_THROWS_AS(solve_lens(-1.0, 16.0), DomainError);
}

TEST_CASE("cutoff profile") {
  const CutoffProfile w{2.0};
  CHECK(w(0.0) == 1.0);
  CHECK(w(2.0) == 1.0);
  CHECK(w(4.0) == 0.0);
  CHECK(w(9.0) == 0.0);
  CHECK(w(3.0) == doctest::Approx(0.5));
  double slope = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double r = 2.0 + 2.0 * k / 1000.0;
    const double fd = (w(r + 1e-6) - w(r - 1e-6)) / 2e-6;
    CHECK(w.derivative(r) == doctest::Approx(fd).epsilon(1e-6).scale(1e-6));
    slope = std::max(slope, std::abs(w.derivative(r)));
  }
  CHECK(slope <= CutoffProfile::max_slope_constant / w.R + 1e-12);
  CHECK(slope * w.R <= std::numbers::pi / 2.0);
}

TEST_CASE("u0 at special points") {
  LensConstruction lens = solve_lens(64.0, 16.0);
  lens.W = WellPair::from_shear(1.5);
  CHECK(norm(u0({0.0, 0.0}, lens)) == 0.0);
  CHECK(norm(u0({8.0, 0.0}, lens)) < 1e-12);
  CHECK(norm(u0({-8.0, 0.0}, lens)) < 1e-12);
  const Vec2 q = u0({1.0, lens.T / 4.0}, lens);
  CHECK(q.x1 == doctest::Approx(1.5 * lens.T / 4.0));
  CHECK(q.x2 == 0.0);
  // Fan points carry the value of their foot point on the arc.
  const Vec2 far = u0({0.0, lens.T / 2.0 + 3.0}, lens);
  CHECK(far.x1 == doctest::Approx(1.5 * lens.T / 2.0));
  CHECK(norm(u0({20.0, 1.0}, lens)) == 0.0);  // lateral wedge
}

TEST_CASE("u0 is continuous across every branch boundary") {
  LensConstruction lens = solve_lens(64.0, 16.0);
  lens.W = WellPair::from_shear(1.5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double alpha = std::asin(0.5 * lens.Rlen / lens.rho);
  const double eps = 1e-11;
  double jump = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int arc = k % 2;               // which circle
    const double sgn = arc == 0 ? 1.0 : -1.0;
    const Vec2 c = lens.centers[static_cast<std::size_t>(arc)];
    Vec2 p;
    Vec2 n;
    if (k % 4 < 2) {
      // Across the arc.
      const double a = alpha * (2.0 * unit(rng) - 1.0);
      n = Vec2{std::sin(a), sgn * std::cos(a)};
      p = c + lens.rho * n;
    } else {
      // Across the ray bounding the fan, beyond the corner.
      const double side = unit(rng) < 0.5 ? -1.0 : 1.0;
      const Vec2 dir{side * std::sin(alpha), sgn * std::cos(alpha)};
      p = c + (lens.rho + 10.0 * unit(rng)) * dir;
      n = Vec2{dir.x2, -dir.x1};
    }
    jump = std::max(jump, norm(u0(p + eps * n, lens) - u0(p - eps * n, lens)));
  }
  CHECK(jump <= 1e-10);
}

TEST_CASE("u0 is bounded by the lens thickness") {
  LensConstruction lens = solve_lens(64.0, 16.0);
  lens.W = WellPair::from_shear(1.5);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-40.0, 40.0);
  double sup = 0.0;
  for (int k = 0; k < 20000; ++k) sup = std::max(sup, norm(u0({d(rng), d(rng)}, lens)));
  CHECK(sup <= 1.5 * lens.T / 2.0 + 1e-12);
  CHECK(sup >= 0.9 * 1.5 * lens.T / 2.0);
}

TEST_CASE("shear_well reduces any well to shear form") {
  const WellPair W = shear_well(WellPair::from_lambda(0.5));
  CHECK(W.F.a11 == 1.0);
  CHECK(W.F.a21 == 0.0);
  CHECK(W.F.a22 == 1.0);
  CHECK(W.F.a12 == doctest::Approx(1.5));
  const auto [s1, s2] = singular_values(W.F);
  CHECK(s1 == doctest::Approx(2.0));
  CHECK(s2 == doctest::Approx(0.5));
  const WellPair S = WellPair::from_shear(0.8);
  CHECK(shear_well(S).F == S.F);
}

TEST_CASE("ball branch for small volume") {
  const double mu = 0.25;
  const GridSpec g = GridSpec::make(256, 2.5 * std::sqrt(mu));
  const Configuration cfg = build_configuration(mu, WellPair::from_lambda(0.5), g);
  CHECK(cfg.ball_branch());
  const EnergyBreakdown e = total_energy(cfg.chi, cfg.v, cfg.W);
  CHECK(e.interface == doctest::Approx(2.0 * std::sqrt(std::numbers::pi * mu)).epsilon(0.02));
  CHECK(e.mu == doctest::Approx(mu).epsilon(0.02));
  CHECK(bilip_constant(cfg.v).m == 1.0);
  const AdmissibilityReport rep = admissibility_report(cfg);
  CHECK(rep.admissible);
  CHECK(rep.bilip.m == 1.0);
}

TEST_CASE("lens configuration at mu = 64") {
  const double mu = 64.0;
  const GridSpec g = GridSpec::make(256, 40.0);
  const Configuration cfg = build_configuration(mu, WellPair::from_lambda(0.5), g);
  REQUIRE(cfg.lens);
  const LensConstruction& lens = *cfg.lens;
  CHECK(lens.Rlen == doctest::Approx(16.0));
  CHECK(lens.cutoff_R == lens.Rlen);
  const EnergyBreakdown e = total_energy(cfg.chi, cfg.v, cfg.W);
  const double c = e.total / std::pow(mu, 2.0 / 3.0);
  MESSAGE("total / mu^(2/3) = " << c << ", elastic / T^2 = " << e.elastic / (lens.T * lens.T));
  CHECK(c < 20.0);
  CHECK(e.mu == doctest::Approx(mu).epsilon(0.02));

  double outside = 0.0;
  double inside = 0.0;
  const double h = g.h();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const Vec2 z = g.cell_center(i, j);
      const Mat2 G = gradient(cfg.v, i, j);
      if (norm(z) > 2.0 * lens.cutoff_R + h) outside = std::max(outside, frob(G - Mat2::identity()));
      // Cells whose four vertices are all inside the lens.
      bool all_in = true;
      for (const Vec2 o : {Vec2{-0.5, -0.5}, {0.5, -0.5}, {-0.5, 0.5}, {0.5, 0.5}})
        all_in = all_in && lens.contains(z + h * o);
      if (all_in) inside = std::max(inside, frob(G - cfg.W.F));
    }
  }
  CHECK(outside == 0.0);
  CHECK(inside < 1e-10);
}

TEST_CASE("construction rejects coarse or small windows") {
  const WellPair W = WellPair::from_lambda(0.5);
  CHECK_THROWS_AS(build_configuration(64.0, W, GridSpec::make(64, 40.0)), ResolutionError);
  CHECK_THROWS_AS(build_configuration(64.0, W, GridSpec::make(512, 20.0)), ResolutionError);
  CHECK_THROWS_AS(build_configuration(0.01, W, GridSpec::make(16, 1.0)), ResolutionError);
  CHECK_THROWS_AS(build_configuration(0.0, W, GridSpec::make(64, 1.0)), DomainError);
}

TEST_CASE("admissibility of the lens construction") {
  const GridSpec g = GridSpec::make(256, 40.0);
  const Configuration cfg = build_configuration(64.0, WellPair::from_lambda(0.5), g);
  const AdmissibilityReport rep = admissibility_report(cfg, 7, 10000);
  CHECK(rep.admissible);
  CHECK(rep.injectivity_failures == 0);
  CHECK(rep.injectivity_pairs > 9000);
  CHECK(rep.min_stretch > 0.0);
  CHECK(rep.outside_deviation > 0.0);
  CHECK(std::isfinite(rep.C_outside));
  CHECK(std::isfinite(rep.C_u0));
  // Same seed, same report.
  const AdmissibilityReport again = admissibility_report(cfg, 7, 10000);
  CHECK(again.min_stretch == rep.min_stretch);
}

TEST_CASE("a folded field is reported as not admissible") {
  const GridSpec g = GridSpec::make(256, 40.0);
  Configuration cfg = build_configuration(64.0, WellPair::from_lambda(0.5), g);
  cfg.v.at(100, 100) = cfg.v.at(103, 103);
  const AdmissibilityReport rep = admissibility_report(cfg);
  CHECK_FALSE(rep.admissible);
  CHECK(rep.cell_i >= 99);
  CHECK(rep.cell_i <= 103);
}
