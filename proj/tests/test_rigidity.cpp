#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "twowell/construction.hpp"
#include "twowell/errors.hpp"
#include "twowell/rigidity.hpp"

using namespace twowell;

namespace {

const WellPair kW = WellPair::from_lambda(0.5);

// Horizontal band |x2 - y0| < w.
ScalarField strip(const GridSpec& g, double y0, double w) {
  ScalarField chi(g);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      if (std::abs(g.cell_center(i, j).x2 - y0) < w) chi.at(i, j) = 1.0;
  return chi;
}

struct LensFixture {
  GridSpec g = GridSpec::make(256, 40.0);
  Configuration cfg = build_configuration(64.0, kW, g);
  Ball ball{{0.0, 12.0}, 8.0};
};

}  // namespace

TEST_CASE("rigidity constants validation") {
  RigidityConstants k;
  CHECK_NOTHROW(k.validate());
  k.delta = 1.0;
  CHECK_THROWS_AS(k.validate(), DomainError);
  k = RigidityConstants{};
  k.rho_samples = 10;
  CHECK_THROWS_AS(k.validate(), DomainError);
  k = RigidityConstants{};
  k.eta = 0.0;
  CHECK_THROWS_AS(k.validate(), DomainError);
}

TEST_CASE("smallness of a small disc in a large ball") {
  const GridSpec g = GridSpec::make(512, 4.0);
  const ScalarField chi = ball_indicator(g, 0.1);
  const SmallnessReport s = check_smallness(chi, Ball{{}, 1.0}, 0.7);
  CHECK(s.volume == doctest::Approx(std::numbers::pi * 0.01).epsilon(0.05));
  CHECK(s.perimeter == doctest::Approx(2.0 * std::numbers::pi * 0.1).epsilon(0.03));
  CHECK(s.volume_ratio == doctest::Approx(s.volume));
  CHECK(s.holds);
  CHECK_FALSE(check_smallness(chi, Ball{{}, 1.0}, 0.5).holds);
}

TEST_CASE("segment_avoids uses a one-cell dilation") {
  const GridSpec g = GridSpec::make(32, 1.0);
  ScalarField chi(g);
  chi.at(16, 16) = 1.0;
  const double h = g.h();
  const Vec2 c = g.cell_center(16, 16);
  CHECK_FALSE(segment_avoids(chi, c + Vec2{-0.3, 0.0}, c + Vec2{0.3, 0.0}));
  CHECK_FALSE(segment_avoids(chi, c + Vec2{-0.3, h}, c + Vec2{0.3, h}));
  CHECK(segment_avoids(chi, c + Vec2{-0.3, 3.0 * h}, c + Vec2{0.3, 3.0 * h}));
  CHECK(segment_avoids(ScalarField(g), {-0.4, -0.4}, {0.4, 0.4}));
}

TEST_CASE("all lines are accepted without inclusion and strain") {
  const GridSpec g = GridSpec::make(128, 4.0);
  const VectorField v = VectorField::affine(g, Mat2::rotation(0.7), {0.2, -0.1});
  const Ball ball{{}, 1.5};
  for (const LineScan& s : {good_horizontal_lines(ScalarField(g), v, kW, ball, 1.0),
                            good_vertical_lines(ScalarField(g), v, kW, ball, 1.0)}) {
    CHECK(s.params.size() >= 8);
    // Energies are roundoff, so only the quantile rule is guaranteed.
    CHECK(s.accepted_count() >= 0.9 * static_cast<double>(s.params.size()));
    CHECK(s.ball_energy < 1e-20);
    for (const double e : s.energies) CHECK(e < 1e-20);
  }
}

TEST_CASE("line scan geometry") {
  const GridSpec g = GridSpec::make(128, 4.0);
  const Ball ball{{0.1, -0.2}, 1.5};
  const double m = 1.5;
  const LineScan hs = good_horizontal_lines(ScalarField(g), VectorField::identity(g), kW, ball, m);
  const LineScan vs = good_vertical_lines(ScalarField(g), VectorField::identity(g), kW, ball, m);
  CHECK(hs.scale == doctest::Approx(1.0));
  for (std::size_t k = 0; k < hs.params.size(); ++k) {
    CHECK(std::abs(hs.params[k]) < 0.2);
    const auto [x, y] = hs.segment(k, ball.center);
    CHECK(norm(y - x) == doctest::Approx(hs.scale));
    CHECK(x.x2 == doctest::Approx(ball.center.x2 + hs.params[k] * hs.scale));
  }
  for (std::size_t k = 0; k < vs.params.size(); ++k) {
    CHECK(std::abs(vs.params[k]) < 0.5);
    const auto [x, y] = vs.segment(k, ball.center);
    CHECK(norm(y - x) == doctest::Approx(0.4 * vs.scale));
  }
  // Parameters are sorted and at least one cell apart.
  for (std::size_t k = 1; k < vs.params.size(); ++k) CHECK((vs.params[k] - vs.params[k - 1]) * vs.scale >= g.h() - 1e-12);
}

TEST_CASE("a strip excludes the horizontal lines near it") {
  const GridSpec g = GridSpec::make(256, 4.0);
  const double y0 = 0.15;
  const double w = 0.03;
  const ScalarField chi = strip(g, y0, w);
  const Ball ball{{}, 1.5};
  const LineScan s = good_horizontal_lines(chi, VectorField::identity(g), kW, ball, 1.0);
  const double h = g.h();
  int hits = 0;
  for (std::size_t k = 0; k < s.params.size(); ++k) {
    const double dist = std::abs(s.params[k] * s.scale - y0);
    if (dist < w - h) CHECK(s.hits_M[k]);
    if (dist > w + 2.0 * h) CHECK_FALSE(s.hits_M[k]);
    if (s.hits_M[k]) {
      ++hits;
      CHECK_FALSE(s.accepted[k]);
    }
  }
  CHECK(hits > 0);
  // The strip makes the scan refuse when it covers the whole cross.
  const ScalarField wide = strip(g, 0.0, 0.5);
  CHECK_THROWS_AS(good_horizontal_lines(wide, VectorField::identity(g), kW, ball, 1.0), HypothesisError);
}

TEST_CASE("line scan argument errors") {
  const GridSpec g = GridSpec::make(64, 4.0);
  const VectorField v = VectorField::identity(g);
  CHECK_THROWS_AS(good_horizontal_lines(ScalarField(g), v, kW, Ball{{}, 1.0}, 0.5), DomainError);
  CHECK_THROWS_AS(good_horizontal_lines(ScalarField(g), v, kW, Ball{{3.5, 0.0}, 1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(good_horizontal_lines(ScalarField(GridSpec::make(32, 4.0)), v, kW, Ball{{}, 1.0}, 1.0),
                  ShapeError);
}

TEST_CASE("lines over the lens keep the best fraction of M-free lines") {
  const LensFixture f;
  const RigidityConstants k;
  for (const bool horizontal : {true, false}) {
    const LineScan s = horizontal ? good_horizontal_lines(f.cfg.chi, f.cfg.v, f.cfg.W, f.ball, 2.0, k)
                                  : good_vertical_lines(f.cfg.chi, f.cfg.v, f.cfg.W, f.ball, 2.0, k);
    int free = 0;
    double worst_accepted = 0.0;
    double best_rejected = INFINITY;
    for (std::size_t q = 0; q < s.params.size(); ++q) {
      if (s.hits_M[q]) continue;
      ++free;
      if (s.accepted[q]) {
        worst_accepted = std::max(worst_accepted, s.energies[q]);
      } else {
        best_rejected = std::min(best_rejected, s.energies[q]);
      }
    }
    REQUIRE(free > 0);
    CHECK(s.accepted_count() >= (1.0 - k.theta) * free);
    CHECK(worst_accepted <= s.threshold);
    CHECK(worst_accepted <= best_rejected);
    CHECK(s.ball_energy > 0.0);
  }
}

TEST_CASE("ball density singular integral at the center of a disc") {
  const GridSpec g = GridSpec::make(256, 4.0);
  const Ball ball{{}, 1.0};
  const ScalarField one(g, 1.0);
  const BallDensity d(one, ball);
  CHECK(d.total() == doctest::Approx(std::numbers::pi).epsilon(0.01));
  // int over B_R of 1/|z| is 2 pi R.
  CHECK(d.weighted(g.cell_center(128, 128)) == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.01));
  // Off center it is 4R E(|x|/R), E the complete elliptic integral.
  for (const int i : {140, 150, 159}) {
    const Vec2 x = g.cell_center(i, 128);
    CHECK(d.weighted(x) == doctest::Approx(4.0 * std::comp_ellint_2(norm(x))).epsilon(0.01));
  }
}

TEST_CASE("nonsingular points avoid a concentrated density") {
  const GridSpec g = GridSpec::make(128, 4.0);
  const Ball ball{{}, 1.0};
  const NonsingularSelection flat = nonsingular_points(ScalarField(g, 1.0), ball, 0.1);
  CHECK(flat.points.size() >= 0.9 * flat.candidates);
  CHECK(flat.C <= 2.0 * 1.02);
  for (const double x : flat.values) CHECK(x <= flat.threshold);

  ScalarField spike(g);
  spike.at(64, 64) = 1.0;
  const NonsingularSelection s = nonsingular_points(spike, ball, 0.1, 1);
  for (const Vec2& p : s.points) CHECK(norm(p - g.cell_center(64, 64)) > 1e-9);
  CHECK_THROWS_AS(nonsingular_points(spike, ball, 1.5), DomainError);
}

TEST_CASE("rigid motions give an exact rhombus") {
  const GridSpec g = GridSpec::make(128, 4.0);
  const VectorField v = VectorField::affine(g, Mat2::rotation(-0.4), {1.0, 2.0});
  const Ball ball{{0.1, 0.0}, 1.5};
  const RhombusReport r = find_good_rhombus(ScalarField(g), v, kW, ball, 1.0);
  CHECK(r.max_length_distortion <= 1e-9);
  CHECK(r.rigid_fit_deviation <= 1e-9);
  CHECK(r.rigid_fit_angle == doctest::Approx(-0.4));
  for (const double e : r.segment_energies) CHECK(e <= 1e-20);
  CHECK(r.ball_energy < 1e-20);
  CHECK(r.rho_good >= 1);
  CHECK(r.rho_tested == 64);
  // Geometry: a, b on the long axis, c, d on the short one.
  CHECK(norm(r.b - r.a) == doctest::Approx(2.0 * r.rho * r.half_long));
  CHECK(norm(r.c - r.d) == doctest::Approx(2.0 * r.rho * r.half_short));
  CHECK(r.rho > 0.25);
  CHECK(r.rho < 0.75);
  CHECK(r.contains(r.center));
  CHECK_FALSE(r.contains(r.center + 1.01 * (r.a - r.center)));
  CHECK(r.segments()[2].first == r.a);
  CHECK(r.segments()[2].second == r.c);
}

TEST_CASE("affine strain: distortion and energy match closed forms") {
  const GridSpec g = GridSpec::make(128, 4.0);
  const Mat2 A{1.0, 0.3, -0.1, 0.5};
  const double t = 0.01;
  const Mat2 G = Mat2::rotation(0.3) * (Mat2::identity() + t * A);
  const VectorField v = VectorField::affine(g, G);
  const Ball ball{{}, 1.5};
  const RhombusReport r = find_good_rhombus(ScalarField(g), v, kW, ball, 1.0);

  const double density = dist_so2(G) * dist_so2(G);
  CHECK(r.ball_energy == doctest::Approx(density * std::numbers::pi * 2.25).epsilon(0.02));
  double distortion = 0.0;
  for (const auto& [x, y] : r.segments()) {
    const Vec2 e = (1.0 / norm(y - x)) * (y - x);
    distortion = std::max(distortion, std::abs(1.0 - norm(G * e)));
  }
  CHECK(r.max_length_distortion == doctest::Approx(distortion).epsilon(1e-9));
  CHECK(r.C_distortion == doctest::Approx(distortion * 1.5 / std::sqrt(r.ball_energy)).epsilon(1e-12));
}

TEST_CASE("rhombus above the lens") {
  const LensFixture f;
  const RhombusReport r = find_good_rhombus(f.cfg.chi, f.cfg.v, f.cfg.W, f.ball, 2.0);
  CHECK(r.rho_good >= 1);
  for (const bool hit : r.intersects_M) CHECK_FALSE(hit);
  for (const bool hit : r.image_intersects_M) CHECK_FALSE(hit);
  CHECK(r.ball_energy > 0.0);
  CHECK(std::isfinite(r.C_distortion));
  CHECK(r.C_distortion < 1.0);
  // The chosen rho is the one with the smallest maximal segment energy.
  CHECK(r.rho == doctest::Approx(0.25 + 0.5 * 0.5 / 64.0));

  std::ostringstream os;
  write_report(os, r);
  const std::string text = os.str();
  for (const char* key : {"rho=", "C_distortion=", "segment_energy_ab=", "image_intersects_M_da=", "rho_good="})
    CHECK(text.find(key) != std::string::npos);
}

TEST_CASE("rhombus refuses a ball inside the inclusion") {
  const GridSpec g = GridSpec::make(64, 4.0);
  const ScalarField chi(g, 1.0);
  CHECK_THROWS_AS(find_good_rhombus(chi, VectorField::identity(g), kW, Ball{{}, 1.0}, 1.0), HypothesisError);
}

TEST_CASE("bad set measure") {
  const GridSpec g = GridSpec::make(128, 4.0);
  const ScalarField chi(g);
  const auto disc = [](double r) { return [r](const Vec2& x) { return norm(x) <= r; }; };
  CHECK(bad_set_measure(chi, VectorField::identity(g), kW, disc(1.0)) == 0.0);
  const VectorField fv = VectorField::affine(g, Mat2::rotation(0.5) * kW.F);
  const double small = bad_set_measure(chi, fv, kW, disc(0.5));
  const double large = bad_set_measure(chi, fv, kW, disc(1.0));
  CHECK(small == doctest::Approx(std::numbers::pi * 0.25).epsilon(0.03));
  CHECK(large == doctest::Approx(std::numbers::pi).epsilon(0.02));
  CHECK(small <= large);
}

TEST_CASE("lower bound ratio") {
  const GridSpec g = GridSpec::make(512, 4.0);
  const Ball ball{{}, 1.0};
  const VectorField id = VectorField::identity(g);
  // Identity on a small inclusion: the energy is dist^2(I, SO(2)F) per unit area.
  const ScalarField chi = ball_indicator(g, 0.04);
  double count = 0.0;
  for (const double c : chi.values) count += c;
  const double area = count * g.cell_area();
  const double ratio = lower_bound_ratio(chi, id, kW, ball, 0.05, 0.3);
  CHECK(ratio == doctest::Approx(1.25 / area).epsilon(1e-9));

  // Nothing in the inner ball.
  const ScalarField off = ball_indicator(g, 0.04, {0.5, 0.0});
  CHECK(std::isinf(lower_bound_ratio(off, id, kW, ball, 0.05, 0.3)));
  // Smallness fails.
  CHECK_THROWS_AS(lower_bound_ratio(ball_indicator(g, 0.5), id, kW, ball, 0.05, 0.3), HypothesisError);
  CHECK_THROWS_AS(lower_bound_ratio(chi, id, kW, ball, 1.5, 0.3), DomainError);
}
