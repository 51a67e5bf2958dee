#include "twowell/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "twowell/errors.hpp"
#include "twowell/pushforward.hpp"

namespace twowell {

void RigidityConstants::validate() const {
  auto unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!(eta > 0.0) || !(eta0 > 0.0)) throw DomainError("rigidity: eta and eta0 must be positive");
  if (!unit(delta) || !unit(theta) || !unit(alpha)) {
    throw DomainError("rigidity: delta, theta and alpha must lie in (0, 1)");
  }
  if (rho_samples < 64) throw DomainError("rigidity: need at least 64 rho samples");
}

namespace {

void require_same_grid(const ScalarField& chi, const VectorField& v, const char* who) {
  if (!(chi.grid == v.grid)) throw ShapeError(std::string(who) + ": grid mismatch");
}

void require_ball_inside(const GridSpec& g, const Ball& ball, const char* who) {
  if (!(ball.radius > 0.0)) throw DomainError(std::string(who) + ": ball radius must be positive");
  const Vec2& c = ball.center;
  if (c.x1 - ball.radius < -g.L || c.x1 + ball.radius > g.L || c.x2 - ball.radius < -g.L ||
      c.x2 + ball.radius > g.L) {
    throw DomainError(std::string(who) + ": ball leaves the window");
  }
}

// Inclusive cell index range covering a ball.
struct CellBox {
  int i0, i1, j0, j1;
};

CellBox cell_box(const GridSpec& g, const Vec2& c, double r) {
  const double h = g.h();
  return {std::max(0, static_cast<int>(std::floor((c.x1 - r + g.L) / h))),
          std::min(g.n - 1, static_cast<int>(std::floor((c.x1 + r + g.L) / h))),
          std::max(0, static_cast<int>(std::floor((c.x2 - r + g.L) / h))),
          std::min(g.n - 1, static_cast<int>(std::floor((c.x2 + r + g.L) / h)))};
}

// Value at position ceil(q * N) - 1 of the sorted sample.
double upper_quantile(std::vector<double> xs, double q) {
  if (xs.empty()) return std::numeric_limits<double>::infinity();
  std::sort(xs.begin(), xs.end());
  const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(xs.size())));
  return xs[std::clamp<std::size_t>(k, 1, xs.size()) - 1];
}

bool dilated_hit(const ScalarField& chi, const Vec2& z) {
  const GridSpec& g = chi.grid;
  const auto [ci, cj] = g.cell_of(z);
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) {
      const int i = ci + di;
      const int j = cj + dj;
      if (i < 0 || j < 0 || i >= g.n || j >= g.n) continue;
      if (chi.at(i, j) > 0.5) return true;
    }
  }
  return false;
}

int nodes_for(double len, double h) { return std::max(4, static_cast<int>(std::ceil(4.0 * len / h))); }

double distortion(const VectorField& v, const Vec2& x, const Vec2& y) {
  const double d = norm(x - y);
  if (d == 0.0) return 0.0;
  return std::abs(1.0 - norm(v.interpolate(x) - v.interpolate(y)) / d);
}

struct ImageSegment {
  double energy = 0.0;
  bool hits_M = false;
};

// Segment [v(x), v(y)] in the deformed configuration. The inverse gradient is
// the inverse of the bilinear Jacobian at the preimage; chi_1 is looked up on
// the pushed-forward indicator. Nodes outside the image count as hitting M.
ImageSegment image_segment(const ScalarField& chi, const ScalarField& chi1, const VectorField& v,
                           const InverseMap& inv, const WellPair& W, const Vec2& x, const Vec2& y) {
  ImageSegment out;
  const Vec2 p = v.interpolate(x);
  const Vec2 q = v.interpolate(y);
  const double len = norm(q - p);
  if (len == 0.0) return out;
  const int nodes = nodes_for(len, v.grid.h());
  double s = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const Vec2 z = p + ((k + 0.5) / nodes) * (q - p);
    if (dilated_hit(chi1, z)) out.hits_M = true;
    const InverseMap::Hit hit = inv.locate(z);
    if (hit.status != InverseMap::Status::Found) {
      out.hits_M = true;
      continue;
    }
    const Mat2 J = inv.jacobian(hit.cell_i, hit.cell_j, hit.s, hit.t);
    s += inverse_elastic_density(chi.nearest(hit.x), inverse(J), W);
  }
  out.energy = s * len / nodes;
  return out;
}

LineScan scan_lines(const ScalarField& chi, const VectorField& v, const WellPair& W, const Ball& ball,
                    double m, const RigidityConstants& k, bool horizontal) {
  require_same_grid(chi, v, "line scan");
  require_ball_inside(chi.grid, ball, "line scan");
  k.validate();
  if (!(m >= 1.0)) throw DomainError("line scan: m must be >= 1");

  LineScan out;
  out.horizontal = horizontal;
  out.scale = ball.radius / m;
  out.half_height = k.delta;
  const double h = chi.grid.h();
  const double extent = horizontal ? 2.0 * k.delta : 1.0;  // range of the parameter
  const double lo = horizontal ? -k.delta : -0.5;
  const int count = std::max(8, static_cast<int>(std::floor(extent * out.scale / h)));
  out.ball_energy = elastic_energy_ball(chi, v, W, ball.center, ball.radius);

  std::vector<double> free_energies;
  for (int c = 0; c < count; ++c) {
    out.params.push_back(lo + (c + 0.5) * extent / count);
    const auto [x, y] = out.segment(static_cast<std::size_t>(c), ball.center);
    out.energies.push_back(segment_energy(chi, v, W, x, y));
    out.hits_M.push_back(!segment_avoids(chi, x, y));
    if (!out.hits_M.back()) free_energies.push_back(out.energies.back());
  }
  if (free_energies.empty()) {
    throw HypothesisError(std::string("no ") + (horizontal ? "horizontal" : "vertical") +
                          " line avoids M; the inclusion is not small in this ball (eta too large)");
  }
  out.threshold = upper_quantile(free_energies, 1.0 - k.theta);
  for (std::size_t c = 0; c < out.params.size(); ++c) {
    out.accepted.push_back(!out.hits_M[c] && out.energies[c] <= out.threshold);
  }
  return out;
}

}  // namespace

SmallnessReport check_smallness(const ScalarField& chi, const Ball& ball, double eta) {
  const GridSpec& g = chi.grid;
  const CellBox box = cell_box(g, ball.center, ball.radius);
  double count = 0.0;
  bool all_inside = true;  // every inclusion cell lies in the ball
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (chi.at(i, j) <= 0.5) continue;
      const bool in = i >= box.i0 && i <= box.i1 && j >= box.j0 && j <= box.j1 &&
                      ball.contains(g.cell_center(i, j));
      if (in) {
        count += 1.0;
      } else {
        all_inside = false;
      }
    }
  }
  SmallnessReport r;
  r.volume = count * g.cell_area();
  const bool whole = all_inside && chi.exact_perimeter &&
                     count > 0.0;  // analytic perimeter applies only to the full shape
  r.perimeter = whole ? *chi.exact_perimeter : contour_length(chi, ball);
  r.volume_ratio = r.volume / (ball.radius * ball.radius);
  r.perimeter_ratio = r.perimeter / ball.radius;
  r.holds = r.volume_ratio <= eta && r.perimeter_ratio <= eta;
  return r;
}

bool segment_avoids(const ScalarField& chi, const Vec2& x, const Vec2& y) {
  const double len = norm(y - x);
  const int nodes = nodes_for(len, chi.grid.h());
  for (int k = 0; k <= nodes; ++k) {
    if (dilated_hit(chi, x + (static_cast<double>(k) / nodes) * (y - x))) return false;
  }
  return true;
}

int LineScan::accepted_count() const {
  return static_cast<int>(std::count(accepted.begin(), accepted.end(), true));
}

std::pair<Vec2, Vec2> LineScan::segment(std::size_t k, const Vec2& center) const {
  const double p = params.at(k);
  if (horizontal) {
    return {center + scale * Vec2{-0.5, p}, center + scale * Vec2{0.5, p}};
  }
  return {center + scale * Vec2{p, -half_height}, center + scale * Vec2{p, half_height}};
}

LineScan good_horizontal_lines(const ScalarField& chi, const VectorField& v, const WellPair& W,
                               const Ball& ball, double m, const RigidityConstants& k) {
  return scan_lines(chi, v, W, ball, m, k, true);
}

LineScan good_vertical_lines(const ScalarField& chi, const VectorField& v, const WellPair& W,
                             const Ball& ball, double m, const RigidityConstants& k) {
  return scan_lines(chi, v, W, ball, m, k, false);
}

}  // namespace twowell

namespace twowell {

namespace {
// Integral of 1/|z| over a square of side h centered at the origin, over h.
const double kSelfCell = 4.0 * std::log(1.0 + std::numbers::sqrt2);
}  // namespace

BallDensity::BallDensity(const ScalarField& chi, const VectorField& v, const WellPair& W, const Ball& ball) {
  require_same_grid(chi, v, "BallDensity");
  const GridSpec& g = chi.grid;
  h_ = g.h();
  const CellBox box = cell_box(g, ball.center, ball.radius);
  for (int j = box.j0; j <= box.j1; ++j) {
    for (int i = box.i0; i <= box.i1; ++i) {
      const Vec2 z = g.cell_center(i, j);
      if (!ball.contains(z)) continue;
      centers_.push_back(z);
      values_.push_back(elastic_density(chi.at(i, j), gradient(v, i, j), W) * h_ * h_);
      total_ += values_.back();
    }
  }
}

BallDensity::BallDensity(const ScalarField& f, const Ball& ball) {
  const GridSpec& g = f.grid;
  h_ = g.h();
  const CellBox box = cell_box(g, ball.center, ball.radius);
  for (int j = box.j0; j <= box.j1; ++j) {
    for (int i = box.i0; i <= box.i1; ++i) {
      const Vec2 z = g.cell_center(i, j);
      if (!ball.contains(z)) continue;
      centers_.push_back(z);
      values_.push_back(std::abs(f.at(i, j)) * h_ * h_);
      total_ += values_.back();
    }
  }
}

double BallDensity::weighted(const Vec2& x) const {
  const double half = 0.5 * h_;
  double s = 0.0;
  for (std::size_t k = 0; k < centers_.size(); ++k) {
    if (values_[k] == 0.0) continue;
    const Vec2 d = centers_[k] - x;
    if (std::abs(d.x1) < half && std::abs(d.x2) < half) {
      s += values_[k] * kSelfCell / h_;
    } else {
      s += values_[k] / norm(d);
    }
  }
  return s;
}

NonsingularSelection nonsingular_points(const ScalarField& f, const Ball& ball, double theta, int stride) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("nonsingular_points: theta must lie in (0, 1)");
  if (stride < 1) throw DomainError("nonsingular_points: stride must be positive");
  require_ball_inside(f.grid, ball, "nonsingular_points");
  const BallDensity dens(f, ball);
  const GridSpec& g = f.grid;
  const CellBox box = cell_box(g, ball.center, ball.radius);
  std::vector<Vec2> cand;
  std::vector<double> vals;
  for (int j = box.j0; j <= box.j1; ++j) {
    for (int i = box.i0; i <= box.i1; ++i) {
      if (i % stride != 0 || j % stride != 0) continue;
      const Vec2 z = g.cell_center(i, j);
      if (!ball.contains(z)) continue;
      cand.push_back(z);
      vals.push_back(dens.weighted(z));
    }
  }
  NonsingularSelection out;
  out.candidates = static_cast<int>(cand.size());
  out.threshold = upper_quantile(vals, 1.0 - theta);
  double vmax = 0.0;
  for (std::size_t k = 0; k < cand.size(); ++k) {
    if (vals[k] > out.threshold) continue;
    out.points.push_back(cand[k]);
    out.values.push_back(vals[k]);
    vmax = std::max(vmax, vals[k]);
  }
  out.C = dens.total() > 0.0 ? vmax * ball.radius / dens.total() : 0.0;
  return out;
}

const char* to_string(RhombusItem item) {
  switch (item) {
    case RhombusItem::AvoidM:
      return "(i) sides avoid M";
    case RhombusItem::SegmentEnergy:
      return "(ii) side energy";
    case RhombusItem::WeightedEnergy:
      return "(iii) weighted energy at corners";
    case RhombusItem::ImageAvoidM:
      return "(iv) image sides avoid v(M)";
    case RhombusItem::ImageEnergy:
      return "(v) inverse energy on image sides";
  }
  return "?";
}

std::array<std::pair<Vec2, Vec2>, 6> RhombusReport::segments() const {
  return {{{a, b}, {c, d}, {a, c}, {c, b}, {b, d}, {d, a}}};
}

bool RhombusReport::contains(const Vec2& x) const {
  const double p = rho * half_long;
  const double q = rho * half_short;
  if (!(p > 0.0) || !(q > 0.0)) return false;
  const Vec2 d = x - center;
  return std::abs(d.x1) / p + std::abs(d.x2) / q <= 1.0;
}

namespace {

struct RhoSample {
  double rho = 0.0;
  std::array<double, 6> energy{};
  std::array<bool, 6> hits{};
  std::array<double, 6> image_energy{};
  std::array<bool, 6> image_hits{};
  double max_energy = 0.0;
  double max_image_energy = 0.0;
  double weighted = 0.0;
  bool avoid = true;
  bool image_avoid = true;
};

void set_corners(RhombusReport& r, double rho) {
  r.rho = rho;
  r.a = r.center - Vec2{rho * r.half_long, 0.0};
  r.b = r.center + Vec2{rho * r.half_long, 0.0};
  r.c = r.center + Vec2{0.0, rho * r.half_short};
  r.d = r.center - Vec2{0.0, rho * r.half_short};
}

// Least-squares rotation and shift over the vertices of the rhombus (the
// corners when it contains none), evaluated at the corners.
void rigid_fit(RhombusReport& r, const VectorField& v) {
  const GridSpec& g = v.grid;
  std::vector<Vec2> xs;
  std::vector<Vec2> ys;
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) {
      const Vec2 x = g.vertex(i, j);
      if (!r.contains(x)) continue;
      xs.push_back(x);
      ys.push_back(v.at(i, j));
    }
  }
  if (xs.size() < 3) {
    xs = {r.a, r.b, r.c, r.d};
    ys.clear();
    for (const Vec2& x : xs) ys.push_back(v.interpolate(x));
  }
  Vec2 xm;
  Vec2 ym;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    xm += xs[k];
    ym += ys[k];
  }
  xm *= 1.0 / static_cast<double>(xs.size());
  ym *= 1.0 / static_cast<double>(xs.size());
  Mat2 H{0.0, 0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < xs.size(); ++k) H += outer(ys[k] - ym, xs[k] - xm);
  const Mat2 Q = closest_rotation(H);
  r.rigid_fit_angle = std::atan2(Q.a21, Q.a11);
  r.rigid_fit_shift = ym - Q * xm;
  r.rigid_fit_deviation = 0.0;
  for (const Vec2& x : {r.a, r.b, r.c, r.d}) {
    r.rigid_fit_deviation = std::max(r.rigid_fit_deviation, norm(v.interpolate(x) - Q * x - r.rigid_fit_shift));
  }
}

}  // namespace

RhombusReport find_good_rhombus(const ScalarField& chi, const VectorField& v, const WellPair& W,
                                const Ball& ball, double m, const RigidityConstants& k) {
  const LineScan hor = good_horizontal_lines(chi, v, W, ball, m, k);
  const LineScan ver = good_vertical_lines(chi, v, W, ball, m, k);
  const double S = hor.scale;

  // Cross: the accepted pair whose half-lengths, after cutting the lines to a
  // symmetric cross at their intersection, are closest to the full ones.
  RhombusReport rep;
  double best = -1.0;
  for (std::size_t p = 0; p < hor.params.size(); ++p) {
    if (!hor.accepted[p]) continue;
    const double r0 = hor.params[p];
    for (std::size_t q = 0; q < ver.params.size(); ++q) {
      if (!ver.accepted[q]) continue;
      const double s0 = ver.params[q];
      const double score = std::min((0.5 - std::abs(s0)) / 0.5, (k.delta - std::abs(r0)) / k.delta);
      if (score > best) {
        best = score;
        rep.center = ball.center + S * Vec2{s0, r0};
        rep.half_long = S * (0.5 - std::abs(s0));
        rep.half_short = S * (k.delta - std::abs(r0));
      }
    }
  }
  if (best <= 0.0) throw HypothesisError("no accepted horizontal and vertical line form a cross");

  const PushforwardResult pf = pushforward_chi(chi, v);
  const InverseMap inv(v);
  const BallDensity dens(chi, v, W, ball);
  rep.ball_energy = dens.total();
  rep.ball_radius = ball.radius;
  rep.pushforward_indeterminate = pf.indeterminate;

  std::vector<RhoSample> samples(static_cast<std::size_t>(k.rho_samples));
  for (int t = 0; t < k.rho_samples; ++t) {
    RhoSample& s = samples[static_cast<std::size_t>(t)];
    s.rho = 0.25 + 0.5 * (t + 0.5) / k.rho_samples;
    set_corners(rep, s.rho);
    const auto segs = rep.segments();
    for (std::size_t e = 0; e < 6; ++e) {
      const auto& [x, y] = segs[e];
      s.energy[e] = segment_energy(chi, v, W, x, y);
      s.hits[e] = !segment_avoids(chi, x, y);
      const ImageSegment img = image_segment(chi, pf.chi, v, inv, W, x, y);
      s.image_energy[e] = img.energy;
      s.image_hits[e] = img.hits_M;
      s.max_energy = std::max(s.max_energy, s.energy[e]);
      s.max_image_energy = std::max(s.max_image_energy, s.image_energy[e]);
      s.avoid = s.avoid && !s.hits[e];
      s.image_avoid = s.image_avoid && !s.image_hits[e];
    }
    for (const Vec2& x : {rep.a, rep.b, rep.c, rep.d}) s.weighted = std::max(s.weighted, dens.weighted(x));
  }

  std::vector<double> e_all, w_all, ie_all;
  for (const RhoSample& s : samples) {
    e_all.push_back(s.max_energy);
    w_all.push_back(s.weighted);
    ie_all.push_back(s.max_image_energy);
  }
  const double e_cut = upper_quantile(e_all, 1.0 - k.theta);
  const double w_cut = upper_quantile(w_all, 1.0 - k.theta);
  const double ie_cut = upper_quantile(ie_all, 1.0 - k.theta);

  const RhoSample* chosen = nullptr;
  rep.rho_tested = k.rho_samples;
  for (const RhoSample& s : samples) {
    const std::array<bool, kRhombusItems> ok{s.avoid, s.max_energy <= e_cut, s.weighted <= w_cut, s.image_avoid,
                                             s.max_image_energy <= ie_cut};
    bool good = true;
    for (int it = 0; it < kRhombusItems; ++it) {
      if (!ok[static_cast<std::size_t>(it)]) {
        ++rep.item_failures[static_cast<std::size_t>(it)];
        good = false;
      }
    }
    if (!good) continue;
    ++rep.rho_good;
    if (chosen == nullptr || s.max_energy < chosen->max_energy) chosen = &s;
  }
  if (chosen == nullptr) {
    const auto worst = std::max_element(rep.item_failures.begin(), rep.item_failures.end());
    const auto item = static_cast<RhombusItem>(worst - rep.item_failures.begin());
    throw HypothesisError(std::string("no good rhombus among ") + std::to_string(k.rho_samples) +
                          " homothety factors; most frequent failure: " + to_string(item) + " (" +
                          std::to_string(*worst) + " times)");
  }

  set_corners(rep, chosen->rho);
  rep.segment_energies = chosen->energy;
  rep.intersects_M = chosen->hits;
  rep.image_energies = chosen->image_energy;
  rep.image_intersects_M = chosen->image_hits;
  rep.weighted_energy = chosen->weighted;
  for (const auto& [x, y] : rep.segments()) {
    rep.max_length_distortion = std::max(rep.max_length_distortion, distortion(v, x, y));
  }
  rigid_fit(rep, v);
  if (rep.ball_energy > 0.0) {
    rep.C_distortion = rep.max_length_distortion * ball.radius / std::sqrt(rep.ball_energy);
  } else {
    rep.C_distortion = rep.max_length_distortion > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return rep;
}

double bad_set_measure(const ScalarField& chi, const VectorField& v, const WellPair& W,
                       const std::function<bool(const Vec2&)>& region) {
  require_same_grid(chi, v, "bad_set_measure");
  const GridSpec& g = v.grid;
  std::size_t count = 0;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (!region(g.cell_center(i, j))) continue;
      const Mat2 G = gradient(v, i, j);
      if (dist_well(G, W.F) < dist_so2(G)) ++count;
    }
  }
  return static_cast<double>(count) * g.cell_area();
}

double lower_bound_ratio(const ScalarField& chi, const VectorField& v, const WellPair& W,
                         const Ball& ball, double alpha, double eta) {
  require_same_grid(chi, v, "lower_bound_ratio");
  require_ball_inside(chi.grid, ball, "lower_bound_ratio");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("lower_bound_ratio: alpha must lie in (0, 1)");
  const SmallnessReport sm = check_smallness(chi, ball, eta);
  if (!sm.holds) {
    throw HypothesisError("lower_bound_ratio: smallness fails on the ball: |M|/R^2 = " +
                          std::to_string(sm.volume_ratio) + ", Per/R = " + std::to_string(sm.perimeter_ratio) +
                          ", eta = " + std::to_string(eta));
  }
  const GridSpec& g = chi.grid;
  const Ball inner{ball.center, alpha * ball.radius};
  const CellBox box = cell_box(g, inner.center, inner.radius);
  double mass = 0.0;
  for (int j = box.j0; j <= box.j1; ++j)
    for (int i = box.i0; i <= box.i1; ++i)
      if (inner.contains(g.cell_center(i, j))) mass += chi.at(i, j);
  mass *= g.cell_area();
  if (mass == 0.0) return std::numeric_limits<double>::infinity();
  const double e = elastic_energy_ball(chi, v, W, ball.center, ball.radius);
  return e * ball.radius * ball.radius / (mass * mass);
}

void write_report(std::ostream& os, const RhombusReport& r) {
  auto vec = [&](const char* key, const Vec2& x) { os << key << '=' << x.x1 << ',' << x.x2 << '\n'; };
  vec("a", r.a);
  vec("b", r.b);
  vec("c", r.c);
  vec("d", r.d);
  vec("center", r.center);
  os << "rho=" << r.rho << '\n';
  os << "half_long=" << r.half_long << '\n' << "half_short=" << r.half_short << '\n';
  static const char* names[6] = {"ab", "cd", "ac", "cb", "bd", "da"};
  for (std::size_t e = 0; e < 6; ++e) {
    os << "segment_energy_" << names[e] << '=' << r.segment_energies[e] << '\n';
    os << "intersects_M_" << names[e] << '=' << (r.intersects_M[e] ? 1 : 0) << '\n';
    os << "image_energy_" << names[e] << '=' << r.image_energies[e] << '\n';
    os << "image_intersects_M_" << names[e] << '=' << (r.image_intersects_M[e] ? 1 : 0) << '\n';
  }
  os << "weighted_energy=" << r.weighted_energy << '\n';
  os << "max_length_distortion=" << r.max_length_distortion << '\n';
  os << "rigid_fit_deviation=" << r.rigid_fit_deviation << '\n';
  os << "rigid_fit_angle=" << r.rigid_fit_angle << '\n';
  vec("rigid_fit_shift", r.rigid_fit_shift);
  os << "ball_radius=" << r.ball_radius << '\n';
  os << "ball_energy=" << r.ball_energy << '\n';
  os << "C_distortion=" << r.C_distortion << '\n';
  os << "rho_tested=" << r.rho_tested << '\n' << "rho_good=" << r.rho_good << '\n';
  for (int it = 0; it < kRhombusItems; ++it) {
    os << "failures_item" << (it + 1) << '=' << r.item_failures[static_cast<std::size_t>(it)] << '\n';
  }
  os << "pushforward_indeterminate=" << r.pushforward_indeterminate << '\n';
}

}  // namespace twowell
