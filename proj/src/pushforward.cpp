#include "twowell/pushforward.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "twowell/errors.hpp"

namespace twowell {

namespace {

// Point in a (possibly non-convex) quadrilateral, boundary included.
bool in_quad(const std::array<Vec2, 4>& q, const Vec2& y, double tol) {
  bool inside = false;
  for (int k = 0, l = 3; k < 4; l = k++) {
    const Vec2& a = q[k];
    const Vec2& b = q[l];
    // Points on an edge count as inside.
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 > 0.0) {
      const double t = std::clamp(dot(y - a, ab) / len2, 0.0, 1.0);
      if (norm(a + t * ab - y) <= tol) return true;
    }
    if ((a.x2 > y.x2) != (b.x2 > y.x2)) {
      const double x_cross = a.x1 + (y.x2 - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2);
      if (y.x1 < x_cross) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

InverseMap::InverseMap(const VectorField& v, int max_newton) : v_(&v), max_newton_(max_newton) {
  const GridSpec& g = v.grid;
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi = -lo;
  for (const Vec2& p : v.values) {
    lo.x1 = std::min(lo.x1, p.x1);
    lo.x2 = std::min(lo.x2, p.x2);
    hi.x1 = std::max(hi.x1, p.x1);
    hi.x2 = std::max(hi.x2, p.x2);
  }
  lo_ = lo;
  const double extent = std::max(hi.x1 - lo.x1, hi.x2 - lo.x2);
  bucket_ = std::max(g.h(), extent / (4.0 * g.n));
  nb1_ = static_cast<int>((hi.x1 - lo.x1) / bucket_) + 1;
  nb2_ = static_cast<int>((hi.x2 - lo.x2) / bucket_) + 1;
  buckets_.assign(static_cast<std::size_t>(nb1_) * nb2_, {});

  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const std::array<Vec2, 4> q{v.at(i, j), v.at(i + 1, j), v.at(i + 1, j + 1), v.at(i, j + 1)};
      double x0 = q[0].x1, x1 = q[0].x1, y0 = q[0].x2, y1 = q[0].x2;
      for (const Vec2& p : q) {
        x0 = std::min(x0, p.x1);
        x1 = std::max(x1, p.x1);
        y0 = std::min(y0, p.x2);
        y1 = std::max(y1, p.x2);
      }
      const int b0 = static_cast<int>((x0 - lo_.x1) / bucket_);
      const int b1 = std::min(nb1_ - 1, static_cast<int>((x1 - lo_.x1) / bucket_));
      const int c0 = static_cast<int>((y0 - lo_.x2) / bucket_);
      const int c1 = std::min(nb2_ - 1, static_cast<int>((y1 - lo_.x2) / bucket_));
      for (int c = c0; c <= c1; ++c)
        for (int b = b0; b <= b1; ++b)
          buckets_[static_cast<std::size_t>(c) * nb1_ + b].push_back(j * g.n + i);
    }
  }
}

Vec2 InverseMap::map(int i, int j, double s, double t) const {
  const VectorField& v = *v_;
  return (1 - s) * (1 - t) * v.at(i, j) + s * (1 - t) * v.at(i + 1, j) +
         (1 - s) * t * v.at(i, j + 1) + s * t * v.at(i + 1, j + 1);
}

Mat2 InverseMap::jacobian(int i, int j, double s, double t) const {
  const VectorField& v = *v_;
  const double h = v.grid.h();
  const Vec2 ds = (1 - t) * (v.at(i + 1, j) - v.at(i, j)) + t * (v.at(i + 1, j + 1) - v.at(i, j + 1));
  const Vec2 dt = (1 - s) * (v.at(i, j + 1) - v.at(i, j)) + s * (v.at(i + 1, j + 1) - v.at(i + 1, j));
  return Mat2::from_columns((1.0 / h) * ds, (1.0 / h) * dt);
}

InverseMap::Hit InverseMap::locate(const Vec2& y) const {
  Hit hit;
  const double u = (y.x1 - lo_.x1) / bucket_;
  const double w = (y.x2 - lo_.x2) / bucket_;
  if (u < 0.0 || w < 0.0 || u >= nb1_ || w >= nb2_) return hit;
  const auto& cand = buckets_[static_cast<std::size_t>(w) * nb1_ + static_cast<std::size_t>(u)];
  const GridSpec& g = v_->grid;
  const double h = g.h();
  const double tol = 1e-12 * std::max(1.0, g.L);

  for (int id : cand) {
    const int i = id % g.n;
    const int j = id / g.n;
    const std::array<Vec2, 4> q{v_->at(i, j), v_->at(i + 1, j), v_->at(i + 1, j + 1), v_->at(i, j + 1)};
    if (!in_quad(q, y, 1e-10 * h)) continue;

    double s = 0.5;
    double t = 0.5;
    bool converged = false;
    for (int it = 0; it < max_newton_; ++it) {
      const Vec2 r = map(i, j, s, t) - y;
      if (norm(r) <= tol) {
        converged = true;
        break;
      }
      const Mat2 J = h * jacobian(i, j, s, t);
      if (!(std::abs(det(J)) > 0.0)) break;
      const Vec2 step = inverse(J) * r;
      s -= step.x1;
      t -= step.x2;
      if (!std::isfinite(s) || !std::isfinite(t)) break;
    }
    if (!converged) {
      hit.status = Status::NotConverged;
      continue;
    }
    constexpr double slack = 1e-8;
    if (s < -slack || t < -slack || s > 1 + slack || t > 1 + slack) continue;
    hit.status = Status::Found;
    hit.cell_i = i;
    hit.cell_j = j;
    hit.s = std::clamp(s, 0.0, 1.0);
    hit.t = std::clamp(t, 0.0, 1.0);
    const Vec2 base = g.vertex(i, j);
    hit.x = base + Vec2{hit.s * h, hit.t * h};
    return hit;
  }
  return hit;
}

PushforwardResult pushforward_chi(const ScalarField& chi, const VectorField& v) {
  if (!(chi.grid == v.grid)) throw ShapeError("pushforward_chi: grid mismatch");
  const GridSpec& g = v.grid;
  InverseMap inv(v);
  PushforwardResult out{ScalarField(g), 0, 0};
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const auto hit = inv.locate(g.cell_center(i, j));
      switch (hit.status) {
        case InverseMap::Status::Found:
          out.chi.at(i, j) = chi.at(hit.cell_i, hit.cell_j);
          break;
        case InverseMap::Status::NotCovered:
          ++out.uncovered;
          break;
        case InverseMap::Status::NotConverged:
          ++out.indeterminate;
          break;
      }
    }
  }
  if (out.indeterminate > 0.001 * static_cast<double>(g.cell_count())) {
    throw DomainError("pushforward_chi: " + std::to_string(out.indeterminate) +
                      " cells failed to invert (more than 0.1%)");
  }
  return out;
}

}  // namespace twowell
