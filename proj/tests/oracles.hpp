#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <numbers>

#include "twowell/mat2.hpp"

namespace oracle {

using twowell::Mat2;

// min over theta of |A - R(theta) W|, by a uniform scan followed by golden
// section search around the best sample.
inline double brute_dist(const Mat2& A, const Mat2& W, int samples = 4096) {
  auto f = [&](double th) { return twowell::frob(A - Mat2::rotation(th) * W); };
  const double step = 2.0 * std::numbers::pi / samples;
  int best = 0;
  double fbest = f(0.0);
  for (int k = 1; k < samples; ++k) {
    const double v = f(k * step);
    if (v < fbest) {
      fbest = v;
      best = k;
    }
  }
  double a = (best - 1) * step;
  double b = (best + 1) * step;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return std::min({fbest, fc, fd});
}

inline double brute_dist_so2(const Mat2& A, int samples = 4096) {
  return brute_dist(A, Mat2::identity(), samples);
}

// Closed form from the problem statement, used as a second reference.
inline double closed_form_dist_so2(const Mat2& A) {
  const double n2 = twowell::frob_sq(A);
  const double inner = std::max(0.0, n2 + 2.0 * twowell::det(A));
  return std::sqrt(std::max(0.0, n2 + 2.0 - 2.0 * std::sqrt(inner)));
}

}  // namespace oracle
