#include "twowell/matrixcore.hpp"

#include <cmath>
#include <string>

#include "twowell/errors.hpp"

namespace twowell {

namespace {

// max over R in SO(2) of tr(R^T B) is attained at the rotation whose
// (cos, sin) is proportional to (b11 + b22, b21 - b12).
Mat2 maximizing_rotation(const Mat2& b) {
  const double c = b.a11 + b.a22;
  const double s = b.a21 - b.a12;
  const double r = std::hypot(c, s);
  if (r == 0.0) return Mat2::identity();
  return Mat2::rotation(c / r, s / r);
}

void require_spd_unit_det(const Mat2& F) {
  if (!is_finite(F)) throw DomainError("F has non-finite entries");
  if (!is_spd(F, 1e-10)) throw DomainError("F must be symmetric positive-definite");
  if (std::abs(det(F) - 1.0) > 1e-10) throw DomainError("F must have det F = 1");
  if (frob(F - Mat2::identity()) <= 1e-14) {
    throw DegenerateError("F = Id has no non-trivial rank-one decomposition");
  }
}

// Splits an exactly-rank-one matrix into a (x) b, taking `a` along its
// longest column.
std::pair<Vec2, Vec2> rank_one_factor(const Mat2& m) {
  Vec2 a = m.col1();
  if (dot(m.col2(), m.col2()) > dot(a, a)) a = m.col2();
  const double aa = dot(a, a);
  return {a, Vec2{dot(a, m.col1()) / aa, dot(a, m.col2()) / aa}};
}

RankOneDecomposition rank_one_branch(const Mat2& F, double sign) {
  // det(F - R) = det F + 1 - cos(phi) tr F, so with det F = 1 the angle only
  // depends on tr F = lambda + 1/lambda, in any frame.
  const double c = 2.0 / trace(F);
  const double s = sign * std::sqrt(std::max(0.0, 1.0 - c * c));

  RankOneDecomposition out;
  out.R = Mat2::rotation(c, s);
  out.phi = std::atan2(s, c);
  const auto [a, b] = rank_one_factor(F - out.R);
  out.a = a;
  out.b = b;
  return out;
}

ShearNormalForm shear_from(const RankOneDecomposition& r1) {
  // R^T F = Id + c (x) b with c = R^T a orthogonal to b.
  const Vec2 c = transpose(r1.R) * r1.a;
  const double nb = norm(r1.b);
  const Vec2 bh{r1.b.x1 / nb, r1.b.x2 / nb};
  ShearNormalForm out;
  out.R = r1.R;
  out.S = Mat2{bh.x2, -bh.x1, bh.x1, bh.x2};  // S b = |b| e2
  out.nu = Vec2{(out.S * c).x1 * nb, 0.0};
  return out;
}

}  // namespace

bool is_spd(const Mat2& a, double tol) {
  const double scale = std::max(1.0, frob(a));
  if (std::abs(a.a12 - a.a21) > tol * scale) return false;
  return a.a11 > 0.0 && det(a) > 0.0;
}

WellPair WellPair::from_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda) || lambda == 1.0) {
    throw DomainError("well parameter lambda must be positive and != 1");
  }
  WellPair w;
  w.lambda = std::min(lambda, 1.0 / lambda);
  w.F = Mat2::diag(lambda, 1.0 / lambda);
  w.Finv = Mat2::diag(1.0 / lambda, lambda);
  return w;
}

WellPair WellPair::from_shear(double nu1) {
  if (!std::isfinite(nu1) || nu1 == 0.0) throw DomainError("shear nu1 must be non-zero");
  return from_matrix(Mat2{1.0, nu1, 0.0, 1.0});
}

WellPair WellPair::from_matrix(const Mat2& F) {
  if (!is_finite(F)) throw DomainError("F has non-finite entries");
  if (std::abs(det(F) - 1.0) > 1e-12) throw DomainError("F must have det F = 1");
  if (dist_so2(F) <= 1e-12) throw DomainError("F must not be a rotation");
  WellPair w;
  w.F = F;
  w.Finv = inverse(F);
  w.lambda = singular_values(F).second;
  return w;
}

Mat2 closest_rotation(const Mat2& a) { return maximizing_rotation(a); }

double dist_so2(const Mat2& a) {
  // Equals sqrt(|A|^2 + 2 - 2 sqrt(|A|^2 + 2 det A)); evaluated through the
  // maximizing rotation to avoid cancellation near the well.
  return frob(a - maximizing_rotation(a));
}

Mat2 project_to_well(const Mat2& a, const Mat2& w) {
  if (!is_finite(w) || det(w) == 0.0) throw DomainError("well matrix W is singular");
  return maximizing_rotation(a * transpose(w)) * w;
}

double dist_well(const Mat2& a, const Mat2& w) { return frob(a - project_to_well(a, w)); }

double dist_right_well(const Mat2& a, const Mat2& w) { return dist_well(transpose(a), transpose(w)); }

PolarFactors polar_decompose(const Mat2& a) {
  if (!is_finite(a)) throw DomainError("polar_decompose: non-finite matrix");
  if (!(det(a) > 0.0)) throw DomainError("polar_decompose: det A must be positive");
  PolarFactors out;
  out.R = maximizing_rotation(a);
  out.U = transpose(out.R) * a;
  const double off = 0.5 * (out.U.a12 + out.U.a21);
  out.U.a12 = off;
  out.U.a21 = off;
  return out;
}

RankOneDecomposition rank_one_decompose(const Mat2& F) {
  require_spd_unit_det(F);
  return rank_one_branch(F, +1.0);
}

ShearNormalForm shear_normal_form(const Mat2& F) {
  require_spd_unit_det(F);
  ShearNormalForm out = shear_from(rank_one_branch(F, +1.0));
  // The sign of nu1 follows the branch of phi; nu1 >= 0 wins over phi >= 0.
  if (out.nu.x1 < 0.0) out = shear_from(rank_one_branch(F, -1.0));
  return out;
}

double inverse_distance_ratio(const Mat2& u, const Mat2& a) {
  if (!is_finite(u) || det(u) == 0.0) throw DomainError("inverse_distance_ratio: U is singular");
  if (!is_spd(a)) throw DomainError("inverse_distance_ratio: A must be symmetric positive-definite");
  const double forward = dist_well(u, a);
  const double backward = dist_right_well(inverse(u), inverse(a));
  if (forward < 1e-14 && backward < 1e-14) return 0.0;
  return backward / forward;
}

}  // namespace twowell
