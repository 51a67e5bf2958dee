#pragma once

#include "twowell/mat2.hpp"

namespace twowell {

/// The two energy wells SO(2) and SO(2)F, with F of unit determinant.
struct WellPair {
  double lambda = 1.0;  ///< smaller singular value of F
  Mat2 F = Mat2::identity();
  Mat2 Finv = Mat2::identity();

  /// F = diag(lambda, 1/lambda). Requires lambda > 0, lambda != 1.
  static WellPair from_lambda(double lambda);
  /// F = Id + nu1 e1 (x) e2. Requires nu1 != 0.
  static WellPair from_shear(double nu1);
  /// Any F with det F = 1 (to 1e-12) and F not a rotation.
  static WellPair from_matrix(const Mat2& F);
};

/// Rotation in SO(2) closest to `a` in Frobenius norm. When every rotation is
/// equidistant (a is a multiple of a reflection) the identity is returned.
Mat2 closest_rotation(const Mat2& a);

/// dist(A, SO(2)), valid for every A including det A <= 0.
double dist_so2(const Mat2& a);

/// Point of the orbit SO(2)W closest to A.
Mat2 project_to_well(const Mat2& a, const Mat2& w);

/// dist(A, SO(2)W). Throws DomainError if W is singular.
double dist_well(const Mat2& a, const Mat2& w);

/// dist(A, W SO(2)), the orbit that inversion maps SO(2)W^-1 onto.
double dist_right_well(const Mat2& a, const Mat2& w);

struct PolarFactors {
  Mat2 R;  ///< rotation
  Mat2 U;  ///< symmetric positive-definite stretch
};

/// A = R U. Throws DomainError if det A <= 0.
PolarFactors polar_decompose(const Mat2& a);

struct RankOneDecomposition {
  Mat2 R;
  Vec2 a;
  Vec2 b;
  double phi = 0.0;  ///< rotation angle of R, in [0, pi)
};

/// F = R + a (x) b for symmetric positive-definite F with det F = 1.
///
/// The rotation angle satisfies cos(phi) = 2 / (lambda + 1/lambda) with
/// lambda an eigenvalue of F, and phi >= 0. Throws DegenerateError for F = Id
/// and DomainError when F is not SPD or det F != 1.
RankOneDecomposition rank_one_decompose(const Mat2& F);

struct ShearNormalForm {
  Vec2 nu;  ///< (nu1, 0) with nu1 >= 0
  Mat2 S;   ///< conjugating rotation
  Mat2 R;   ///< rotation of the rank-one decomposition

  /// Id + nu (x) e2, which equals S R^T F S^T.
  Mat2 sheared() const { return Mat2::identity() + outer(nu, Vec2{0.0, 1.0}); }
};

/// Reduce F to the shear form Id + nu (x) e2 by F' = S R^T F S^T.
///
/// dist(B, SO(2)F) = dist(B S^T, SO(2)F') for every B. Same preconditions and
/// errors as rank_one_decompose.
ShearNormalForm shear_normal_form(const Mat2& F);

/// dist(U^-1, A^-1 SO(2)) / dist(U, SO(2)A); 0 when both distances vanish.
/// The inverse of R A is A^-1 R^T, so the inverse orbit is taken with the
/// rotation on the right; the ratio is then at most |U^-1| / min eig(A).
/// Throws DomainError for singular U or non-SPD A.
double inverse_distance_ratio(const Mat2& u, const Mat2& a);

/// True if `a` is symmetric and positive-definite up to `tol` (relative).
bool is_spd(const Mat2& a, double tol = 1e-12);

}  // namespace twowell
