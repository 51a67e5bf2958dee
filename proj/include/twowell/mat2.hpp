#pragma once

#include <cmath>
#include <utility>

namespace twowell {

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) {
    x1 += o.x1;
    x2 += o.x2;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x1 -= o.x1;
    x2 -= o.x2;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x1 *= s;
    x2 *= s;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x1, -a.x2}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(const Vec2& a) { return std::hypot(a.x1, a.x2); }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x1 * b.x2 - a.x2 * b.x1; }

/// Dense 2x2 matrix, row-major entries a_ij.
struct Mat2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
  /// Counter-clockwise rotation by `theta`.
  static Mat2 rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c, -s, s, c};
  }
  /// Rotation with prescribed cosine and sine (assumed normalized).
  static constexpr Mat2 rotation(double c, double s) { return {c, -s, s, c}; }
  /// Generator of rotations, the rotation by +pi/2.
  static constexpr Mat2 J() { return {0.0, -1.0, 1.0, 0.0}; }
  static constexpr Mat2 from_columns(const Vec2& c1, const Vec2& c2) {
    return {c1.x1, c2.x1, c1.x2, c2.x2};
  }

  constexpr Vec2 col1() const { return {a11, a21}; }
  constexpr Vec2 col2() const { return {a12, a22}; }

  constexpr Mat2& operator+=(const Mat2& o) {
    a11 += o.a11;
    a12 += o.a12;
    a21 += o.a21;
    a22 += o.a22;
    return *this;
  }
  constexpr Mat2& operator-=(const Mat2& o) {
    a11 -= o.a11;
    a12 -= o.a12;
    a21 -= o.a21;
    a22 -= o.a22;
    return *this;
  }
  constexpr Mat2& operator*=(double s) {
    a11 *= s;
    a12 *= s;
    a21 *= s;
    a22 *= s;
    return *this;
  }
  friend constexpr Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend constexpr Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
  friend constexpr Mat2 operator*(double s, Mat2 a) { return a *= s; }
  friend constexpr Mat2 operator*(Mat2 a, double s) { return a *= s; }
  friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
  }
  friend constexpr Vec2 operator*(const Mat2& a, const Vec2& v) {
    return {a.a11 * v.x1 + a.a12 * v.x2, a.a21 * v.x1 + a.a22 * v.x2};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

constexpr Mat2 transpose(const Mat2& a) { return {a.a11, a.a21, a.a12, a.a22}; }
constexpr double det(const Mat2& a) { return a.a11 * a.a22 - a.a12 * a.a21; }
constexpr double trace(const Mat2& a) { return a.a11 + a.a22; }
/// Frobenius inner product tr(a^T b).
constexpr double inner(const Mat2& a, const Mat2& b) {
  return a.a11 * b.a11 + a.a12 * b.a12 + a.a21 * b.a21 + a.a22 * b.a22;
}
constexpr double frob_sq(const Mat2& a) { return inner(a, a); }
inline double frob(const Mat2& a) { return std::sqrt(frob_sq(a)); }

/// a (x) b, the matrix with entries a_i b_j.
constexpr Mat2 outer(const Vec2& a, const Vec2& b) {
  return {a.x1 * b.x1, a.x1 * b.x2, a.x2 * b.x1, a.x2 * b.x2};
}

/// Inverse; caller guarantees det != 0.
constexpr Mat2 inverse(const Mat2& a) {
  const double d = det(a);
  return {a.a22 / d, -a.a12 / d, -a.a21 / d, a.a11 / d};
}

constexpr bool is_finite(const Mat2& a) {
  return std::isfinite(a.a11) && std::isfinite(a.a12) && std::isfinite(a.a21) &&
         std::isfinite(a.a22);
}

/// Singular values (largest first), closed form for 2x2.
inline std::pair<double, double> singular_values(const Mat2& a) {
  const double p = std::hypot(a.a11 + a.a22, a.a21 - a.a12);
  const double q = std::hypot(a.a11 - a.a22, a.a21 + a.a12);
  return {0.5 * (p + q), 0.5 * std::abs(p - q)};
}

/// Spectral (operator 2-) norm.
inline double op_norm(const Mat2& a) { return singular_values(a).first; }

}  // namespace twowell
