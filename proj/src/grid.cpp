#include "twowell/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twowell/errors.hpp"

namespace twowell {

GridSpec GridSpec::make(int n, double L) {
  if (n < 8 || n % 2 != 0) {
    throw DomainError("grid: n must be even and >= 8 (got " + std::to_string(n) + ")");
  }
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("grid: halfwidth L must be positive");
  return GridSpec{n, L};
}

std::pair<int, int> GridSpec::cell_of(const Vec2& x) const {
  const double inv_h = 1.0 / h();
  const int i = std::clamp(static_cast<int>(std::floor((x.x1 + L) * inv_h)), 0, n - 1);
  const int j = std::clamp(static_cast<int>(std::floor((x.x2 + L) * inv_h)), 0, n - 1);
  return {i, j};
}

double ScalarField::nearest(const Vec2& x) const {
  if (!grid.contains(x)) return 0.0;
  const auto [i, j] = grid.cell_of(x);
  return at(i, j);
}

bool ScalarField::is_indicator() const {
  return std::all_of(values.begin(), values.end(), [](double c) { return c == 0.0 || c == 1.0; });
}

Vec2 VectorField::interpolate(const Vec2& x) const {
  const double h = grid.h();
  const double u = std::clamp((x.x1 + grid.L) / h, 0.0, static_cast<double>(grid.n));
  const double w = std::clamp((x.x2 + grid.L) / h, 0.0, static_cast<double>(grid.n));
  const int i = std::min(static_cast<int>(u), grid.n - 1);
  const int j = std::min(static_cast<int>(w), grid.n - 1);
  const double s = u - i;
  const double t = w - j;
  return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) + (1 - s) * t * at(i, j + 1) +
         s * t * at(i + 1, j + 1);
}

}  // namespace twowell
