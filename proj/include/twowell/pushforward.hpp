#pragma once

#include <optional>
#include <vector>

#include "twowell/grid.hpp"

namespace twowell {

/// Point location for the inverse of a vertex-sampled deformation.
///
/// v is taken bilinear on each cell. Cells are bucketed by the bounding box
/// of their image; a query runs Newton's method on the bilinear map of every
/// candidate cell.
class InverseMap {
 public:
  enum class Status { Found, NotCovered, NotConverged };

  struct Hit {
    Status status = Status::NotCovered;
    int cell_i = -1;
    int cell_j = -1;
    double s = 0.0;  ///< local coordinates in [0,1]^2
    double t = 0.0;
    Vec2 x;          ///< preimage
  };

  explicit InverseMap(const VectorField& v, int max_newton = 50);

  Hit locate(const Vec2& y) const;

  /// Jacobian of the bilinear map of cell (i, j) at local (s, t).
  Mat2 jacobian(int i, int j, double s, double t) const;

 private:
  const VectorField* v_;
  int max_newton_;
  Vec2 lo_;
  double bucket_ = 1.0;
  int nb1_ = 1;
  int nb2_ = 1;
  std::vector<std::vector<int>> buckets_;

  Vec2 map(int i, int j, double s, double t) const;
};

struct PushforwardResult {
  ScalarField chi;        ///< chi o v^-1 on the grid of v
  int indeterminate = 0;  ///< cells where Newton did not converge
  int uncovered = 0;      ///< cells outside the image of the window (set to 0)
};

/// Rasterize chi o v^-1 by inverse sampling at every target cell center.
/// Throws DomainError when more than 0.1% of the cells are indeterminate.
PushforwardResult pushforward_chi(const ScalarField& chi, const VectorField& v);

}  // namespace twowell
