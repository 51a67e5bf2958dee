#pragma once

#include <optional>

#include "twowell/grid.hpp"
#include "twowell/matrixcore.hpp"

namespace twowell {

/// Interface + elastic split of the total energy, with the inclusion area.
struct EnergyBreakdown {
  double interface = 0.0;
  double elastic = 0.0;
  double total = 0.0;
  double mu = 0.0;
};

struct Ball {
  Vec2 center;
  double radius = 0.0;

  bool contains(const Vec2& x) const { return norm(x - center) <= radius; }
};

/// Cell-centered difference of the four vertices of cell (i, j); exact for
/// affine v. Throws std::out_of_range for a bad cell index.
Mat2 gradient(const VectorField& v, int i, int j);

/// (1 - chi) dist^2(G, SO(2)) + chi dist^2(G, SO(2)F). Fractional chi blends
/// the two branches linearly.
double elastic_density(double chi, const Mat2& G, const WellPair& W);

/// Density for inverse fields: the inclusion well is F^-1 SO(2), the image
/// of SO(2)F under inversion.
double inverse_elastic_density(double chi, const Mat2& G, const WellPair& W);

/// h^2 times the number of inclusion cells.
double volume(const ScalarField& chi);

/// Boundary length of {chi = 1} by marching squares. The indicator is first
/// averaged over the 4x4 cells surrounding each vertex and the 1/2 level set
/// of that vertex field is traced. When `region` is given only segments whose
/// midpoint lies in it are counted.
double contour_length(const ScalarField& chi, const std::optional<Ball>& region = std::nullopt);

/// Interface term: the analytic perimeter when chi carries one, otherwise
/// contour_length.
double interface_energy(const ScalarField& chi);

/// Elastic energy h^2 sum e_elast over all cells.
double elastic_energy(const ScalarField& chi, const VectorField& v, const WellPair& W);

/// Total energy. Throws ShapeError when the fields live on different grids.
EnergyBreakdown total_energy(const ScalarField& chi, const VectorField& v, const WellPair& W);

/// Elastic energy over the cells whose centers lie in the ball.
double elastic_energy_ball(const ScalarField& chi, const VectorField& v, const WellPair& W,
                           const Vec2& center, double radius);

/// Gradient of v at an arbitrary point: bilinear interpolation of the
/// cell gradients between the four nearest cell centers.
Mat2 interpolated_gradient(const VectorField& v, const Vec2& x);

/// Integral of e_elast along the segment [x, y] by the composite midpoint
/// rule with at least 4 nodes per cell crossed. chi is looked up in the
/// nearest cell. Throws DomainError if the segment leaves the window.
double segment_energy(const ScalarField& chi, const VectorField& v, const WellPair& W,
                      const Vec2& x, const Vec2& y);

struct BilipReport {
  double m = 1.0;           ///< max over cells of max(|grad v|_op, |grad v^-1|_op)
  bool admissible = true;   ///< false if some cell has det grad v <= 0
  int cell_i = -1;          ///< first offending cell, if any
  int cell_j = -1;
};

/// Lower bound on the bi-Lipschitz constant from the cell gradients.
BilipReport bilip_constant(const VectorField& v);

}  // namespace twowell
