#pragma once

#include <vector>

#include "twowell/energy.hpp"
#include "twowell/grid.hpp"
#include "twowell/matrixcore.hpp"

namespace twowell {

/// Derivative of the elastic energy with respect to every vertex of v.
/// d/dA dist^2(A, SO(2)W) = 2 (A - Pi(A)) is pulled back through the
/// four-vertex stencil. Throws OrientationError on the first cell with
/// det grad v <= 0.
VectorField elastic_gradient(const ScalarField& chi, const VectorField& v, const WellPair& W);

struct RelaxConfig {
  int max_iters = 2000;
  double grad_tol = 1e-6;    ///< on sup_k |dE/dv_k| / h^2
  double shrink = 0.5;       ///< backtracking factor, in (0, 1)
  double armijo = 1e-4;      ///< sufficient-decrease constant, in (0, 0.5]
  int max_backtracks = 60;   ///< consecutive shrinks before giving up

  void validate() const;
};

struct RelaxResult {
  VectorField v;
  std::vector<EnergyBreakdown> trace;  ///< initial state, then every accepted step
  int iterations = 0;
  bool converged = false;
};

/// Gradient descent on v at fixed chi with Armijo backtracking. The outer
/// vertex ring is held fixed. Steps that flip the orientation of any cell
/// are treated as failed trials.
RelaxResult relax(const ScalarField& chi, const VectorField& v0, const WellPair& W,
                  const RelaxConfig& cfg = {});

}  // namespace twowell
