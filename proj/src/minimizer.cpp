#include "twowell/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "twowell/errors.hpp"

namespace twowell {

namespace {

// dE/dG for one cell, with G the cell gradient.
Mat2 density_derivative(double chi, const Mat2& G, const WellPair& W) {
  Mat2 D{0.0, 0.0, 0.0, 0.0};
  if (chi != 1.0) D += (2.0 * (1.0 - chi)) * (G - closest_rotation(G));
  if (chi != 0.0) D += (2.0 * chi) * (G - project_to_well(G, W.F));
  return D;
}

// Elastic energy, or nothing when some cell has lost orientation.
std::optional<double> checked_energy(const ScalarField& chi, const VectorField& v, const WellPair& W) {
  const int n = v.grid.n;
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Mat2 G = gradient(v, i, j);
      if (!(det(G) > 0.0)) return std::nullopt;
      s += elastic_density(chi.at(i, j), G, W);
    }
  }
  return s * v.grid.cell_area();
}

void zero_boundary(VectorField& g) {
  const int n = g.grid.n;
  for (int k = 0; k <= n; ++k) {
    g.at(k, 0) = {};
    g.at(k, n) = {};
    g.at(0, k) = {};
    g.at(n, k) = {};
  }
}

double sup_norm(const VectorField& g) {
  double m = 0.0;
  for (const Vec2& p : g.values) m = std::max(m, norm(p));
  return m;
}

double dot_all(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) s += dot(a.values[k], b.values[k]);
  return s;
}

}  // namespace

VectorField elastic_gradient(const ScalarField& chi, const VectorField& v, const WellPair& W) {
  if (!(chi.grid == v.grid)) throw ShapeError("elastic_gradient: grid mismatch");
  const GridSpec& g = v.grid;
  const int n = g.n;
  const double h2 = g.cell_area();
  const double s = 0.5 / g.h();
  VectorField out(g);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Mat2 G = gradient(v, i, j);
      if (!(det(G) > 0.0)) {
        throw OrientationError("elastic_gradient: det grad v <= 0 at cell (" + std::to_string(i) + "," +
                                   std::to_string(j) + ")",
                               i, j);
      }
      const Mat2 D = h2 * density_derivative(chi.at(i, j), G, W);
      // G = sum_k v_k (x) w_k with w_k = s (+-1, +-1) for the four corners.
      out.at(i, j) += D * Vec2{-s, -s};
      out.at(i + 1, j) += D * Vec2{s, -s};
      out.at(i, j + 1) += D * Vec2{-s, s};
      out.at(i + 1, j + 1) += D * Vec2{s, s};
    }
  }
  return out;
}

void RelaxConfig::validate() const {
  if (max_iters < 0) throw DomainError("relax: max_iters must be >= 0");
  if (!(grad_tol > 0.0)) throw DomainError("relax: grad_tol must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw DomainError("relax: shrink factor must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo <= 0.5)) throw DomainError("relax: armijo constant must lie in (0, 0.5]");
  if (max_backtracks < 1) throw DomainError("relax: max_backtracks must be >= 1");
}

RelaxResult relax(const ScalarField& chi, const VectorField& v0, const WellPair& W, const RelaxConfig& cfg) {
  cfg.validate();
  if (!(chi.grid == v0.grid)) throw ShapeError("relax: grid mismatch");
  const double h2 = v0.grid.cell_area();
  const double interface = interface_energy(chi);
  const double mu = volume(chi);
  auto breakdown = [&](double elastic) {
    return EnergyBreakdown{interface, elastic, interface + elastic, mu};
  };

  RelaxResult res;
  res.v = v0;
  const auto e0 = checked_energy(chi, v0, W);
  if (!e0) throw OrientationError("relax: initial deformation is not orientation preserving", -1, -1);
  double energy = *e0;
  res.trace.push_back(breakdown(energy));

  VectorField grad = elastic_gradient(chi, res.v, W);
  zero_boundary(grad);
  VectorField prev_v;
  VectorField prev_grad;
  double step = 0.0;

  for (int it = 0; it < cfg.max_iters; ++it) {
    const double gsup = sup_norm(grad);
    if (gsup / h2 <= cfg.grad_tol) {
      res.converged = true;
      break;
    }
    const double gg = dot_all(grad, grad);

    // Trial step: Barzilai-Borwein from the last accepted move, otherwise a
    // move of one hundredth of a cell along the steepest vertex.
    double t = 0.01 * std::sqrt(h2) / gsup;
    if (!prev_v.values.empty()) {
      double sy = 0.0;
      double ss = 0.0;
      for (std::size_t k = 0; k < grad.values.size(); ++k) {
        const Vec2 ds = res.v.values[k] - prev_v.values[k];
        const Vec2 dy = grad.values[k] - prev_grad.values[k];
        sy += dot(ds, dy);
        ss += dot(ds, ds);
      }
      if (sy > 0.0) t = ss / sy;
      else if (step > 0.0) t = 2.0 * step;
    }

    VectorField trial = res.v;
    bool accepted = false;
    for (int b = 0; b < cfg.max_backtracks; ++b) {
      for (std::size_t k = 0; k < trial.values.size(); ++k) trial.values[k] = res.v.values[k] - t * grad.values[k];
      const auto e = checked_energy(chi, trial, W);
      if (e && *e <= energy - cfg.armijo * t * gg) {
        prev_v = std::move(res.v);
        prev_grad = std::move(grad);
        res.v = std::move(trial);
        energy = *e;
        step = t;
        accepted = true;
        break;
      }
      t *= cfg.shrink;
    }
    if (!accepted) return res;  // best so far, not converged

    ++res.iterations;
    res.trace.push_back(breakdown(energy));
    grad = elastic_gradient(chi, res.v, W);
    zero_boundary(grad);
  }
  if (!res.converged && sup_norm(grad) / h2 <= cfg.grad_tol) res.converged = true;
  return res;
}

}  // namespace twowell
