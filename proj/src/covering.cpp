#include "twowell/covering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "twowell/energy.hpp"
#include "twowell/errors.hpp"

namespace twowell {

namespace {

// Radius at which mass m first satisfies the defining inequality:
// m <= eta0 r^2 min{1, m^(-1/3)}.
double threshold_radius(double m, double eta0) {
  return std::sqrt(std::max(m, std::pow(m, 4.0 / 3.0)) / eta0);
}

std::vector<Vec2> inclusion_centers(const ScalarField& chi) {
  std::vector<Vec2> pts;
  const GridSpec& g = chi.grid;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      if (chi.at(i, j) > 0.5) pts.push_back(g.cell_center(i, j));
  return pts;
}

CoveringRadius radius_from(const std::vector<Vec2>& pts, const Vec2& x, double cell_area, double eta0) {
  std::vector<double> d(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) d[k] = norm(pts[k] - x);
  std::sort(d.begin(), d.end());
  CoveringRadius out;
  // On [d_k, d_{k+1}) the mass is (k + 1) cells. The first cell has
  // distance 0 for x at its center, so the mass is positive for every r > 0.
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k + 1 < d.size() && d[k + 1] == d[k]) continue;
    const double m = static_cast<double>(k + 1) * cell_area;
    const double r = std::max(d[k], threshold_radius(m, eta0));
    if (k + 1 == d.size() || r < d[k + 1]) {
      out.R = r;
      out.mass = m;
      break;
    }
  }
  out.regime = out.mass <= 1.0 ? CoverRegime::Small : CoverRegime::Large;
  const double rhs = eta0 * out.R * out.R * (out.regime == CoverRegime::Small ? 1.0 : std::pow(out.mass, -1.0 / 3.0));
  out.dichotomy_error = std::abs(out.mass - rhs) / out.mass;
  return out;
}

}  // namespace

CoveringRadius covering_radius(const ScalarField& chi, const Vec2& x, double eta0) {
  if (!(eta0 > 0.0)) throw DomainError("covering_radius: eta0 must be positive");
  if (!chi.grid.contains(x) || chi.nearest(x) <= 0.5) {
    throw DomainError("covering_radius: x is not in the inclusion");
  }
  // Mass is counted from the center of the cell containing x.
  const auto [i, j] = chi.grid.cell_of(x);
  return radius_from(inclusion_centers(chi), chi.grid.cell_center(i, j), chi.grid.cell_area(), eta0);
}

CoveringReport vitali_cover(const ScalarField& chi, const VectorField& v, const WellPair& W, double eta0) {
  if (!(chi.grid == v.grid)) throw ShapeError("vitali_cover: grid mismatch");
  if (!(eta0 > 0.0)) throw DomainError("vitali_cover: eta0 must be positive");
  const std::vector<Vec2> pts = inclusion_centers(chi);
  if (pts.empty()) throw DomainError("vitali_cover: empty inclusion");
  const double area = chi.grid.cell_area();

  std::vector<CoveringRadius> radii;
  radii.reserve(pts.size());
  for (const Vec2& x : pts) radii.push_back(radius_from(pts, x, area, eta0));
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a].R > radii[b].R; });

  CoveringReport rep;
  std::vector<bool> covered(pts.size(), false);
  std::size_t remaining = pts.size();
  for (const std::size_t c : order) {
    if (remaining == 0) break;
    const Vec2& x = pts[c];
    const double R = radii[c].R;
    bool disjoint = true;
    for (std::size_t k = 0; k < rep.centers.size() && disjoint; ++k) {
      disjoint = norm(x - rep.centers[k]) >= (R + rep.radii[k]) / 5.0;
    }
    if (!disjoint) continue;
    if (rep.centers.size() >= 100000) throw std::runtime_error("vitali_cover: more than 10^5 balls");
    rep.centers.push_back(x);
    rep.radii.push_back(R);
    rep.masses.push_back(radii[c].mass);
    rep.regimes.push_back(radii[c].regime);
    for (std::size_t q = 0; q < pts.size(); ++q) {
      if (!covered[q] && norm(pts[q] - x) <= R) {
        covered[q] = true;
        --remaining;
      }
    }
  }
  rep.covers = remaining == 0;

  for (std::size_t a = 0; a < rep.centers.size(); ++a)
    for (std::size_t b = a + 1; b < rep.centers.size(); ++b)
      if (norm(rep.centers[a] - rep.centers[b]) < (rep.radii[a] + rep.radii[b]) / 5.0) rep.shrinks_disjoint = false;

  const double mu = static_cast<double>(pts.size()) * area;
  double rmax = 0.0;
  for (std::size_t k = 0; k < rep.centers.size(); ++k) {
    const Ball shrink{rep.centers[k], rep.radii[k] / 5.0};
    rep.local_energy.push_back(elastic_energy_ball(chi, v, W, shrink.center, shrink.radius) +
                               contour_length(chi, shrink));
    rep.chain_sum += std::pow(rep.masses[k], 2.0 / 3.0);
    rmax = std::max(rmax, rep.radii[k]);
  }
  rep.chain_constant = rep.chain_sum / std::pow(mu, 2.0 / 3.0);
  rep.max_radius_bound = rmax / (std::max(std::sqrt(mu), std::pow(mu, 2.0 / 3.0)) / std::sqrt(eta0));
  return rep;
}

void write_cover_csv(std::ostream& os, const CoveringReport& rep) {
  os << "i,x1,x2,R,regime,E_local\n";
  for (std::size_t k = 0; k < rep.centers.size(); ++k) {
    os << k << ',' << rep.centers[k].x1 << ',' << rep.centers[k].x2 << ',' << rep.radii[k] << ','
       << (rep.regimes[k] == CoverRegime::Small ? 4 : 5) << ',' << rep.local_energy[k] << '\n';
  }
}

}  // namespace twowell
