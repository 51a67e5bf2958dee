#pragma once

#include <iosfwd>
#include <vector>

#include "twowell/grid.hpp"
#include "twowell/matrixcore.hpp"

namespace twowell {

/// Which side of min{1, m^(-1/3)} is active at the covering radius:
/// Small when |M cap B_R| <= 1, Large otherwise.
enum class CoverRegime { Small, Large };

struct CoveringRadius {
  double R = 0.0;
  double mass = 0.0;           ///< |M cap B_R(x)|, counted by cell centers
  CoverRegime regime = CoverRegime::Small;
  double dichotomy_error = 0.0;  ///< relative gap in the equality that holds at R
};

/// Smallest r with r^-2 |M cap B_r(x)| <= eta0 min{1, |M cap B_r(x)|^(-1/3)}.
/// The mass is a step function of r, so the infimum is found exactly plateau
/// by plateau. Throws DomainError when x is not in an inclusion cell.
CoveringRadius covering_radius(const ScalarField& chi, const Vec2& x, double eta0);

struct CoveringReport {
  std::vector<Vec2> centers;
  std::vector<double> radii;
  std::vector<double> masses;
  std::vector<CoverRegime> regimes;
  std::vector<double> local_energy;  ///< elastic + interface energy in B_{R_i/5}(x_i)
  bool shrinks_disjoint = true;
  bool covers = true;       ///< every inclusion cell center lies in some B_{R_i}
  double chain_sum = 0.0;   ///< sum_i |M cap B_{R_i}|^(2/3)
  double chain_constant = 0.0;  ///< chain_sum / mu^(2/3)
  double max_radius_bound = 0.0;  ///< max_i R_i / (max(mu^(1/2), mu^(2/3)) / sqrt(eta0))
};

/// Greedy Vitali selection over all inclusion cells: candidates sorted by
/// covering radius, descending; a ball is kept when its 1/5-shrink misses
/// every kept 1/5-shrink. Throws DomainError for an empty inclusion and
/// std::runtime_error past 10^5 balls.
CoveringReport vitali_cover(const ScalarField& chi, const VectorField& v, const WellPair& W, double eta0);

/// CSV with header i,x1,x2,R,regime,E_local; regime is 4 (small) or 5 (large).
void write_cover_csv(std::ostream& os, const CoveringReport& rep);

}  // namespace twowell
