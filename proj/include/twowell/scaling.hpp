#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twowell/construction.hpp"
#include "twowell/minimizer.hpp"

namespace twowell {

/// Least-squares line through (log x, log y).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_lo = 0.0;  ///< 95% confidence interval for the slope
  double slope_hi = 0.0;
  int points = 0;
};

/// Throws FitError with fewer than 3 points or non-positive data.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Window for a sweep point: n fixed, L = factor mu^(2/3) for mu >= 1 and
/// factor mu^(1/2) below, unless L is pinned.
struct GridPolicy {
  int n = 512;
  std::optional<double> L;
  double factor = 2.5;

  GridSpec grid_for(double mu) const;
};

struct SweepPoint {
  double mu = 0.0;
  double R = 0.0;  ///< lens diameter, or ball diameter on the ball branch
  double T = 0.0;  ///< lens thickness, or ball diameter
  EnergyBreakdown energy;
  bool relaxed = false;
  bool converged = true;  ///< always true for construction rows
};

struct SweepOptions {
  bool relax = false;
  RelaxConfig relax_cfg;
  int jobs = 1;
  std::string csv_path;  ///< empty: no file
  bool resume = false;   ///< reuse rows already in csv_path
  std::vector<std::string> header_comments;  ///< written as "# ..." lines
};

struct ScalingFit {
  std::vector<SweepPoint> points;  ///< ordered by mu, construction row before relaxed row
  std::optional<LogLogFit> small;  ///< mu <= 1
  std::optional<LogLogFit> large;  ///< mu >= 1
};

/// One row per (mu, relaxed flag).
inline constexpr const char* kSweepCsvHeader = "mu,R,T,E_interface,E_elastic,E_total,relaxed,converged";
std::string sweep_csv_row(const SweepPoint& p);

/// Construction (and optionally relaxed) energies for every mu, then
/// log-log fits per regime on the total energy, using relaxed rows when
/// relaxation is on. A regime with fewer than three points is left unfitted;
/// FitError if neither regime can be fitted.
ScalingFit scaling_sweep(const std::vector<double>& mu_list, const WellPair& W, const GridPolicy& policy,
                         const SweepOptions& opts = {});

/// Geometric spacing, both ends included.
std::vector<double> geometric_mu_list(double mu_min, double mu_max, int points);

}  // namespace twowell
