#include "twowell/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "twowell/errors.hpp"

namespace twowell {

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw FitError("fit_loglog: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw FitError("fit_loglog: need at least 3 points, got " + std::to_string(n));
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw FitError("fit_loglog: data must be positive");
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  if (!(sxx > 0.0)) throw FitError("fit_loglog: all x values coincide");

  LogLogFit f;
  f.points = static_cast<int>(n);
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = ly[k] - (f.intercept + f.slope * lx[k]);
    sse += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  const double se = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
  const boost::math::students_t dist(static_cast<double>(n - 2));
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  f.slope_lo = f.slope - t * se;
  f.slope_hi = f.slope + t * se;
  return f;
}

GridSpec GridPolicy::grid_for(double mu) const {
  if (L) return GridSpec::make(n, *L);
  const double scale = mu >= 1.0 ? std::pow(mu, 2.0 / 3.0) : std::sqrt(mu);
  return GridSpec::make(n, factor * scale);
}

std::vector<double> geometric_mu_list(double mu_min, double mu_max, int points) {
  if (!(mu_min > 0.0) || !(mu_max >= mu_min) || points < 1) {
    throw DomainError("mu range needs 0 < mu_min <= mu_max and points >= 1");
  }
  std::vector<double> out;
  if (points == 1) return {mu_min};
  const double r = std::log(mu_max / mu_min) / (points - 1);
  for (int k = 0; k < points; ++k) out.push_back(k + 1 == points ? mu_max : mu_min * std::exp(r * k));
  return out;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::vector<SweepPoint> run_point(double mu, const WellPair& W, const GridPolicy& policy, const SweepOptions& opts) {
  const Configuration cfg = build_configuration(mu, W, policy.grid_for(mu));
  SweepPoint p;
  p.mu = mu;
  if (cfg.lens) {
    p.R = cfg.lens->Rlen;
    p.T = cfg.lens->T;
  } else {
    p.R = p.T = 2.0 * cfg.ball_radius;
  }
  p.energy = total_energy(cfg.chi, cfg.v, cfg.W);
  std::vector<SweepPoint> rows{p};
  if (opts.relax) {
    const RelaxResult r = relax(cfg.chi, cfg.v, cfg.W, opts.relax_cfg);
    SweepPoint q = p;
    q.energy = r.trace.back();
    q.relaxed = true;
    q.converged = r.converged;
    rows.push_back(q);
  }
  return rows;
}

// Rows already present in a previous, interrupted run, keyed by mu.
std::map<std::string, std::vector<SweepPoint>> load_rows(const std::string& path) {
  std::map<std::string, std::vector<SweepPoint>> rows;
  std::ifstream is(path);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line == kSweepCsvHeader) continue;
    std::istringstream ls(line);
    std::string f[8];
    for (auto& s : f)
      if (!std::getline(ls, s, ',')) throw DomainError("resume: malformed row '" + line + "'");
    SweepPoint p;
    p.mu = std::stod(f[0]);
    p.R = std::stod(f[1]);
    p.T = std::stod(f[2]);
    p.energy.interface = std::stod(f[3]);
    p.energy.elastic = std::stod(f[4]);
    p.energy.total = std::stod(f[5]);
    p.energy.mu = p.mu;
    p.relaxed = f[6] == "1";
    p.converged = f[7] == "1";
    rows[f[0]].push_back(p);
  }
  return rows;
}

}  // namespace

std::string sweep_csv_row(const SweepPoint& p) {
  return num(p.mu) + "," + num(p.R) + "," + num(p.T) + "," + num(p.energy.interface) + "," +
         num(p.energy.elastic) + "," + num(p.energy.total) + "," + (p.relaxed ? "1" : "0") + "," +
         (p.converged ? "1" : "0");
}

ScalingFit scaling_sweep(const std::vector<double>& mu_list, const WellPair& W, const GridPolicy& policy,
                         const SweepOptions& opts) {
  if (!std::is_sorted(mu_list.begin(), mu_list.end())) throw DomainError("sweep: mu list must be ascending");
  const std::size_t n = mu_list.size();
  const std::size_t rows_per_point = opts.relax ? 2 : 1;

  std::vector<std::optional<std::vector<SweepPoint>>> results(n);
  std::map<std::string, std::vector<SweepPoint>> previous;
  if (opts.resume && !opts.csv_path.empty()) previous = load_rows(opts.csv_path);
  for (std::size_t k = 0; k < n; ++k) {
    auto it = previous.find(num(mu_list[k]));
    if (it != previous.end() && it->second.size() == rows_per_point) results[k] = it->second;
  }

  std::ofstream csv;
  if (!opts.csv_path.empty()) {
    const bool append = opts.resume && !previous.empty();
    csv.open(opts.csv_path, append ? std::ios::app : std::ios::trunc);
    if (!csv) throw std::runtime_error("sweep: cannot open " + opts.csv_path);
    if (!append) {
      for (const auto& c : opts.header_comments) csv << "# " << c << '\n';
      csv << kSweepCsvHeader << '\n';
      csv.flush();
    }
  }

  // Workers take points in order; the calling thread collects and writes
  // rows in mu order as soon as each prefix is complete.
  std::vector<std::size_t> todo;
  for (std::size_t k = 0; k < n; ++k)
    if (!results[k]) todo.push_back(k);
  std::mutex m;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::vector<bool> fresh(n, false);

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= todo.size()) return;
      const std::size_t k = todo[t];
      std::vector<SweepPoint> rows;
      try {
        rows = run_point(mu_list[k], W, policy, opts);
      } catch (...) {
        std::lock_guard lock(m);
        if (!failure) failure = std::current_exception();
        next = todo.size();
        cv.notify_all();
        return;
      }
      std::lock_guard lock(m);
      results[k] = std::move(rows);
      fresh[k] = true;
      cv.notify_all();
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(todo.size())));
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs && !todo.empty(); ++j) pool.emplace_back(worker);

  std::size_t written = 0;
  {
    std::unique_lock lock(m);
    while (written < n) {
      cv.wait(lock, [&] { return failure || results[written].has_value(); });
      if (failure) break;
      while (written < n && results[written]) {
        if (csv.is_open() && fresh[written]) {
          for (const auto& p : *results[written]) csv << sweep_csv_row(p) << '\n';
          csv.flush();
        }
        ++written;
      }
    }
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  ScalingFit out;
  std::vector<double> xs, ys, xl, yl;
  for (const auto& rows : results) {
    for (const auto& p : *rows) out.points.push_back(p);
    const SweepPoint& used = rows->back();
    if (used.mu <= 1.0) {
      xs.push_back(used.mu);
      ys.push_back(used.energy.total);
    }
    if (used.mu >= 1.0) {
      xl.push_back(used.mu);
      yl.push_back(used.energy.total);
    }
  }
  // mu = 1 sits in both regimes, so a sweep ending there should not fail
  // on the other side.
  if (xs.size() >= 3) out.small = fit_loglog(xs, ys);
  if (xl.size() >= 3) out.large = fit_loglog(xl, yl);
  if (!out.small && !out.large) {
    throw FitError("scaling_sweep: no regime has 3 points (small " + std::to_string(xs.size()) + ", large " +
                   std::to_string(xl.size()) + ")");
  }
  return out;
}

}  // namespace twowell
