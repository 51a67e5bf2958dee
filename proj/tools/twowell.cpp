// Batch front-end: constructions, relaxations, sweeps and the lower-bound
// diagnostics. Every option can also come from a key=value file (--config);
// command-line values win.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twowell/construction.hpp"
#include "twowell/covering.hpp"
#include "twowell/errors.hpp"
#include "twowell/field_io.hpp"
#include "twowell/minimizer.hpp"
#include "twowell/rigidity.hpp"
#include "twowell/scaling.hpp"

#ifndef TWOWELL_VERSION
#define TWOWELL_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using namespace twowell;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kResolution = 3, kHypothesis = 4 };

struct Options {
  std::string command;
  std::optional<double> mu;
  std::optional<double> mu_min;
  std::optional<double> mu_max;
  int points = 6;
  std::optional<double> lambda;
  std::optional<double> nu1;
  int grid_n = 512;
  std::optional<double> grid_L;
  std::optional<double> rlen;
  bool relax = false;
  int max_iters = 2000;
  RigidityConstants k;
  std::optional<double> ball_x;
  std::optional<double> ball_y;
  std::optional<double> ball_R;
  std::optional<double> bilip_m;
  int jobs = 1;
  std::uint64_t seed = 1;
  bool resume = false;
  bool dump = false;
  std::string out = ".";
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string opt(const std::optional<double>& x) { return x ? num(*x) : "auto"; }

// Config echo, one "# key=value" line each.
std::vector<std::string> provenance(const Options& o, const GridSpec* g) {
  std::vector<std::string> h;
  h.push_back(std::string("twowell ") + TWOWELL_VERSION);
  h.push_back("command=" + o.command);
  h.push_back(o.lambda ? "lambda=" + num(*o.lambda) : "nu1=" + num(*o.nu1));
  if (o.mu) h.push_back("mu=" + num(*o.mu));
  if (o.mu_min) h.push_back("mu-min=" + num(*o.mu_min) + " mu-max=" + num(*o.mu_max) + " points=" +
                            std::to_string(o.points));
  if (g) {
    h.push_back("grid-n=" + std::to_string(g->n) + " grid-L=" + num(g->L));
  } else {
    h.push_back("grid-n=" + std::to_string(o.grid_n) + " grid-L=" + opt(o.grid_L));
  }
  if (o.rlen) h.push_back("rlen=" + num(*o.rlen));
  h.push_back("relax=" + std::to_string(o.relax ? 1 : 0) + " max-iters=" + std::to_string(o.max_iters));
  h.push_back("eta=" + num(o.k.eta) + " eta0=" + num(o.k.eta0) + " delta=" + num(o.k.delta) +
              " theta=" + num(o.k.theta) + " alpha=" + num(o.k.alpha));
  h.push_back("seed=" + std::to_string(o.seed));
  return h;
}

void write_header(std::ostream& os, const std::vector<std::string>& lines) {
  for (const auto& l : lines) os << "# " << l << '\n';
}

WellPair wells(const Options& o) { return o.lambda ? WellPair::from_lambda(*o.lambda) : WellPair::from_shear(*o.nu1); }

GridSpec grid_for(const Options& o, double mu) {
  GridPolicy p;
  p.n = o.grid_n;
  p.L = o.grid_L;
  return p.grid_for(mu);
}

double require_mu(const Options& o) {
  if (!o.mu) throw DomainError("--mu is required for " + o.command);
  return *o.mu;
}

std::ofstream open_out(const Options& o, const std::string& name) {
  fs::create_directories(o.out);
  std::ofstream os(fs::path(o.out) / name, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + (fs::path(o.out) / name).string());
  os.precision(15);
  return os;
}

SweepPoint as_point(const Configuration& cfg, double mu, const EnergyBreakdown& e, bool relaxed, bool converged) {
  SweepPoint p;
  p.mu = mu;
  if (cfg.lens) {
    p.R = cfg.lens->Rlen;
    p.T = cfg.lens->T;
  } else {
    p.R = p.T = 2.0 * cfg.ball_radius;
  }
  p.energy = e;
  p.relaxed = relaxed;
  p.converged = converged;
  return p;
}

Configuration build(const Options& o, double mu) {
  return build_configuration(mu, wells(o), grid_for(o, mu), o.rlen);
}

int run_construct(const Options& o) {
  const double mu = require_mu(o);
  const Configuration cfg = build(o, mu);
  const AdmissibilityReport adm = admissibility_report(cfg, o.seed);
  const SweepPoint p = as_point(cfg, mu, total_energy(cfg.chi, cfg.v, cfg.W), false, true);

  auto os = open_out(o, "construct.csv");
  write_header(os, provenance(o, &cfg.chi.grid));
  os << "# admissible=" << (adm.admissible ? 1 : 0) << " bilip_m=" << num(adm.bilip.m)
     << " outside_deviation=" << num(adm.outside_deviation) << " C_outside=" << num(adm.C_outside)
     << " injectivity_failures=" << adm.injectivity_failures << " min_stretch=" << num(adm.min_stretch) << '\n';
  os << kSweepCsvHeader << '\n' << sweep_csv_row(p) << '\n';
  if (o.dump) {
    save_field((fs::path(o.out) / "chi.txt").string(), cfg.chi);
    save_field((fs::path(o.out) / "v.txt").string(), cfg.v);
  }
  std::cout << kSweepCsvHeader << '\n' << sweep_csv_row(p) << '\n';
  return kOk;
}

int run_relax(const Options& o) {
  const double mu = require_mu(o);
  const Configuration cfg = build(o, mu);
  RelaxConfig rc;
  rc.max_iters = o.max_iters;
  const RelaxResult r = relax(cfg.chi, cfg.v, cfg.W, rc);

  auto os = open_out(o, "relax.csv");
  write_header(os, provenance(o, &cfg.chi.grid));
  os << "# iterations=" << r.iterations << " converged=" << (r.converged ? 1 : 0) << '\n';
  os << "step,E_interface,E_elastic,E_total\n";
  for (std::size_t s = 0; s < r.trace.size(); ++s) {
    const EnergyBreakdown& e = r.trace[s];
    os << s << ',' << num(e.interface) << ',' << num(e.elastic) << ',' << num(e.total) << '\n';
  }
  if (o.dump) {
    save_field((fs::path(o.out) / "chi.txt").string(), cfg.chi);
    save_field((fs::path(o.out) / "v_relaxed.txt").string(), r.v);
  }
  std::cout << kSweepCsvHeader << '\n'
            << sweep_csv_row(as_point(cfg, mu, r.trace.front(), false, true)) << '\n'
            << sweep_csv_row(as_point(cfg, mu, r.trace.back(), true, r.converged)) << '\n';
  return kOk;
}

std::string fit_text(const std::optional<LogLogFit>& f, const char* name) {
  std::ostringstream s;
  if (!f) {
    s << "slope_" << name << "=nan";
  } else {
    s << "slope_" << name << '=' << num(f->slope) << " ci_" << name << "=[" << num(f->slope_lo) << ','
      << num(f->slope_hi) << "] r2_" << name << '=' << num(f->r2);
  }
  return s.str();
}

int run_sweep(const Options& o) {
  std::vector<double> mu;
  if (o.mu_min || o.mu_max) {
    if (!o.mu_min || !o.mu_max) throw DomainError("--mu-min and --mu-max go together");
    mu = geometric_mu_list(*o.mu_min, *o.mu_max, o.points);
  } else {
    mu = {require_mu(o)};
  }
  GridPolicy policy;
  policy.n = o.grid_n;
  policy.L = o.grid_L;
  SweepOptions so;
  so.relax = o.relax;
  so.relax_cfg.max_iters = o.max_iters;
  so.jobs = o.jobs;
  so.resume = o.resume;
  fs::create_directories(o.out);
  so.csv_path = (fs::path(o.out) / "sweep.csv").string();
  so.header_comments = provenance(o, nullptr);
  const ScalingFit fit = scaling_sweep(mu, wells(o), policy, so);
  std::cout << "slope_small=" << (fit.small ? num(fit.small->slope) : "nan")
            << " slope_large=" << (fit.large ? num(fit.large->slope) : "nan") << '\n';
  std::cout << fit_text(fit.small, "small") << '\n' << fit_text(fit.large, "large") << '\n';
  return kOk;
}

// Default probe ball: above the lens, clear of it, radius Rlen / 2.
Ball probe_ball(const Options& o, const Configuration& cfg) {
  const double scale = cfg.lens ? cfg.lens->Rlen : 2.0 * cfg.ball_radius;
  return Ball{{o.ball_x.value_or(0.0), o.ball_y.value_or(0.75 * scale)}, o.ball_R.value_or(0.5 * scale)};
}

int run_rigidity(const Options& o) {
  const double mu = require_mu(o);
  const Configuration cfg = build(o, mu);
  const Ball ball = probe_ball(o, cfg);
  const double m = o.bilip_m.value_or(std::ceil(bilip_constant(cfg.v).m));
  const RhombusReport r = find_good_rhombus(cfg.chi, cfg.v, cfg.W, ball, m, o.k);
  const double N = bad_set_measure(cfg.chi, cfg.v, cfg.W, [&](const Vec2& x) { return r.contains(x); });
  const double ratio = lower_bound_ratio(cfg.chi, cfg.v, cfg.W, ball, o.k.alpha, o.k.eta);

  auto os = open_out(o, "rigidity.txt");
  write_header(os, provenance(o, &cfg.chi.grid));
  os << "ball=" << num(ball.center.x1) << ',' << num(ball.center.x2) << ',' << num(ball.radius) << '\n';
  os << "m=" << num(m) << '\n';
  write_report(os, r);
  os << "bad_set=" << num(N) << '\n';
  os << "C_N=" << num(r.ball_energy > 0.0 ? N / std::sqrt(r.ball_energy) : 0.0) << '\n';
  os << "lower_bound_ratio=" << num(ratio) << '\n';
  std::cout << "C_distortion=" << num(r.C_distortion) << " bad_set=" << num(N) << " lower_bound_ratio=" << num(ratio)
            << '\n';
  return kOk;
}

int run_cover(const Options& o) {
  const double mu = require_mu(o);
  const Configuration cfg = build(o, mu);
  const CoveringReport rep = vitali_cover(cfg.chi, cfg.v, cfg.W, o.k.eta0);
  auto os = open_out(o, "cover.csv");
  write_header(os, provenance(o, &cfg.chi.grid));
  os << "# covers=" << (rep.covers ? 1 : 0) << " disjoint=" << (rep.shrinks_disjoint ? 1 : 0)
     << " chain_constant=" << num(rep.chain_constant) << " max_radius_bound=" << num(rep.max_radius_bound) << '\n';
  write_cover_csv(os, rep);
  std::cout << "balls=" << rep.centers.size() << " covers=" << rep.covers << " disjoint=" << rep.shrinks_disjoint
            << " chain_constant=" << num(rep.chain_constant) << " max_radius_bound=" << num(rep.max_radius_bound)
            << '\n';
  return kOk;
}

int dispatch(const Options& o) {
  if (o.command == "construct") return run_construct(o);
  if (o.command == "relax") return run_relax(o);
  if (o.command == "sweep") return run_sweep(o);
  if (o.command == "rigidity") return run_rigidity(o);
  return run_cover(o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-well inclusion energies: constructions, sweeps and diagnostics"};
  app.set_config("--config", "", "key=value file; command-line options override it");
  app.set_version_flag("--version", TWOWELL_VERSION);
  Options o;

  for (const char* name : {"construct", "relax", "sweep", "rigidity", "cover"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.require_subcommand(1);

  app.add_option("--mu", o.mu, "inclusion area")->check(CLI::PositiveNumber);
  app.add_option("--mu-min", o.mu_min, "sweep: smallest area")->check(CLI::PositiveNumber);
  app.add_option("--mu-max", o.mu_max, "sweep: largest area")->check(CLI::PositiveNumber);
  app.add_option("--points", o.points, "sweep: number of areas, geometric spacing")->check(CLI::PositiveNumber);
  auto* lam = app.add_option("--lambda", o.lambda, "F = diag(lambda, 1/lambda)");
  auto* nu = app.add_option("--nu1", o.nu1, "F = Id + nu1 e1 (x) e2");
  lam->excludes(nu);
  app.add_option("--grid-n", o.grid_n, "cells per side")->check(CLI::PositiveNumber);
  app.add_option("--grid-L", o.grid_L, "window half-width (default 2.5 mu^(2/3), 2.5 mu^(1/2) below 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--rlen", o.rlen, "lens diameter (default mu^(2/3))")->check(CLI::PositiveNumber);
  app.add_flag("--relax", o.relax, "relax after construction");
  app.add_option("--max-iters", o.max_iters, "relaxation iteration cap")->check(CLI::NonNegativeNumber);
  app.add_option("--eta", o.k.eta, "smallness threshold of the probe ball");
  app.add_option("--eta0", o.k.eta0, "covering density threshold");
  app.add_option("--delta", o.k.delta, "cross aspect ratio");
  app.add_option("--theta", o.k.theta, "fraction rejected by each energy test");
  app.add_option("--alpha", o.k.alpha, "inner radius factor of the lower bound");
  app.add_option("--ball-x", o.ball_x, "rigidity: probe ball center x1");
  app.add_option("--ball-y", o.ball_y, "rigidity: probe ball center x2 (default 0.75 Rlen)");
  app.add_option("--ball-R", o.ball_R, "rigidity: probe ball radius (default Rlen / 2)");
  app.add_option("--m", o.bilip_m, "rigidity: bi-Lipschitz constant (default: measured, rounded up)");
  app.add_option("--jobs", o.jobs, "concurrent sweep points")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "seed for randomized checks");
  app.add_flag("--resume", o.resume, "sweep: keep rows already in sweep.csv");
  app.add_flag("--dump", o.dump, "write field dumps");
  app.add_option("--out", o.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    if (!o.lambda && !o.nu1) throw DomainError("one of --lambda or --nu1 is required");
    o.k.validate();
    return dispatch(o);
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error (" << o.command << "): " << e.what() << '\n';
    return kResolution;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis violated (" << o.command << "): " << e.what() << '\n';
    return kHypothesis;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const FitError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error (" << o.command << "): " << e.what() << '\n';
    return kFailure;
  }
}
