#include "adlab/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace adlab {

namespace {

bool all_finite(const NormSeries& s) {
  auto ok = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  if (!ok(s.times) || !ok(s.mass) || !ok(s.linf) || !ok(s.boundary_fraction)) return false;
  for (const auto& v : s.lp)
    if (!ok(v)) return false;
  for (const auto& v : s.dissipation)
    if (!ok(v)) return false;
  for (const auto& v : s.residual)
    if (!ok(v)) return false;
  return true;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentOutcome out;
  const Grid grid = cfg.grid();
  const InitialProfile init = init_profile(grid, cfg.initial);
  try {
    out.trajectory = simulate(init.field, cfg.sim, cfg.potential);
    out.completed_run = true;
  } catch (const SchemeViolation& e) {
    out.exit_code = exit_code::kInvariant;
    out.message = std::string("scheme violation at t=") + std::to_string(e.time) + ": " + e.what();
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const NormSeries& s = out.trajectory.series;
  out.verdict = boundedness_verdict(s);
  const bool stopped = out.trajectory.run.termination != Termination::Completed;
  std::vector<std::string> problems;
  if (mass_drift(s) > kMassDriftTol) problems.push_back("mass drift " + std::to_string(mass_drift(s)));
  if (out.trajectory.run.min_density < 0.0) problems.push_back("negative density");
  if (!residuals_pass(s)) problems.push_back("differential-inequality residual above tolerance");
  if (!stopped && !all_finite(s)) problems.push_back("non-finite value in the series");

  if (!problems.empty()) {
    out.exit_code = exit_code::kInvariant;
    for (const auto& p : problems) out.message += (out.message.empty() ? "" : "; ") + p;
  } else if (stopped) {
    out.exit_code = cfg.expect == Expectation::Blowup ? exit_code::kOk : exit_code::kBlowup;
    out.message = "terminated on " + to_string(out.trajectory.run.termination);
  } else if (cfg.expect == Expectation::Blowup) {
    out.exit_code = exit_code::kFailure;
    out.message = "expected blow-up but the run completed (" + to_string(out.verdict.tag) + ")";
  } else if (cfg.expect == Expectation::Bounded && out.verdict.tag != VerdictTag::Bounded) {
    out.exit_code = exit_code::kFailure;
    out.message = "expected Bounded, got " + to_string(out.verdict.tag);
  } else {
    out.message = to_string(out.verdict.tag);
  }
  if (init.near_boundary) out.message += " (initial support reaches beyond half the box)";
  return out;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentOutcome& outcome) {
  if (!outcome.completed_run) return;
  if (!cfg.csv_path.empty()) {
    auto os = open_out(cfg.csv_path);
    write_series_csv(os, outcome.trajectory.series);
  }
  if (!cfg.verdict_path.empty()) {
    auto os = open_out(cfg.verdict_path);
    os << verdict_json(outcome.verdict, outcome.trajectory) << "\n";
  }
  if (!cfg.snapshot_path.empty()) {
    auto os = open_out(cfg.snapshot_path);
    write_field_csv(os, outcome.trajectory.run.final_state);
  }
}

ExperimentConfig sweep_point(const ExperimentConfig& cfg, double value) {
  ExperimentConfig c = cfg;
  const std::string& p = cfg.sweep.parameter;
  if (p == "mass") c.initial.mass = value;
  else if (p == "m") c.sim.m = value;
  else if (p == "A") c.potential.A = value;
  else if (p == "B") c.potential.B = value;
  else if (p == "lambda") c.potential.lambda = value;
  else throw ConfigError("sweep.parameter", 0, "unknown parameter '" + p + "'");
  return c;
}

std::string tagged_path(const std::string& path, const std::string& tag) {
  if (path.empty()) return path;
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "." + tag;
  return path.substr(0, dot) + "." + tag + path.substr(dot);
}

std::string indexed_path(const std::string& path, std::size_t index) {
  return tagged_path(path, std::to_string(index));
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, int workers) {
  const std::size_t count = cfg.sweep.values.size();
  std::vector<SweepRow> rows(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      SweepRow& row = rows[i];
      row.value = cfg.sweep.values[i];
      try {
        ExperimentConfig c = sweep_point(cfg, row.value);
        c.csv_path = indexed_path(cfg.csv_path, i);
        c.verdict_path = indexed_path(cfg.verdict_path, i);
        c.snapshot_path = indexed_path(cfg.snapshot_path, i);
        const ExperimentOutcome o = run_experiment(c);
        write_outputs(c, o);
        row.exit_code = o.exit_code;
        row.message = o.message;
        if (o.completed_run) {
          row.verdict = to_string(o.verdict.tag);
          row.termination = to_string(o.trajectory.run.termination);
          row.peak_linf = o.verdict.peak_linf;
          row.growth_factor = o.verdict.growth_factor;
          row.mass_drift = mass_drift(o.trajectory.series);
          row.steps = o.trajectory.run.steps;
        } else {
          row.verdict = "none";
          row.termination = "scheme_violation";
        }
      } catch (const ConfigError& e) {
        row.exit_code = exit_code::kConfig;
        row.verdict = "none";
        row.termination = "config_error";
        row.message = e.what();
      } catch (const std::exception& e) {
        row.exit_code = exit_code::kFailure;
        row.verdict = "none";
        row.termination = "error";
        row.message = e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_summary_csv(const std::string& parameter, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << parameter << ",verdict,termination,peak_linf,growth_factor,mass_drift,steps,exit_code\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : rows)
    os << num(r.value) << ',' << r.verdict << ',' << r.termination << ',' << num(r.peak_linf) << ','
       << num(r.growth_factor) << ',' << num(r.mass_drift) << ',' << r.steps << ',' << r.exit_code << "\n";
  return os.str();
}

}  // namespace adlab
