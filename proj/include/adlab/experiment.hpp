// One configured experiment end to end (initial profile, run, verdict, exit
// code) and parameter sweeps over it.
#pragma once

#include <string>
#include <vector>

#include "adlab/config.hpp"
#include "adlab/monitor.hpp"

namespace adlab {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;    // verdict contradicts sim.expect
inline constexpr int kConfig = 2;
inline constexpr int kInvariant = 3;  // negative cell, mass drift, residual, non-finite output
inline constexpr int kBlowup = 4;     // cap or dt_min stop; 0 when sim.expect = blowup
}  // namespace exit_code

/// Relative mass drift allowed over a run.
inline constexpr double kMassDriftTol = 1e-10;

struct ExperimentOutcome {
  Trajectory trajectory;
  Verdict verdict;
  bool completed_run = false;  // false after a scheme violation
  int exit_code = exit_code::kOk;
  std::string message;
  double seconds = 0.0;
};

/// Runs without writing files. Config errors surface as ConfigError.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

/// CSV series, verdict JSON and final snapshot to the configured paths (empty
/// paths are skipped).
void write_outputs(const ExperimentConfig& cfg, const ExperimentOutcome& outcome);

/// The config with sweep.parameter set to `value`.
ExperimentConfig sweep_point(const ExperimentConfig& cfg, double value);

struct SweepRow {
  double value = 0.0;
  std::string verdict;
  std::string termination;
  double peak_linf = 0.0;
  double growth_factor = 0.0;
  double mass_drift = 0.0;
  std::size_t steps = 0;
  int exit_code = 0;
  std::string message;
};

/// Runs every sweep value on up to `workers` threads. Per-run files get the
/// run index inserted before the extension; rows come back in value order.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, int workers);

/// Header value,verdict,termination,peak_linf,growth_factor,mass_drift,steps,exit_code.
std::string sweep_summary_csv(const std::string& parameter, const std::vector<SweepRow>& rows);

/// Path with ".<tag>" inserted before the extension; empty stays empty.
std::string tagged_path(const std::string& path, const std::string& tag);
std::string indexed_path(const std::string& path, std::size_t index);

}  // namespace adlab
