// Experiment configuration: INI-style sections of key = value lines.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "adlab/estimates.hpp"
#include "adlab/field.hpp"
#include "adlab/kernel_model.hpp"
#include "adlab/solver.hpp"

namespace adlab {

/// key is "section.name"; line is 0 when the key came from an override or a
/// cross-key check.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message);
  std::string key;
  int line = 0;
};

enum class Expectation { Any, Bounded, Blowup };
Expectation parse_expectation(const std::string& name);
std::string to_string(Expectation e);

struct SweepSpec {
  std::string parameter = "mass";  // mass, m, A, B, lambda
  std::vector<double> values;
  int workers = 1;  // overridden by ADLAB_WORKERS
};

struct ExperimentConfig {
  PotentialParams potential;
  int grid_dim = 2;
  int grid_N = 128;
  double grid_L = 4.0;
  ProfileSpec initial;
  SimConfig sim;
  Expectation expect = Expectation::Any;
  EstimateCase estimate_case = EstimateCase::Weak;
  int k_max = 5;
  SweepSpec sweep;
  std::string csv_path;
  std::string verdict_path;
  std::string snapshot_path;

  Grid grid() const { return Grid(grid_dim, grid_N, grid_L); }
};

/// Total validation; unknown sections or keys are errors.
ExperimentConfig parse_config(const std::string& text);

/// Sets "section.key" = value on top of a parsed config and revalidates.
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Every known key, "section.key".
std::vector<std::string> config_keys();

/// Effective configuration in the input format; parse_config(echo(c)) == c.
std::string echo_config(const ExperimentConfig& cfg);

/// Module-level checks; throws ConfigError naming the first offending key.
void validate_config(const ExperimentConfig& cfg);

}  // namespace adlab
