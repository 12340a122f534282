// adlab: run, classify, constants, verify, sweep.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "adlab/config.hpp"
#include "adlab/estimates.hpp"
#include "adlab/experiment.hpp"
#include "adlab/kernel_model.hpp"
#include "adlab/verify.hpp"

using namespace adlab;
using nlohmann::ordered_json;

namespace {

constexpr const char* kWorkersEnv = "ADLAB_WORKERS";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("file", 0, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One --section.key option per config key; flags override the file.
struct Overrides {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* app) {
    for (const auto& key : config_keys())
      options[key] = app->add_option("--" + key, values[key], "override " + key)->group("Config keys");
  }

  void apply(ExperimentConfig& cfg) const {
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) apply_override(cfg, key, values.at(key));
  }
};

ExperimentConfig load(const std::string& path, const Overrides& ov) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : parse_config(read_file(path));
  if (const char* env = std::getenv(kWorkersEnv)) apply_override(cfg, "sweep.workers", env);
  ov.apply(cfg);
  return cfg;
}

ordered_json regime_json(const ExperimentConfig& cfg) {
  const Regime r = classify(cfg.potential, cfg.sim.m);
  ordered_json j;
  j["regime"] = to_string(r.tag);
  j["witnesses"] = r.witnesses;
  j["params"] = {{"A", cfg.potential.A},
                 {"B", cfg.potential.B},
                 {"lambda", cfg.potential.lambda},
                 {"n", cfg.potential.n},
                 {"m", cfg.sim.m}};
  return j;
}

ordered_json constants_json(const std::vector<IterationConstants>& table, bool& all_valid) {
  ordered_json rows = ordered_json::array();
  all_valid = true;
  for (const auto& c : table) {
    ordered_json flags = ordered_json::array();
    for (const auto& f : c.flags) flags.push_back({{"name", f.name}, {"holds", f.holds}, {"margin", f.margin}});
    all_valid = all_valid && c.valid();
    ordered_json row = {{"k", c.k},           {"p_k", c.p_k},         {"p_km1", c.p_km1},
                        {"theta", c.theta},   {"theta1", c.theta1},   {"theta2", c.theta2},
                        {"theta3", c.theta3}, {"ell1", c.ell1},       {"ell2", c.ell2},
                        {"eta", c.eta},       {"eta_closed", c.eta_closed},
                        {"eta1", c.eta1},     {"eta2", c.eta2},       {"q1", c.q1},
                        {"q2", c.q2},         {"nu2", c.nu2},         {"formal", c.formal},
                        {"valid", c.valid()}, {"flags", flags}};
    rows.push_back(row);
  }
  return rows;
}

// Which exit code a sweep reports when its runs disagree.
int severity(int code) {
  switch (code) {
    case exit_code::kInvariant: return 4;
    case exit_code::kConfig: return 3;
    case exit_code::kBlowup: return 2;
    case exit_code::kFailure: return 1;
    default: return 0;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aggregation-diffusion lab"};
  app.require_subcommand(1);

  std::string config_path;
  bool print_config = false;
  Overrides run_ov, classify_ov, sweep_ov, constants_ov;

  auto* run_cmd = app.add_subcommand("run", "integrate one configuration; verdict JSON on stdout");
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_flag("--print-config", print_config, "print the effective config and exit");
  run_ov.attach(run_cmd);

  auto* classify_cmd = app.add_subcommand("classify", "regime of the configured parameters as JSON");
  classify_cmd->add_option("config", config_path, "config file");
  classify_ov.attach(classify_cmd);

  std::string case_name;
  double c_m = 0.0, c_A = 0.0, c_B = 0.0;
  int c_n = 0, c_kmax = 0;
  auto* constants_cmd = app.add_subcommand("constants", "iteration constants table as JSON");
  constants_cmd->add_option("config", config_path, "config file");
  auto* o_case = constants_cmd->add_option("--case", case_name, "weak, attractive or strong");
  auto* o_m = constants_cmd->add_option("--m", c_m, "diffusion exponent");
  auto* o_n = constants_cmd->add_option("--n", c_n, "dimension");
  auto* o_A = constants_cmd->add_option("--A", c_A, "attractive exponent");
  auto* o_B = constants_cmd->add_option("--B", c_B, "repulsive exponent");
  auto* o_k = constants_cmd->add_option("--kmax", c_kmax, "largest k");
  constants_ov.attach(constants_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "inequality property suites; pass/fail JSON");

  auto* sweep_cmd = app.add_subcommand("sweep", "runs over sweep.values; summary CSV on stdout");
  sweep_cmd->add_option("config", config_path, "config file")->required();
  sweep_ov.attach(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code::kConfig;
  }

  try {
    if (run_cmd->parsed()) {
      const ExperimentConfig cfg = load(config_path, run_ov);
      if (print_config) {
        std::cout << echo_config(cfg);
        return exit_code::kOk;
      }
      std::istringstream echo(echo_config(cfg));
      for (std::string line; std::getline(echo, line);) std::cerr << "# " << line << "\n";
      const ExperimentOutcome out = run_experiment(cfg);
      write_outputs(cfg, out);
      if (out.completed_run) std::cout << verdict_json(out.verdict, out.trajectory) << "\n";
      std::cerr << "adlab run: " << out.message << " (exit " << out.exit_code << ")\n";
      return out.exit_code;
    }
    if (classify_cmd->parsed()) {
      const ExperimentConfig cfg = load(config_path, classify_ov);
      std::cout << regime_json(cfg).dump(2) << "\n";
      return exit_code::kOk;
    }
    if (constants_cmd->parsed()) {
      ExperimentConfig cfg = load(config_path, constants_ov);
      if (o_case->count()) apply_override(cfg, "estimates.case", case_name);
      if (o_m->count()) cfg.sim.m = c_m;
      if (o_n->count()) cfg.potential.n = c_n;
      if (o_A->count()) cfg.potential.A = c_A;
      if (o_B->count()) cfg.potential.B = c_B;
      if (o_k->count()) cfg.k_max = c_kmax;
      validate_config(cfg);
      const auto table = constants_table(cfg.estimate_case, cfg.sim.m, cfg.potential.n, cfg.potential.A,
                                         cfg.potential.B, cfg.k_max);
      bool all_valid = true;
      ordered_json j;
      j["case"] = to_string(cfg.estimate_case);
      j["m"] = cfg.sim.m;
      j["n"] = cfg.potential.n;
      j["A"] = cfg.potential.A;
      j["B"] = cfg.potential.B;
      j["table"] = constants_json(table, all_valid);
      j["all_valid"] = all_valid;
      std::cout << j.dump(2) << "\n";
      return all_valid ? exit_code::kOk : exit_code::kInvariant;
    }
    if (verify_cmd->parsed()) {
      const auto results = run_verify_suites();
      std::cout << suites_json(results) << "\n";
      for (const auto& r : results)
        if (!r.pass) return exit_code::kInvariant;
      return exit_code::kOk;
    }
    if (sweep_cmd->parsed()) {
      const ExperimentConfig cfg = load(config_path, sweep_ov);
      if (cfg.sweep.values.empty()) throw ConfigError("sweep.values", 0, "must list at least one value");
      const auto rows = run_sweep(cfg, cfg.sweep.workers);
      const std::string summary = sweep_summary_csv(cfg.sweep.parameter, rows);
      std::cout << summary;
      if (!cfg.csv_path.empty()) {
        std::ofstream os(tagged_path(cfg.csv_path, "summary"), std::ios::binary);
        os << summary;
      }
      int worst = exit_code::kOk;
      for (const auto& r : rows) {
        if (r.exit_code != exit_code::kOk)
          std::cerr << "adlab sweep: " << cfg.sweep.parameter << "=" << r.value << ": " << r.message << "\n";
        if (severity(r.exit_code) > severity(worst)) worst = r.exit_code;
      }
      return worst;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_code::kConfig;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_code::kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code::kFailure;
  }
  return exit_code::kFailure;
}
