#include "adlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

namespace adlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_real(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) throw ConfigError(key, 0, "expected a number, got '" + s + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) throw ConfigError(key, 0, "expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key, 0, "expected true or false, got '" + s + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_real(key, item));
  }
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class Get>
Field real_field(Get g) {
  return {[g](ExperimentConfig& c, const std::string& k, const std::string& v) { g(c) = to_real(k, v); },
          [g](const ExperimentConfig& c) { return fmt(g(const_cast<ExperimentConfig&>(c))); }};
}

template <class Get>
Field int_field(Get g) {
  return {[g](ExperimentConfig& c, const std::string& k, const std::string& v) {
            g(c) = static_cast<std::remove_reference_t<decltype(g(c))>>(to_integer(k, v));
          },
          [g](const ExperimentConfig& c) { return std::to_string(g(const_cast<ExperimentConfig&>(c))); }};
}

template <class Get>
Field string_field(Get g) {
  return {[g](ExperimentConfig& c, const std::string&, const std::string& v) { g(c) = trim(v); },
          [g](const ExperimentConfig& c) { return g(const_cast<ExperimentConfig&>(c)); }};
}

template <class Get>
Field list_field(Get g) {
  return {[g](ExperimentConfig& c, const std::string& k, const std::string& v) { g(c) = to_list(k, v); },
          [g](const ExperimentConfig& c) { return list_text(g(const_cast<ExperimentConfig&>(c))); }};
}

// Ordered as echoed.
const std::vector<std::pair<std::string, Field>>& fields() {
  using C = ExperimentConfig;
  static const std::vector<std::pair<std::string, Field>> table = {
      {"potential.A", real_field([](C& c) -> double& { return c.potential.A; })},
      {"potential.B", real_field([](C& c) -> double& { return c.potential.B; })},
      {"potential.lambda", real_field([](C& c) -> double& { return c.potential.lambda; })},
      {"potential.n", int_field([](C& c) -> int& { return c.potential.n; })},
      {"model.m", real_field([](C& c) -> double& { return c.sim.m; })},
      {"grid.dim", int_field([](C& c) -> int& { return c.grid_dim; })},
      {"grid.N", int_field([](C& c) -> int& { return c.grid_N; })},
      {"grid.L", real_field([](C& c) -> double& { return c.grid_L; })},
      {"initial.profile",
       {[](C& c, const std::string& k, const std::string& v) {
          try {
            c.initial.kind = parse_profile_kind(trim(v));
          } catch (const std::invalid_argument& e) {
            throw ConfigError(k, 0, e.what());
          }
        },
        [](const C& c) { return to_string(c.initial.kind); }}},
      {"initial.mass", real_field([](C& c) -> double& { return c.initial.mass; })},
      {"initial.center_x", real_field([](C& c) -> double& { return c.initial.center_x; })},
      {"initial.center_y", real_field([](C& c) -> double& { return c.initial.center_y; })},
      {"initial.width", real_field([](C& c) -> double& { return c.initial.width; })},
      {"initial.separation", real_field([](C& c) -> double& { return c.initial.separation; })},
      {"initial.radius", real_field([](C& c) -> double& { return c.initial.radius; })},
      {"initial.seed",
       {[](C& c, const std::string& k, const std::string& v) {
          const long long s = to_integer(k, v);
          if (s < 0) throw ConfigError(k, 0, "must be >= 0");
          c.initial.seed = static_cast<std::uint64_t>(s);
        },
        [](const C& c) { return std::to_string(c.initial.seed); }}},
      {"sim.T_end", real_field([](C& c) -> double& { return c.sim.T_end; })},
      {"sim.cfl", real_field([](C& c) -> double& { return c.sim.cfl; })},
      {"sim.dt_min", real_field([](C& c) -> double& { return c.sim.dt_min; })},
      {"sim.blowup_cap_factor", real_field([](C& c) -> double& { return c.sim.blowup_cap_factor; })},
      {"sim.output_every", real_field([](C& c) -> double& { return c.sim.output_every; })},
      {"sim.epsilon", real_field([](C& c) -> double& { return c.sim.epsilon; })},
      {"sim.monitored_p", list_field([](C& c) -> std::vector<double>& { return c.sim.monitored_p; })},
      {"sim.interaction",
       {[](C& c, const std::string& k, const std::string& v) { c.sim.interaction = to_bool(k, v); },
        [](const C& c) { return std::string(c.sim.interaction ? "true" : "false"); }}},
      {"sim.expect",
       {[](C& c, const std::string& k, const std::string& v) {
          try {
            c.expect = parse_expectation(trim(v));
          } catch (const std::invalid_argument& e) {
            throw ConfigError(k, 0, e.what());
          }
        },
        [](const C& c) { return to_string(c.expect); }}},
      {"estimates.case",
       {[](C& c, const std::string& k, const std::string& v) {
          try {
            c.estimate_case = parse_estimate_case(trim(v));
          } catch (const std::invalid_argument& e) {
            throw ConfigError(k, 0, e.what());
          }
        },
        [](const C& c) { return to_string(c.estimate_case); }}},
      {"estimates.k_max", int_field([](C& c) -> int& { return c.k_max; })},
      {"sweep.parameter", string_field([](C& c) -> std::string& { return c.sweep.parameter; })},
      {"sweep.values", list_field([](C& c) -> std::vector<double>& { return c.sweep.values; })},
      {"sweep.workers", int_field([](C& c) -> int& { return c.sweep.workers; })},
      {"output.csv", string_field([](C& c) -> std::string& { return c.csv_path; })},
      {"output.verdict", string_field([](C& c) -> std::string& { return c.verdict_path; })},
      {"output.snapshot", string_field([](C& c) -> std::string& { return c.snapshot_path; })},
  };
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& [k, f] : fields())
    if (k == key) return &f;
  return nullptr;
}

// Maps the "name: rule" prefix of a module-level error to its config key.
std::string key_of(const std::string& message, const std::string& section) {
  const auto colon = message.find(':');
  const std::string name = colon == std::string::npos ? "" : message.substr(0, colon);
  const std::string key = section + "." + name;
  if (find_field(key)) return key;
  if (name == "m") return "model.m";
  if (name == "blowup_cap_factor" || name == "T_end" || name == "cfl" || name == "dt_min")
    return "sim." + name;
  return section;
}

// "name: rule" -> "rule".
std::string rule_of(const std::string& message) {
  const auto colon = message.find(": ");
  return colon == std::string::npos ? message : message.substr(colon + 2);
}

}  // namespace

ConfigError::ConfigError(std::string k, int l, const std::string& message)
    : std::runtime_error((l > 0 ? "line " + std::to_string(l) + ": " : std::string()) + k + ": " + message),
      key(std::move(k)),
      line(l) {}

Expectation parse_expectation(const std::string& name) {
  if (name == "any") return Expectation::Any;
  if (name == "bounded") return Expectation::Bounded;
  if (name == "blowup") return Expectation::Blowup;
  throw std::invalid_argument("unknown expectation '" + name + "' (any, bounded, blowup)");
}

std::string to_string(Expectation e) {
  switch (e) {
    case Expectation::Any: return "any";
    case Expectation::Bounded: return "bounded";
    case Expectation::Blowup: return "blowup";
  }
  return "any";
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& [k, f] : fields()) out.push_back(k);
  return out;
}

void validate_config(const ExperimentConfig& c) {
  try {
    c.potential.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(key_of(e.what(), "potential"), 0, rule_of(e.what()));
  }
  try {
    classify(c.potential, c.sim.m);
  } catch (const ParameterError& e) {
    throw ConfigError(key_of(e.what(), "model"), 0, rule_of(e.what()));
  }
  try {
    c.sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key_of(e.what(), "sim"), 0, rule_of(e.what()));
  }
  if (c.grid_dim != 1 && c.grid_dim != 2) throw ConfigError("grid.dim", 0, "must be 1 or 2");
  if (c.grid_N < 8 || c.grid_N % 2 != 0) throw ConfigError("grid.N", 0, "must be even and >= 8");
  if (!(c.grid_L > 0.0) || !std::isfinite(c.grid_L)) throw ConfigError("grid.L", 0, "must be > 0");
  if (!(c.initial.mass > 0.0)) throw ConfigError("initial.mass", 0, "must be > 0");
  if (!(c.initial.width > 0.0)) throw ConfigError("initial.width", 0, "must be > 0");
  if (!(c.initial.radius > 0.0)) throw ConfigError("initial.radius", 0, "must be > 0");
  if (!(c.initial.separation >= 0.0)) throw ConfigError("initial.separation", 0, "must be >= 0");
  if (c.k_max < 1 || c.k_max > 60) throw ConfigError("estimates.k_max", 0, "must lie in [1, 60]");
  static const std::set<std::string> sweepable = {"mass", "m", "A", "B", "lambda"};
  if (!sweepable.count(c.sweep.parameter))
    throw ConfigError("sweep.parameter", 0, "must be one of mass, m, A, B, lambda");
  if (c.sweep.workers < 1) throw ConfigError("sweep.workers", 0, "must be >= 1");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s.resize(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(s, line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      bool known = false;
      for (const auto& [k, f] : fields()) known = known || k.rfind(section + ".", 0) == 0;
      if (!known) throw ConfigError(section, line, "unknown section");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(s, line, "expected key = value");
    const std::string name = trim(s.substr(0, eq));
    if (section.empty()) throw ConfigError(name, line, "key outside of a section");
    const std::string key = section + "." + name;
    const Field* f = find_field(key);
    if (!f) throw ConfigError(key, line, "unknown key");
    if (seen.count(key)) throw ConfigError(key, line, "duplicate key (first set on line " +
                                                          std::to_string(seen[key]) + ")");
    seen[key] = line;
    try {
      f->set(cfg, key, s.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(key, line, std::string(e.what()).substr(key.size() + 2));
    }
  }
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    const auto it = seen.find(e.key);
    if (it == seen.end()) throw;
    throw ConfigError(e.key, it->second, std::string(e.what()).substr(e.key.size() + 2));
  }
  return cfg;
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError(key, 0, "unknown key");
  ExperimentConfig next = cfg;
  f->set(next, key, value);
  validate_config(next);
  cfg = std::move(next);
}

std::string echo_config(const ExperimentConfig& cfg) {
  std::string out, section;
  for (const auto& [k, f] : fields()) {
    const auto dot = k.find('.');
    const std::string sec = k.substr(0, dot);
    if (sec != section) {
      out += (section.empty() ? "" : "\n") + ("[" + sec + "]\n");
      section = sec;
    }
    out += k.substr(dot + 1) + " = " + f.get(cfg) + "\n";
  }
  return out;
}

}  // namespace adlab
