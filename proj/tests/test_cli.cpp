#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "adlab/config.hpp"
#include "adlab/experiment.hpp"

using namespace adlab;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Proc {
  int code;
  std::string out;
};

// Runs the CLI with stderr discarded.
Proc cli(const std::string& args) {
  const char* bin = std::getenv("ADLAB_CLI");
  REQUIRE(bin != nullptr);
  FILE* p = popen((std::string(bin) + " " + args + " 2>/dev/null").c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string configs() {
  const char* dir = std::getenv("ADLAB_CONFIGS");
  REQUIRE(dir != nullptr);
  return dir;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("adlab_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const char* kSmall = R"(
[potential]
A = 2
B = 1
lambda = 1
[model]
m = 1.5
[grid]
N = 32
L = 3
[initial]
mass = 2
width = 0.4
[sim]
T_end = 0.2
output_every = 0.05
monitored_p = 1, 2, 3
)";

const char* kBlowup = R"(
[potential]
A = 0
lambda = 0
[model]
m = 1
[grid]
N = 64
L = 4
[initial]
mass = 12
width = 0.5
[sim]
T_end = 2
blowup_cap_factor = 10
)";
}  // namespace

TEST_CASE("parse_config") {
  SUBCASE("empty text gives the defaults") {
    const auto c = parse_config("");
    CHECK(c.grid_N == 128);
    CHECK(c.potential.A == 2.0);
    CHECK(c.expect == Expectation::Any);
  }
  SUBCASE("echo round-trips") {
    auto c = parse_config(kSmall);
    c.initial.center_x = 0.1 + 0.2;  // not a short decimal
    const std::string e = echo_config(c);
    CHECK(echo_config(parse_config(e)) == e);
    CHECK(parse_config(e).initial.center_x == c.initial.center_x);
  }
  SUBCASE("comments and spacing") {
    const auto c = parse_config("# top\n[model]\n  m=2 ; trailing\n\n[grid]\nN = 16\n");
    CHECK(c.sim.m == 2.0);
    CHECK(c.grid_N == 16);
  }
}

TEST_CASE("config errors name the key and line") {
  auto error_of = [](const std::string& text) -> ConfigError {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e;
    }
    FAIL("no error");
    return ConfigError("", 0, "");
  };
  SUBCASE("negative lambda") {
    const auto e = error_of("[potential]\nlambda = -1\n");
    CHECK(e.key == "potential.lambda");
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("lambda >= 0") != std::string::npos);
  }
  SUBCASE("B >= A with repulsion") {
    const auto e = error_of("[potential]\nA = 1\nB = 1.5\nlambda = 1\n");
    CHECK(e.key == "potential.B");
    CHECK(std::string(e.what()).find("A > B") != std::string::npos);
  }
  SUBCASE("unknown key") {
    const auto e = error_of("[grid]\nN = 32\nLL = 3\n");
    CHECK(e.key == "grid.LL");
    CHECK(e.line == 3);
  }
  SUBCASE("unknown section") { CHECK(error_of("[gird]\nN = 32\n").line == 1); }
  SUBCASE("duplicate key") { CHECK(error_of("[grid]\nN = 32\nN = 64\n").line == 3); }
  SUBCASE("malformed number") {
    const auto e = error_of("[sim]\nT_end = 5s\n");
    CHECK(e.key == "sim.T_end");
    CHECK(e.line == 2);
  }
  SUBCASE("line without =") { CHECK(error_of("[sim]\nT_end\n").line == 2); }
  SUBCASE("bad enum") { CHECK(error_of("[initial]\nprofile = square\n").key == "initial.profile"); }
}

TEST_CASE("overrides") {
  auto c = parse_config(kSmall);
  apply_override(c, "grid.N", "48");
  apply_override(c, "sim.monitored_p", "2, 9");
  CHECK(c.grid_N == 48);
  CHECK(c.sim.monitored_p == std::vector<double>{2, 9});
  CHECK_THROWS_AS(apply_override(c, "grid.M", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "potential.lambda", "-2"), ConfigError);
  CHECK(config_keys().size() >= 30);
}

TEST_CASE("experiment exit codes") {
  SUBCASE("bounded run") {
    auto c = parse_config(kSmall);
    const auto o = run_experiment(c);
    CHECK(o.exit_code == exit_code::kOk);
    CHECK(o.completed_run);
    c.expect = Expectation::Blowup;
    CHECK(run_experiment(c).exit_code == exit_code::kFailure);
  }
  SUBCASE("blow-up run") {
    auto c = parse_config(kBlowup);
    CHECK(run_experiment(c).exit_code == exit_code::kBlowup);
    c.expect = Expectation::Blowup;
    const auto o = run_experiment(c);
    CHECK(o.exit_code == exit_code::kOk);
    CHECK(o.verdict.tag == VerdictTag::BlowupSuspected);
    c.expect = Expectation::Bounded;
    CHECK(run_experiment(c).exit_code == exit_code::kBlowup);
  }
}

TEST_CASE("paths") {
  CHECK(tagged_path("out/run.csv", "summary") == "out/run.summary.csv");
  CHECK(tagged_path("out.d/run", "3") == "out.d/run.3");
  CHECK(indexed_path("a.json", 2) == "a.2.json");
  CHECK(tagged_path("", "x").empty());
}

TEST_CASE("sweeps are deterministic across worker counts") {
  const fs::path d1 = scratch("sweep1"), d2 = scratch("sweep2");
  auto c = parse_config(kSmall);
  c.sweep.values = {1.0, 2.0, 3.0};
  c.csv_path = (d1 / "run.csv").string();
  const auto r1 = run_sweep(c, 1);
  c.csv_path = (d2 / "run.csv").string();
  const auto r2 = run_sweep(c, 3);
  CHECK(sweep_summary_csv("mass", r1) == sweep_summary_csv("mass", r2));
  for (int i = 0; i < 3; ++i) {
    const std::string name = "run." + std::to_string(i) + ".csv";
    const std::string a = slurp(d1 / name);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(d2 / name));
  }
  c.sweep.parameter = "colour";
  CHECK(run_sweep(c, 1)[0].exit_code == exit_code::kConfig);
}

TEST_CASE("command line") {
  SUBCASE("classify the fair-competition config") {
    const auto r = cli("classify " + configs() + "/keller_segel_subcritical.ini");
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["regime"] == "FairCompetition");
  }
  SUBCASE("constants table") {
    const auto r = cli("constants --case weak --m 1 --n 2 --kmax 3");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const auto& row = j["table"][0];
    CHECK(row["k"] == 1);
    CHECK(row["theta2"].get<double>() == doctest::Approx(2.0 / 3.0));
    CHECK(row["ell2"].get<double>() == doctest::Approx(1.5));
    CHECK(row["eta"].get<double>() == doctest::Approx(1.5));
  }
  SUBCASE("config errors exit 2") {
    const fs::path d = scratch("cli");
    std::ofstream(d / "bad.ini") << "[potential]\nlambda = -1\n";
    CHECK(cli("run " + (d / "bad.ini").string()).code == 2);
    CHECK(cli("run " + (d / "missing.ini").string()).code == 2);
    CHECK(cli("run --no-such-flag").code == 2);
    CHECK(cli("classify --potential.lambda -1").code == 2);
  }
  SUBCASE("flags override the file") {
    const auto r = cli("run " + configs() + "/weak_singular.ini --print-config --grid.N 40");
    CHECK(r.code == 0);
    CHECK(parse_config(r.out).grid_N == 40);
  }
  SUBCASE("verify passes") {
    const auto r = cli("verify");
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["pass"] == true);
  }
  SUBCASE("run writes outputs and exits per expectation") {
    const fs::path d = scratch("run");
    std::ofstream(d / "small.ini") << kSmall << "expect = bounded\n[output]\ncsv = "
                                   << (d / "s.csv").string() << "\nverdict = " << (d / "s.json").string() << "\n";
    const auto r = cli("run " + (d / "small.ini").string());
    CHECK(r.code == 0);
    CHECK(fs::exists(d / "s.csv"));
    CHECK(nlohmann::json::parse(slurp(d / "s.json"))["verdict"] == "Bounded");
    const std::string first = slurp(d / "s.csv");
    CHECK(cli("run " + (d / "small.ini").string()).code == 0);
    CHECK(slurp(d / "s.csv") == first);
  }
}
