#include <doctest.h>

#include <cmath>
#include <sstream>

#include "adlab/monitor.hpp"

using namespace adlab;

namespace {
NormSeries series_of(double T, int samples, double (*linf)(double)) {
  NormSeries s;
  s.T_end = T;
  for (int k = 0; k < samples; ++k) {
    const double t = T * k / (samples - 1);
    s.times.push_back(t);
    s.dt.push_back(0.01);
    s.mass.push_back(1.0);
    s.linf.push_back(linf(t));
    s.boundary_fraction.push_back(0.0);
  }
  return s;
}

PotentialParams weak() {
  PotentialParams p;
  p.A = 2.0;
  p.B = 1.0;
  p.lambda = 1.0;
  return p;
}

DensityField gaussian(const Grid& g, double sigma, double M) {
  ProfileSpec s;
  s.width = sigma;
  s.mass = M;
  return init_profile(g, s).field;
}
}  // namespace

TEST_CASE("verdict rules") {
  SUBCASE("constant L^inf is Bounded") {
    const auto v = boundedness_verdict(series_of(5.0, 51, [](double) { return 3.0; }));
    CHECK(v.tag == VerdictTag::Bounded);
    CHECK(v.tail_to_peak == doctest::Approx(1.0));
  }
  SUBCASE("exponential growth is Growing") {
    const auto v = boundedness_verdict(series_of(4.0, 41, [](double t) { return std::exp(t); }));
    CHECK(v.tag == VerdictTag::Growing);
    CHECK(v.growth_factor == doctest::Approx(std::exp(2.0)).epsilon(1e-12));
  }
  SUBCASE("slow growth is Inconclusive") {
    const auto v = boundedness_verdict(series_of(4.0, 41, [](double t) { return 1.0 + 0.1 * t; }));
    CHECK(v.tag == VerdictTag::Inconclusive);
  }
  SUBCASE("cap termination is BlowupSuspected") {
    auto s = series_of(1.0, 11, [](double t) { return 1.0 + 30.0 * t; });
    s.termination = Termination::BlowupCap;
    CHECK(boundedness_verdict(s).tag == VerdictTag::BlowupSuspected);
    s.termination = Termination::DtMin;
    CHECK(boundedness_verdict(s).tag == VerdictTag::BlowupSuspected);
  }
  SUBCASE("mass at the edge makes it Inconclusive") {
    auto s = series_of(5.0, 51, [](double) { return 3.0; });
    s.boundary_fraction[20] = 2e-6;
    CHECK(boundedness_verdict(s).tag == VerdictTag::Inconclusive);
  }
  SUBCASE("empty series throws") { CHECK_THROWS(boundedness_verdict(NormSeries{})); }
}

TEST_CASE("residual on trivial states") {
  const Grid g(2, 32, 2.0);
  const DensityField zero(g);
  const std::vector<double> no_rate(g.size(), 0.0);
  const auto r0 = differential_inequality_residual(zero, no_rate, weak(), 1.5, 3.0);
  CHECK(r0.lhs == 0.0);
  CHECK(r0.rhs == 0.0);
  CHECK(r0.passes());

  // p = 1: the rate sums to zero, the bound is nonnegative.
  const auto f = gaussian(g, 0.3, 2.0);
  SimConfig c;
  c.m = 1.5;
  const KernelCache cache(g, weak());
  const auto rate = compute_rate(f, c, cache).values(g);
  const auto r1 = differential_inequality_residual(f, rate, weak(), 1.5, 1.0);
  CHECK(std::abs(r1.lhs) <= 1e-12 * mass(f));
  CHECK(r1.rhs >= 0.0);
  CHECK(r1.passes());

  PotentialParams un = weak();
  un.A = 1.0;
  un.B = 0.0;
  un.lambda = 0.0;  // m = 0.4 < 1 - A/n
  CHECK_THROWS_AS(differential_inequality_residual(f, rate, un, 0.4, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(differential_inequality_residual(f, rate, weak(), 1.5, 0.5), std::domain_error);
}

TEST_CASE("weak-singular run: residuals, norms and y_k") {
  const Grid g(2, 64, 4.0);
  SimConfig c;
  c.m = 1.5;
  c.T_end = 1.0;
  c.output_every = 0.1;
  c.monitored_p = {1, 2, 3, 5, 9, 17, 33};
  const auto traj = simulate(gaussian(g, 0.4, 10.0), c, weak());
  const NormSeries& s = traj.series;
  REQUIRE(s.size() == 11);
  CHECK(traj.regime.tag == RegimeTag::WeakSingularInterior);
  CHECK(residuals_pass(s));
  CHECK(mass_drift(s) <= 1e-12);
  REQUIRE(s.residual.size() == c.monitored_p.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(s.lp[0][k] == doctest::Approx(s.mass[k]).epsilon(1e-14));
    // Largest p is within 20% of L^inf on a field spread over many cells.
    CHECK(std::abs(s.lp.back()[k] - s.linf[k]) <= 0.2 * s.linf[k]);
  }

  const auto y = yk_trajectory(s, EstimateCase::Weak, 2, 2.0, 5);
  REQUIRE(y.size() == 6);
  double peak = 0.0;
  for (double v : s.linf) peak = std::max(peak, v);
  for (int k = 0; k <= 5; ++k) {
    const double pk = std::pow(2.0, k) + 1.0;
    CHECK(std::isfinite(y[k]));
    const double root = std::pow(y[k], 1.0 / pk);
    CHECK(root <= 2.0 * peak);
    CHECK(root >= 0.5 * peak);
  }
  CHECK_THROWS(yk_trajectory(s, EstimateCase::Weak, 2, 2.0, 6));
}

TEST_CASE("y_k of a single-sample series is the initial value") {
  const Grid g(2, 32, 2.0);
  const auto f = gaussian(g, 0.3, 1.0);
  SimConfig c;
  c.m = 1.5;
  c.T_end = 0.0;
  c.monitored_p = {2, 3, 5};
  const auto traj = simulate(f, c, weak());
  const auto y = yk_trajectory(traj.series, EstimateCase::Weak, 2, 2.0, 2);
  for (int k = 0; k <= 2; ++k) {
    const double pk = std::pow(2.0, k) + 1.0;
    CHECK(y[k] == doctest::Approx(std::pow(lp_norm(f, pk), pk)).epsilon(1e-13));
  }
}

TEST_CASE("series CSV") {
  const Grid g(2, 32, 2.0);
  SimConfig c;
  c.m = 1.5;
  c.T_end = 0.1;
  c.output_every = 0.05;
  c.monitored_p = {2, 3};
  const auto a = simulate(gaussian(g, 0.3, 1.0), c, weak());
  const auto b = simulate(gaussian(g, 0.3, 1.0), c, weak());
  std::ostringstream sa, sb;
  write_series_csv(sa, a.series);
  write_series_csv(sb, b.series);
  CHECK(sa.str() == sb.str());
  const std::string header = sa.str().substr(0, sa.str().find('\n'));
  CHECK(header == "t,dt,mass,linf,lp_2,lp_3,diss_2,diss_3,resid_2,resid_3,boundary_frac");

  const std::string json = verdict_json(boundedness_verdict(a.series), a);
  CHECK(json.find("\"verdict\"") != std::string::npos);
  CHECK(json.find("nan") == std::string::npos);
}
