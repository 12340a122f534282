// Inequality property suites shared by the verify subcommand, the tests and
// the acceptance binary.
#pragma once

#include <string>
#include <vector>

namespace adlab {

struct SuiteResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // the measured quantity
  double threshold = 0.0;  // what it is compared against
  std::string detail;
  double seconds = 0.0;
};

/// max |(-Delta)^s K_s u - u| over r <= 2 sigma, divided by max u, for a
/// gaussian of sigma = 0.05 L on an N x N grid of half-width L = 2; s = 1/2.
SuiteResult riesz_composition_suite(int N = 256, double tol = 1e-3);

/// Worst sv_gap / int v^gamma over `seeds` random fields on a 64 x 64 grid,
/// for (gamma, alpha) in {(3, 1), (4, 0.5)}; passes when >= -tol.
SuiteResult sv_random_suite(int seeds = 100, double tol = 1e-10);

/// Rayleigh quotient ||grad h||_2^2 / ||h||_6^2 of h = (1 + r^2)^{-1/2} on an
/// N-cell radial grid r = tan(pi xi / 2); compared with sobolev_constant(3).
double measured_sobolev_quotient(int N = 256);
SuiteResult sobolev_quotient_suite(int N = 256, double rel_tol = 0.05);

/// |S(3, 1/2) - 0.370018| <= tol.
SuiteResult fractional_sobolev_suite(double tol = 1e-5);

/// hls_constant_bound(n, A, (p+1)/p, s(p)) <= C(n, A; p0) (p + 1) on a
/// geometric p grid up to 1e4, for several (n, A).
SuiteResult hls_growth_suite();

std::vector<SuiteResult> run_verify_suites();

std::string suites_json(const std::vector<SuiteResult>& results);

}  // namespace adlab
