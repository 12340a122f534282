#include "adlab/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "adlab/estimates.hpp"
#include "adlab/field.hpp"
#include "adlab/kernel_model.hpp"
#include "adlab/operators.hpp"

namespace adlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

SuiteResult riesz_composition_suite(int N, double tol) {
  const auto t0 = Clock::now();
  constexpr double kHalfWidth = 2.0;
  const double sigma = 0.05 * kHalfWidth;
  const Grid g(2, N, kHalfWidth);
  ProfileSpec spec;
  spec.width = sigma;
  const DensityField u = init_profile(g, spec).field;
  const FractionalOrder s(0.5);
  const DensityField potential(g, riesz_potential(u, s));
  const std::vector<double> back = fractional_laplacian(potential, s);
  double err = 0.0, peak = 0.0;
  for (int iy = 0; iy < N; ++iy)
    for (int ix = 0; ix < N; ++ix) {
      if (std::hypot(g.center(ix), g.center(iy)) > 2.0 * sigma) continue;
      const std::size_t i = g.index(ix, iy);
      err = std::max(err, std::abs(back[i] - u[i]));
      peak = std::max(peak, u[i]);
    }
  SuiteResult r;
  r.name = "riesz_composition";
  r.value = err / peak;
  r.threshold = tol;
  r.pass = r.value <= tol;
  r.detail = "N=" + std::to_string(N) + " s=1/2 gaussian sigma=" + num(sigma);
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult sv_random_suite(int seeds, double tol) {
  const auto t0 = Clock::now();
  const Grid g(2, 64, 1.0);
  const std::pair<double, double> orders[] = {{3.0, 1.0}, {4.0, 0.5}};
  double worst = std::numeric_limits<double>::infinity();
  std::string at;
  for (int seed = 1; seed <= seeds; ++seed) {
    ProfileSpec spec;
    spec.kind = ProfileKind::UniformRandom;
    spec.width = 0.6;
    spec.seed = static_cast<std::uint64_t>(seed);
    const DensityField f = init_profile(g, spec).field;
    for (const auto& [gamma, alpha] : orders) {
      const double scale = std::pow(lp_norm(f, gamma), gamma);
      const double ratio = sv_gap(f, gamma, alpha) / scale;
      if (ratio < worst) {
        worst = ratio;
        at = "seed=" + std::to_string(seed) + " gamma=" + num(gamma) + " alpha=" + num(alpha);
      }
    }
  }
  SuiteResult r;
  r.name = "stroock_varopoulos";
  r.value = worst;
  r.threshold = -tol;
  r.pass = worst >= -tol;
  r.detail = std::to_string(seeds) + " random fields; worst at " + at;
  r.seconds = seconds_since(t0);
  return r;
}

double measured_sobolev_quotient(int N) {
  std::vector<double> rad(N), h(N);
  for (int j = 0; j < N; ++j) {
    rad[j] = std::tan(0.5 * std::numbers::pi * j / N);
    h[j] = 1.0 / std::sqrt(1.0 + rad[j] * rad[j]);
  }
  double grad = 0.0, sixth = 0.0;
  for (int j = 0; j + 1 < N; ++j) {
    const double dr = rad[j + 1] - rad[j];
    const double rm = 0.5 * (rad[j] + rad[j + 1]);
    const double hm = 0.5 * (h[j] + h[j + 1]);
    const double dh = (h[j + 1] - h[j]) / dr;
    grad += dh * dh * rm * rm * dr;
    sixth += std::pow(hm, 6.0) * rm * rm * dr;
  }
  const double area = 4.0 * std::numbers::pi;
  return area * grad / std::cbrt(area * sixth);
}

SuiteResult sobolev_quotient_suite(int N, double rel_tol) {
  const auto t0 = Clock::now();
  SuiteResult r;
  r.name = "sobolev_quotient";
  const double s3 = sobolev_constant(3);
  const double q = measured_sobolev_quotient(N);
  r.value = std::abs(q / s3 - 1.0);
  r.threshold = rel_tol;
  r.pass = r.value <= rel_tol;
  r.detail = "S_3=" + num(s3) + " measured=" + num(q) + " N=" + std::to_string(N);
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult fractional_sobolev_suite(double tol) {
  const auto t0 = Clock::now();
  SuiteResult r;
  r.name = "fractional_sobolev";
  const double v = fractional_sobolev_constant(3, 0.5);
  r.value = std::abs(v - 0.370018);
  r.threshold = tol;
  r.pass = r.value <= tol;
  r.detail = "S(3,1/2)=" + num(v);
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult hls_growth_suite() {
  const auto t0 = Clock::now();
  const std::pair<int, double> cases[] = {{2, 1.0}, {2, 0.5}, {3, 1.0}, {3, 0.0}, {3, 1.5}};
  double worst = 0.0;  // max of bound / (C (p+1))
  std::string at;
  for (const auto& [n, A] : cases) {
    const double beta = (2.0 - A) / n;
    const double threshold = std::max(1.0, (A - 2.0 + n) / (2.0 - A));
    double p0 = threshold + 1.0;
    while (beta * (p0 + 1.0) <= 1.0) p0 += 1.0;
    const double C = hls_growth_constant(n, A, p0);
    for (double p = p0; p <= 1e4; p *= 1.1) {
      const double bound = hls_constant_bound(n, A, (p + 1.0) / p, hls_s(A, n, p));
      const double ratio = bound / (C * (p + 1.0));
      if (ratio > worst) {
        worst = ratio;
        at = "n=" + std::to_string(n) + " A=" + num(A) + " p=" + num(p);
      }
    }
  }
  SuiteResult r;
  r.name = "hls_growth";
  r.value = worst;
  r.threshold = 1.0;
  r.pass = worst <= 1.0;
  r.detail = "max bound/(C(p+1)) at " + at;
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<SuiteResult> run_verify_suites() {
  return {sv_random_suite(), hls_growth_suite(), sobolev_quotient_suite(), fractional_sobolev_suite(),
          riesz_composition_suite()};
}

std::string suites_json(const std::vector<SuiteResult>& results) {
  nlohmann::ordered_json out;
  bool all = true;
  for (const auto& r : results) {
    out["suites"].push_back({{"name", r.name},
                             {"pass", r.pass},
                             {"value", r.value},
                             {"threshold", r.threshold},
                             {"detail", r.detail},
                             {"seconds", r.seconds}});
    all = all && r.pass;
  }
  out["pass"] = all;
  return out.dump(2);
}

}  // namespace adlab
