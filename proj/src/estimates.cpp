#include "adlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "adlab/kernel_model.hpp"

namespace adlab {

namespace {

constexpr double kAgreeTol = 1e-12;

ValidityFlag less(const std::string& name, double lhs, double rhs) {
  return {name, lhs < rhs, rhs - lhs};
}

ValidityFlag less_equal(const std::string& name, double lhs, double rhs) {
  return {name, lhs <= rhs + kAgreeTol, rhs - lhs};
}

ValidityFlag agree(const std::string& name, double a, double b) {
  const double rel = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
  return {name, rel <= kAgreeTol, kAgreeTol - rel};
}

void finish(IterationConstants& c, bool strict) {
  if (!strict) return;
  for (const auto& f : c.flags)
    if (!f.holds) throw ValidityError(f.name, c);
}

void require_pair(double m, int n, double p_k, double p_km1, const char* who) {
  if (n < 2) throw std::domain_error(std::string(who) + ": requires n >= 2");
  if (!(m > 1.0 - 2.0 / n)) throw std::domain_error(std::string(who) + ": requires m > 1 - 2/n");
  if (!(p_km1 >= 1.0 && p_k > p_km1))
    throw std::domain_error(std::string(who) + ": requires p_k > p_km1 >= 1");
}

// (n-2) / (n (m + p - 1)), the reciprocal Sobolev exponent of v^{(m+p-1)/2}.
double sobolev_reciprocal(double m, int n, double p) { return (n - 2.0) / (n * (m + p - 1.0)); }

}  // namespace

EstimateCase parse_estimate_case(const std::string& name) {
  if (name == "weak") return EstimateCase::Weak;
  if (name == "attractive") return EstimateCase::Attractive;
  if (name == "strong") return EstimateCase::Strong;
  throw std::invalid_argument("unknown case '" + name + "' (weak, attractive, strong)");
}

std::string to_string(EstimateCase c) {
  switch (c) {
    case EstimateCase::Weak: return "weak";
    case EstimateCase::Attractive: return "attractive";
    case EstimateCase::Strong: return "strong";
  }
  return "weak";
}

bool IterationConstants::valid() const {
  return std::all_of(flags.begin(), flags.end(), [](const ValidityFlag& f) { return f.holds; });
}

double pk_sequence(EstimateCase c, int k, int n, double A) {
  if (k < 0) throw std::domain_error("pk_sequence: requires k >= 0");
  const double two_k = std::ldexp(1.0, k);
  switch (c) {
    case EstimateCase::Weak: return two_k + 1.0;
    case EstimateCase::Attractive:
      if (A >= 2.0) return two_k + 1.0;
      return two_k + n / (2.0 - A) + n;
    case EstimateCase::Strong: return two_k + n;
  }
  return two_k + 1.0;
}

IterationConstants weak_constants(double m, int n, double p_k, double p_km1, bool strict) {
  require_pair(m, n, p_k, p_km1, "weak_constants");
  IterationConstants c;
  c.which = EstimateCase::Weak;
  c.p_k = p_k;
  c.p_km1 = p_km1;
  c.formal = n == 2;
  const double sob = sobolev_reciprocal(m, n, p_k);
  const double denom = 1.0 / p_km1 - sob;
  c.theta2 = (1.0 / p_k - sob) / denom;
  const double young = (1.0 - c.theta2) * p_k / (m + p_k - 1.0);
  c.ell2 = (m + p_k - 1.0) / (m + p_k - 1.0 - (1.0 - c.theta2) * p_k);
  c.ell1 = c.ell2 / (c.ell2 - 1.0);
  c.eta = c.ell2 * p_k * c.theta2 / p_km1;
  c.eta_closed = (m - 1.0 + 2.0 * p_k / n) / (m - 1.0 + 2.0 * p_km1 / n);
  c.eta1 = c.eta;
  c.flags = {
      less("0 < theta2", 0.0, c.theta2),
      less("theta2 < 1", c.theta2, 1.0),
      less("(1-theta2) p_k/(m+p_k-1) < 1", young, 1.0),
      less("1 < ell2", 1.0, c.ell2),
      less("ell2 < n+1", c.ell2, n + 1.0),
      less("0 < eta", 0.0, c.eta),
      less("eta < 2", c.eta, 2.0),
      agree("eta closed form", c.eta, c.eta_closed),
  };
  finish(c, strict);
  return c;
}

IterationConstants attractive_constants(double m, int n, double A, double p_k, double p_km1,
                                        bool strict) {
  if (!(A > 2.0 - n && A < 2.0)) throw std::domain_error("attractive_constants: requires 2-n < A < 2");
  if (!(m > 1.0 - A / n)) throw std::domain_error("attractive_constants: requires m > 1 - A/n");
  IterationConstants c = weak_constants(m, n, p_k, p_km1, false);
  c.which = EstimateCase::Attractive;
  c.flags.clear();
  c.theta = hls_theta(A, n, p_k);
  const double sob = sobolev_reciprocal(m, n, p_k);
  c.theta1 = (1.0 / (p_k + 1.0) - sob) / (1.0 / p_km1 - sob);
  const double young = (1.0 - c.theta1) * (p_k + c.theta) / (m + p_k - 1.0);
  c.nu2 = (m + p_k - 1.0) / ((m + p_k - 1.0) - (1.0 - c.theta1) * (p_k + c.theta));
  c.eta2 = c.nu2 * (p_k + c.theta) * c.theta1 / p_km1;
  c.flags = {
      less("0 < theta", 0.0, c.theta),
      less_equal("theta <= 1", c.theta, 1.0),
      less("(1-theta1)(p_k+theta)/(m+p_k-1) < 1", young, 1.0),
      less("0 < eta1", 0.0, c.eta1),
      less_equal("eta1 <= 2", c.eta1, 2.0),
      less("0 < eta2", 0.0, c.eta2),
      less_equal("eta2 <= 2", c.eta2, 2.0),
      less("1 < nu2", 1.0, c.nu2),
      less_equal("nu2 <= n+1", c.nu2, n + 1.0),
  };
  finish(c, strict);
  return c;
}

IterationConstants strong_constants(double m, int n, double B, double p_k, double p_km1,
                                    bool strict) {
  if (!(B > -n && B < 2.0 - n)) throw std::domain_error("strong_constants: requires -n < B < 2-n");
  IterationConstants c = weak_constants(m, n, p_k, p_km1, false);
  c.which = EstimateCase::Strong;
  c.flags.clear();
  const double frac = (2.0 * n - 2.0 + B) / (n * (p_k + 1.0));
  c.theta3 = (1.0 / (p_k + 1.0) - frac) / (1.0 / p_km1 - frac);
  c.q2 = 1.0 / (1.0 - c.theta3);
  c.q1 = 1.0 / c.theta3;
  const double q1_closed = (n * (p_k + 1.0) - (2.0 * n - 2.0 + B) * p_km1) / ((2.0 - B - n) * p_km1);
  const double q1_cap = n / (2.0 - n - B) + 1.0;
  c.nu2 = std::max(c.q1, c.ell2);
  c.eta2 = (p_k + 1.0) / p_km1 * c.theta3 * c.q1;
  c.flags = {
      less("0 < theta3", 0.0, c.theta3),
      less("theta3 < 1", c.theta3, 1.0),
      agree("q1 closed form", c.q1, q1_closed),
      less("q1 < n/(2-n-B)+1", c.q1, q1_cap),
      less("ell2 < n+1", c.ell2, n + 1.0),
      less("1 < nu2", 1.0, c.nu2),
      less_equal("nu2 <= max{n+1, n/(2-n-B)+1}", c.nu2, std::max(n + 1.0, q1_cap)),
      less("0 < eta1", 0.0, c.eta1),
      less_equal("eta1 <= 2", c.eta1, 2.0),
      less_equal("eta2 <= 2", c.eta2, 2.0),
  };
  finish(c, strict);
  return c;
}

std::vector<IterationConstants> constants_table(EstimateCase which, double m, int n, double A,
                                                double B, int k_max, bool strict) {
  std::vector<IterationConstants> out;
  for (int k = 1; k <= k_max; ++k) {
    const double pk = pk_sequence(which, k, n, A);
    const double pkm1 = pk_sequence(which, k - 1, n, A);
    IterationConstants c;
    switch (which) {
      case EstimateCase::Weak: c = weak_constants(m, n, pk, pkm1, strict); break;
      case EstimateCase::Attractive:
        c = A >= 2.0 ? weak_constants(m, n, pk, pkm1, strict)
                     : attractive_constants(m, n, A, pk, pkm1, strict);
        break;
      case EstimateCase::Strong: c = strong_constants(m, n, B, pk, pkm1, strict); break;
    }
    c.k = k;
    out.push_back(std::move(c));
  }
  return out;
}

Theta1 step1_theta1(double m, int n, double p) {
  if (!(p > 1.0)) throw std::domain_error("step1_theta1: requires p > 1");
  if (!(m > 1.0 - 2.0 / n)) throw std::domain_error("step1_theta1: requires m > 1 - 2/n");
  const double q = (m + p - 1.0) * n;
  const double one_minus = (p - 1.0) * q / (p * (q - n + 2.0));
  Theta1 t{1.0 - one_minus, p * one_minus / (m + p - 1.0)};
  if (!(t.young_exponent < 1.0))
    throw std::domain_error("step1_theta1: Young exponent p(1-theta1)/(m+p-1) >= 1");
  return t;
}

double hls_theta(double A, int n, double p) {
  if (!(A > 2.0 - n && A < 2.0)) throw std::domain_error("hls_theta: requires 2-n < A < 2");
  const double threshold = std::max(1.0, (A - 2.0 + n) / (2.0 - A));
  if (!(p > threshold)) throw std::domain_error("hls_theta: requires p > max{1, (A-2+n)/(2-A)}");
  return (-n + (2.0 - A) * (p + 1.0)) / (n * p);
}

double hls_s(double A, int n, double p) {
  return n * (p + 1.0) / ((n - 2.0 + A) * (p + 1.0) + n);
}

double hls_constant_bound(int n, double A, double r, double s) {
  if (!(A > 2.0 - n && A < 2.0))
    throw std::domain_error("hls_constant_bound: requires 2-n < A < 2 (0 < 2-A < n)");
  if (!(r > 1.0 && s > 1.0)) throw std::domain_error("hls_constant_bound: requires r, s > 1");
  const double beta = (2.0 - A) / n;
  if (std::abs(1.0 / r + beta + 1.0 / s - 2.0) > 1e-12)
    throw std::domain_error("hls_constant_bound: 1/r + (2-A)/n + 1/s must equal 2");
  const double lead = n / (n - 2.0 + A) * std::pow(unit_sphere_area(n) / n, beta) / (s * r);
  return lead * (std::pow(beta / (1.0 - 1.0 / s), beta) + std::pow(beta / (1.0 - 1.0 / r), beta));
}

double hls_growth_constant(int n, double A, double p0) {
  // 1/(sr) <= 1, (beta (p+1))^beta <= p+1 and the s-term decreases in p.
  const double beta = (2.0 - A) / n;
  hls_theta(A, n, p0);
  const double x_s = std::pow(beta / (beta - 1.0 / (p0 + 1.0)), beta);
  return n / (n - 2.0 + A) * std::pow(unit_sphere_area(n) / n, beta) * (x_s + 1.0);
}

double fractional_sobolev_constant(int n, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("fractional_sobolev_constant: requires 0 < s < 1");
  if (!(n > 2.0 * s)) throw std::domain_error("fractional_sobolev_constant: requires n > 2s");
  const double lg = std::lgamma(0.5 * (n - 2.0 * s)) - std::lgamma(0.5 * (n + 2.0 * s)) +
                    (2.0 * s / n) * (std::lgamma(static_cast<double>(n)) - std::lgamma(0.5 * n));
  return std::pow(2.0, -2.0 * s) * std::pow(std::numbers::pi, -s) * std::exp(lg);
}

double sobolev_constant(int n) {
  if (n < 3) throw std::domain_error("sobolev_constant: requires n >= 3 (no n = 2 embedding)");
  const double ratio = std::exp(std::lgamma(0.5 * n) - std::lgamma(static_cast<double>(n)));
  return std::numbers::pi * n * (n - 2.0) * std::pow(ratio, 2.0 / n);
}

double dissipation_share(double m) {
  if (!(m > 0.0)) throw std::domain_error("dissipation_share: requires m > 0");
  // p(p-1)/(m+p-1)^2 increases in p when m >= 1/2 and tends to 1.
  const double at_two = 4.0 * m / ((m + 1.0) * (m + 1.0));
  return 0.5 * std::min(at_two, 2.0 * m);
}

std::vector<double> weak_ctilde_sequence(double m, int n, double forcing, int k_max) {
  if (!(forcing > 0.0)) throw std::domain_error("weak_ctilde_sequence: requires forcing > 0");
  const double sn = sobolev_constant(n);
  const double sigma1 = dissipation_share(m);
  std::vector<double> out;
  for (int k = 1; k <= k_max; ++k) {
    const double pk = pk_sequence(EstimateCase::Weak, k, n, 2.0);
    const double pkm1 = pk_sequence(EstimateCase::Weak, k - 1, n, 2.0);
    const auto c = weak_constants(m, n, pk, pkm1, false);
    const double c_sigma = std::pow(sigma1 * c.ell1, -c.ell2 / c.ell1) / c.ell2;
    const double expo = c.ell2 * pk * (1.0 - c.theta2) / (m + pk - 1.0);
    out.push_back(c_sigma * (1.0 + std::pow(forcing, c.ell2)) * std::pow(sn, -expo));
  }
  return out;
}

YkReplay yk_bound_replay(double c_tilde, int n, double D, double y0_sup, int k_max) {
  if (!(c_tilde > 1.0)) throw std::domain_error("yk_bound_replay: requires C~ > 1");
  if (!(D >= 1.0)) throw std::domain_error("yk_bound_replay: requires D >= 1");
  if (!(y0_sup > 0.0)) throw std::domain_error("yk_bound_replay: requires y0 > 0");
  if (k_max < 0) throw std::domain_error("yk_bound_replay: requires k_max >= 0");
  const double ln2 = std::numbers::ln2;
  const double log_ct = std::log(c_tilde);
  const double log_d = std::log(D);
  const double log_top = std::max(std::log(y0_sup), log_d);

  YkReplay r;
  double log_y = std::log(y0_sup);
  for (int k = 0; k <= k_max; ++k) {
    const double two_k = std::ldexp(1.0, k);
    if (k > 0) {
      const double log_2ak = ln2 + log_ct + (n + 1.0) * ln2 + (n + 1.0) * k * ln2;
      log_y = log_2ak + std::max(2.0 * log_y, two_k * log_d);
    }
    // The product form holds from k = 1; y_0 is the initial value itself.
    const double closed = k == 0 ? std::log(y0_sup)
                                 : (two_k - 1.0) * ((n + 2.0) * ln2 + log_ct) +
                                       (2.0 * two_k - k - 2.0) * (n + 1.0) * ln2 + two_k * log_top;
    r.log_brute.push_back(log_y);
    r.log_closed.push_back(closed);
    r.log_root.push_back(log_y / (two_k + 1.0));
  }
  r.log_root_bound = (n + 2.0) * ln2 + 2.0 * (n + 1.0) * ln2 + log_ct + log_top;
  return r;
}

InequalityConstants inequality_constants(EstimateCase which, double m, int n, double A, double B,
                                         double mass0, double linf0, double c_tilde, double D) {
  InequalityConstants ic;
  if (n >= 3) ic.sobolev = sobolev_constant(n);
  ic.n_alpha_n = unit_sphere_area(n);
  ic.c1 = dissipation_share(m);
  ic.c_tilde = c_tilde;
  ic.d0 = std::max({1.0, mass0, linf0});
  ic.d = std::max(D, ic.d0);
  if (which == EstimateCase::Strong && B > -n && B < 2.0 - n) {
    ic.fractional_sobolev = fractional_sobolev_constant(n, 0.5 * (2.0 - n - B));
    ic.riesz = riesz_constant(n, 0.5 * (n + B));
  }
  if (which == EstimateCase::Attractive && A > 2.0 - n && A < 2.0) {
    const double p1 = pk_sequence(EstimateCase::Attractive, 1, n, A);
    ic.hls_bound = hls_constant_bound(n, A, (p1 + 1.0) / p1, hls_s(A, n, p1));
  }
  return ic;
}

}  // namespace adlab
