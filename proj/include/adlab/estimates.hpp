// Exponents and constants of the L^p bootstrap: p_k sequences, interpolation
// exponents, HLS and Sobolev constants, and the y_k recursion.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace adlab {

enum class EstimateCase { Weak, Attractive, Strong };

EstimateCase parse_estimate_case(const std::string& name);
std::string to_string(EstimateCase c);

/// One named hypothesis. margin > 0 iff the strict inequality holds.
struct ValidityFlag {
  std::string name;
  bool holds = false;
  double margin = 0.0;
};

struct IterationConstants {
  EstimateCase which = EstimateCase::Weak;
  int k = 0;
  double p_k = 0.0;
  double p_km1 = 0.0;
  double theta = 0.0;   // attractive: HLS interpolation exponent
  double theta1 = 0.0;  // attractive: exponent of the p_k + 1 interpolation
  double theta2 = 0.0;
  double theta3 = 0.0;
  double ell1 = 0.0;
  double ell2 = 0.0;
  double eta = 0.0;   // weak case; equals eta1 elsewhere
  double eta_closed = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double nu2 = 0.0;
  bool formal = false;  // n = 2: Sobolev exponent taken in its n - 2 = 0 limit
  std::vector<ValidityFlag> flags;

  bool valid() const;
};

/// Raised when a hypothesis of the chain fails; carries the offending table.
class ValidityError : public std::runtime_error {
 public:
  ValidityError(const std::string& flag, IterationConstants c)
      : std::runtime_error("validity check failed: " + flag), constants(std::move(c)) {}
  IterationConstants constants;
};

/// weak: 2^k + 1; attractive: 2^k + n/(2-A) + n (weak sequence when A = 2);
/// strong: 2^k + n.
double pk_sequence(EstimateCase c, int k, int n, double A);

/// theta2, ell2, eta (two ways). strict = true throws ValidityError on a failed flag.
IterationConstants weak_constants(double m, int n, double p_k, double p_km1, bool strict = true);

/// Adds theta, theta1, nu2, eta1, eta2 to the weak exponents at the same p_k.
IterationConstants attractive_constants(double m, int n, double A, double p_k, double p_km1,
                                        bool strict = true);

/// theta3, q1 (and its closed form), nu2 = max{q1, ell2}, eta2 = (p_k + 1)/p_km1.
IterationConstants strong_constants(double m, int n, double B, double p_k, double p_km1,
                                    bool strict = true);

/// Table for k = 1..k_max in the given case.
std::vector<IterationConstants> constants_table(EstimateCase c, double m, int n, double A, double B,
                                                int k_max, bool strict = false);

struct Theta1 {
  double theta1;
  double young_exponent;  // p (1 - theta1) / (m + p - 1), must be < 1
};
/// Throws std::domain_error when p <= 1 or the Young exponent is >= 1.
Theta1 step1_theta1(double m, int n, double p);

/// (-n + (2-A)(p+1)) / (n p). Requires 2-n < A < 2 and p > max{1, (A-2+n)/(2-A)}.
double hls_theta(double A, int n, double p);
/// Exponent s paired with r = (p+1)/p in the HLS step.
double hls_s(double A, int n, double p);

/// Upper bound on the HLS constant for the kernel |x|^{-(2-A)}. Requires
/// 2-n < A < 2, r, s > 1 and 1/r + (2-A)/n + 1/s = 2 within 1e-12.
double hls_constant_bound(int n, double A, double r, double s);
/// C(n, A; p0) with hls_constant_bound(n, A, (p+1)/p, hls_s(A,n,p)) <= C (p+1)
/// for every p >= p0 above the threshold of hls_theta.
double hls_growth_constant(int n, double A, double p0);

/// 2^{-2s} pi^{-s} Gamma((n-2s)/2) / Gamma((n+2s)/2) [Gamma(n)/Gamma(n/2)]^{2s/n}.
double fractional_sobolev_constant(int n, double s);

/// Sharp constant in S_n ||h||_{2n/(n-2)}^2 <= ||grad h||_2^2. Requires n >= 3.
double sobolev_constant(int n);

/// Fixed dissipation share C1 = (1/2) inf_{p >= 2} 2mp(p-1)/(m+p-1)^2.
double dissipation_share(double m);

/// C(sigma1)(1 + C^{ell2}) S_n^{-ell2 p_k (1-theta2)/(m+p_k-1)} for k = 1..k_max,
/// with sigma1 = dissipation_share(m) and C = forcing. Requires n >= 3.
std::vector<double> weak_ctilde_sequence(double m, int n, double forcing, int k_max);

struct YkReplay {
  std::vector<double> log_brute;   // log y_k, k = 0..k_max
  std::vector<double> log_closed;  // log of the product formula
  std::vector<double> log_root;    // log y_k / p_k with p_k = 2^k + 1
  double log_root_bound = 0.0;     // log(2^{n+2} 2^{2(n+1)} C~ max{y0, D})
};

/// Iterates y_k = 2 a_k max{y_{k-1}^2, D^{2^k}}, a_k = C~ 2^{n+1} 2^{(n+1)k},
/// in the log domain. Requires C~ > 1, D >= 1, y0 > 0.
YkReplay yk_bound_replay(double c_tilde, int n, double D, double y0_sup, int k_max);

struct InequalityConstants {
  double sobolev = 0.0;             // S_n; 0 when n = 2
  double fractional_sobolev = 0.0;  // S(n, s) at s = (2-n-B)/2; 0 outside the strong case
  double hls_bound = 0.0;           // at p = p_1 of the attractive sequence; 0 if not applicable
  double riesz = 0.0;               // C(n, (n+B)/2); 0 outside the strong case
  double n_alpha_n = 0.0;
  double c1 = 0.0;
  double c_tilde = 0.0;
  double d0 = 0.0;
  double d = 0.0;
};

/// Collects the constants for one parameter set and initial datum summary.
InequalityConstants inequality_constants(EstimateCase c, double m, int n, double A, double B,
                                         double mass0, double linf0, double c_tilde, double D);

}  // namespace adlab
