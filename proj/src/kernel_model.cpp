#include "adlab/kernel_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace adlab {

namespace {

bool near(double a, double b) { return std::abs(a - b) <= kExponentTol; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// |x|^e / e with the log convention at e = 0.
double power_over_exponent(double r, double e) {
  if (e == 0.0) return std::log(r);
  return std::pow(r, e) / e;
}

}  // namespace

void PotentialParams::validate() const {
  if (n < 2) throw ParameterError("n: dimension must satisfy n >= 2");
  if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(lambda))
    throw ParameterError("A, B, lambda must be finite");
  if (lambda < 0.0) throw ParameterError("lambda: must satisfy lambda >= 0");
  if (A > 2.0) throw ParameterError("A: must satisfy A <= 2");
  if (A <= -n) throw ParameterError("A: must satisfy A > -n");
  if (lambda > 0.0) {
    if (B >= A) throw ParameterError("B: ordering A > B violated (lambda > 0)");
    if (B <= -n) throw ParameterError("B: must satisfy B > -n");
  }
}

std::string to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::WeakSingularInterior: return "WeakSingularInterior";
    case RegimeTag::WeakSingularNewtonianB: return "WeakSingularNewtonianB";
    case RegimeTag::StrongSingular: return "StrongSingular";
    case RegimeTag::AttractiveDiffusionDominated: return "AttractiveDiffusionDominated";
    case RegimeTag::AttractiveNewtonian: return "AttractiveNewtonian";
    case RegimeTag::FairCompetition: return "FairCompetition";
    case RegimeTag::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

Regime classify(const PotentialParams& params, double m) {
  params.validate();
  if (!(m > 0.0) || !std::isfinite(m)) throw ParameterError("m: must satisfy m > 0");

  const double n = params.n;
  const double A = params.A;
  const double B = params.B;
  const double newtonian = 2.0 - n;
  const bool m_standing = m > 1.0 - 2.0 / n;
  const double fair_m = 1.0 - A / n;

  Regime out;
  auto fire = [&](RegimeTag tag, std::vector<std::string> w) {
    out.tag = tag;
    out.witnesses = std::move(w);
    return out;
  };
  const std::string standing = "m > 1-2/n (" + fmt(m) + " > " + fmt(1.0 - 2.0 / n) + ")";

  if (params.repulsive()) {
    if (!m_standing) return out;
    if (B > newtonian + kExponentTol && B < A && A <= 2.0)
      return fire(RegimeTag::WeakSingularInterior, {"2-n < B < A <= 2", standing});
    if (near(B, newtonian) && B < A && A <= 2.0)
      return fire(RegimeTag::WeakSingularNewtonianB, {"B = 2-n < A <= 2", standing});
    if (B > -n && B < newtonian - kExponentTol && newtonian <= A + kExponentTol && A <= 2.0)
      return fire(RegimeTag::StrongSingular, {"-n < B < 2-n <= A <= 2", standing});
    return out;
  }

  // lambda = 0. The fair-competition equality is tested before the Newtonian
  // case: for A = 2-n the Newtonian critical exponent is exactly 1 - A/n.
  if (near(m, fair_m))
    return fire(RegimeTag::FairCompetition, {"lambda = 0", "m = 1-A/n (" + fmt(fair_m) + ")"});
  if (near(A, newtonian) && m_standing && m > fair_m)
    return fire(RegimeTag::AttractiveNewtonian,
                {"lambda = 0", "A = 2-n", standing, "m > 1-A/n (" + fmt(fair_m) + ")"});
  if (A > newtonian + kExponentTol && A <= 2.0 && m > fair_m)
    return fire(RegimeTag::AttractiveDiffusionDominated,
                {"lambda = 0", "2-n < A <= 2", "m > 1-A/n (" + fmt(fair_m) + ")"});
  return out;
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

double potential_value(const PotentialParams& params, double r) {
  if (!(r > 0.0)) throw std::domain_error("potential_value: r must be > 0 (singular point)");
  double u = power_over_exponent(r, params.A);
  if (params.lambda > 0.0) u -= params.lambda * power_over_exponent(r, params.B);
  return u;
}

namespace {
void require_weak_interior(const PotentialParams& p, const char* who) {
  p.validate();
  const double lo = 2.0 - p.n;
  if (!(p.lambda > 0.0) || !(p.B > lo && p.B < p.A && p.A <= 2.0))
    throw ParameterError(std::string(who) + ": requires lambda > 0 and 2-n < B < A <= 2");
}
}  // namespace

double laplacian_mass_f(const PotentialParams& params, double r) {
  require_weak_interior(params, "laplacian_mass_f");
  if (!(r > 0.0)) throw std::domain_error("laplacian_mass_f: r must be > 0");
  const double n = params.n;
  return (params.A - 2.0 + n) * std::pow(r, params.A - 2.0) -
         params.lambda * (params.B - 2.0 + n) * std::pow(r, params.B - 2.0);
}

double repulsion_zero_r0(const PotentialParams& params) {
  require_weak_interior(params, "repulsion_zero_r0");
  const double n = params.n;
  const double ratio = params.lambda * (params.B - 2.0 + n) / (params.A - 2.0 + n);
  return std::pow(ratio, 1.0 / (params.A - params.B));
}

double riesz_constant(int n, double s) {
  if (!(s > 0.0) || !(n - 2.0 * s > 0.0))
    throw std::domain_error("riesz_constant: requires s > 0 and n - 2s > 0");
  return std::tgamma(0.5 * n - s) /
         (std::pow(4.0, s) * std::pow(std::numbers::pi, 0.5 * n) * std::tgamma(s));
}

LaplacianForm interaction_laplacian_form(const PotentialParams& params) {
  params.validate();
  const double n = params.n;
  const double newtonian = 2.0 - n;
  const double local_coeff = n * unit_ball_volume(params.n);
  LaplacianForm form;

  // Attractive A-term. Below the Newtonian exponent |x|^A/A * rho is
  // (1/A) C(n,(A+n)/2) (-Delta)^{-(A+n)/2} rho.
  if (near(params.A, newtonian)) {
    form.local.push_back({local_coeff});
  } else if (params.A > newtonian) {
    form.convolution.push_back({params.A - 2.0 + n, params.A - 2.0});
  } else {
    const double s = 0.5 * (params.A + n);
    form.fractional.push_back({-riesz_constant(params.n, s) / params.A, 1.0 - s});
  }

  if (params.lambda > 0.0) {
    const double lam = params.lambda;
    if (near(params.B, newtonian)) {
      form.local.push_back({-lam * local_coeff});
    } else if (params.B > newtonian) {
      form.convolution.push_back({-lam * (params.B - 2.0 + n), params.B - 2.0});
    } else {
      const double s = 0.5 * (params.B + n);
      form.fractional.push_back({lam * riesz_constant(params.n, s) / params.B, 1.0 - s});
    }
  }
  return form;
}

}  // namespace adlab
