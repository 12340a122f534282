#include "adlab/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "adlab/operators.hpp"

namespace adlab {

namespace {

constexpr double kResidualTol = 1e-6;
constexpr double kBoundaryLimit = 1e-6;
constexpr double kTailSlack = 1.05;
constexpr double kGrowthRatio = 2.0;
constexpr double kResolutionShare = 0.05;

double power_sum(const DensityField& field, double q) {
  double s = 0.0;
  for (double v : field.values())
    if (v > 0.0) s += std::pow(v, q);
  return s * field.grid().cell_volume();
}

// Upper bound on int rho^p (A-2+n)(|x|^{A-2} * rho) split as
// {coefficient of int rho^{p+1}, coefficient of int rho^p}.
std::pair<double, double> attraction_bound(const PotentialParams& P, double M0) {
  const double n = P.n;
  if (std::abs(P.A - 2.0) <= kExponentTol) return {0.0, n * M0};
  if (std::abs(P.A - (2.0 - n)) <= kExponentTol) return {unit_sphere_area(P.n), 0.0};
  // |x|^{A-2} <= |x|^{A-2} 1_{|x|<1} + 1 and Young on the local part.
  return {unit_sphere_area(P.n), (P.A - 2.0 + n) * M0};
}

std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

double Residual::tolerance() const { return kResidualTol * (std::abs(lhs) + std::abs(rhs) + 1.0); }

bool residual_supported(RegimeTag tag) { return tag != RegimeTag::Unclassified; }

Residual differential_inequality_residual(const DensityField& field, std::span<const double> rate,
                                          const PotentialParams& params, double m, double p) {
  if (!(p >= 1.0)) throw std::domain_error("differential_inequality_residual: requires p >= 1");
  const Grid& g = field.grid();
  if (rate.size() != g.size()) throw std::invalid_argument("differential_inequality_residual: rate size");
  const Regime regime = classify(params, m);
  if (!residual_supported(regime.tag))
    throw std::invalid_argument("differential_inequality_residual: no residual form for regime " +
                                to_string(regime.tag));

  Residual r;
  double lhs = 0.0;
  // v^0 = 1 on empty cells too: mass flowing into them counts at p = 1.
  for (std::size_t i = 0; i < rate.size(); ++i) {
    if (p == 1.0) lhs += rate[i];
    else if (field[i] > 0.0) lhs += std::pow(field[i], p - 1.0) * rate[i];
  }
  r.lhs = p * lhs * g.cell_volume();

  const double M0 = mass(field);
  const double c1 = m * p * (p - 1.0) / ((m + p - 1.0) * (m + p - 1.0));
  const double diss = p > 1.0 ? dissipation_functional(field, m, p) : 0.0;
  const double n = params.n;
  double rhs = -2.0 * c1 * diss;

  switch (regime.tag) {
    case RegimeTag::WeakSingularInterior: {
      const double r0 = repulsion_zero_r0(params);
      rhs += (p - 1.0) * (params.A - 2.0 + n) * std::pow(r0, params.A - 2.0) * M0 * power_sum(field, p);
      break;
    }
    case RegimeTag::WeakSingularNewtonianB: {
      // The local repulsion -lambda n alpha_n rho offsets the local attraction bound.
      auto [c_local, c_p] = attraction_bound(params, M0);
      c_local = std::max(0.0, c_local - params.lambda * unit_sphere_area(params.n));
      rhs += (p - 1.0) * (c_local * power_sum(field, p + 1.0) + c_p * power_sum(field, p));
      break;
    }
    case RegimeTag::StrongSingular: {
      const auto [c_local, c_p] = attraction_bound(params, M0);
      rhs += (p - 1.0) * (c_local * power_sum(field, p + 1.0) + c_p * power_sum(field, p));
      // lambda C(n,(n+B)/2)/B * 4p(p-1)/(p+1)^2 * ||(-Delta)^{(2-n-B)/4} rho^{(p+1)/2}||^2 <= 0
      const double s = 0.25 * (2.0 - n - params.B);
      std::vector<double> w(g.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(field[i], 0.5 * (p + 1.0));
      const auto padded = zero_pad(DensityField(g, std::move(w)));
      const Grid pg = padded_grid(g);
      const auto hw = periodic_fractional_laplacian(padded, pg, s);
      double energy = 0.0;
      for (double x : hw) energy += x * x;
      energy *= pg.cell_volume();
      const double coeff = params.lambda * riesz_constant(params.n, 0.5 * (n + params.B)) / params.B;
      rhs += coeff * 4.0 * p * (p - 1.0) / ((p + 1.0) * (p + 1.0)) * energy;
      break;
    }
    case RegimeTag::AttractiveDiffusionDominated:
    case RegimeTag::AttractiveNewtonian:
    case RegimeTag::FairCompetition: {
      const auto [c_local, c_p] = attraction_bound(params, M0);
      rhs += (p - 1.0) * (c_local * power_sum(field, p + 1.0) + c_p * power_sum(field, p));
      break;
    }
    case RegimeTag::Unclassified: break;
  }
  r.rhs = rhs;
  return r;
}

void NormSeries::push(const StepReport& r, const std::vector<Residual>* residuals) {
  if (!times.empty() && !(r.t > times.back()))
    throw std::invalid_argument("NormSeries: times must increase strictly");
  if (r.lp.size() != ps.size() || r.dissipation.size() != ps.size())
    throw std::invalid_argument("NormSeries: report does not match the monitored exponents");
  times.push_back(r.t);
  dt.push_back(r.dt);
  mass.push_back(r.mass);
  linf.push_back(r.linf);
  lp.resize(ps.size());
  dissipation.resize(ps.size());
  for (std::size_t k = 0; k < ps.size(); ++k) {
    lp[k].push_back(r.lp[k]);
    dissipation[k].push_back(r.dissipation[k]);
  }
  if (residuals) {
    residual.resize(ps.size());
    residual_tol.resize(ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k) {
      residual[k].push_back((*residuals)[k].value());
      residual_tol[k].push_back((*residuals)[k].tolerance());
    }
  }
  boundary_fraction.push_back(r.boundary_fraction);
}

std::string to_string(VerdictTag tag) {
  switch (tag) {
    case VerdictTag::Bounded: return "Bounded";
    case VerdictTag::Growing: return "Growing";
    case VerdictTag::BlowupSuspected: return "BlowupSuspected";
    case VerdictTag::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict boundedness_verdict(const NormSeries& s) {
  if (s.size() == 0) throw std::invalid_argument("boundedness_verdict: empty series");
  Verdict v;
  v.peak_linf = *std::max_element(s.linf.begin(), s.linf.end());
  v.resolution_flag = v.peak_linf * std::pow(s.h, s.dim) > kResolutionShare * s.mass.front();
  const double T = s.T_end;

  double tail = 0.0, middle = 0.0;
  bool has_tail = false, has_middle = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double t = s.times[i];
    if (t >= 0.75 * T) {
      tail = std::max(tail, s.linf[i]);
      has_tail = true;
    } else if (t >= 0.25 * T) {
      middle = std::max(middle, s.linf[i]);
      has_middle = true;
    }
  }
  v.tail_to_peak = has_tail && has_middle && middle > 0.0 ? tail / middle : 0.0;

  // L^inf at the sample closest to T/2.
  std::size_t half = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (std::abs(s.times[i] - 0.5 * T) < std::abs(s.times[half] - 0.5 * T)) half = i;
  v.growth_factor = s.linf[half] > 0.0 ? s.linf.back() / s.linf[half] : 0.0;

  if (s.termination != Termination::Completed) {
    v.growth_factor = s.linf.front() > 0.0 ? s.linf.back() / s.linf.front() : 0.0;
    v.tag = VerdictTag::BlowupSuspected;
    v.reason = "solver stopped on " + to_string(s.termination);
    return v;
  }
  const double worst = *std::max_element(s.boundary_fraction.begin(), s.boundary_fraction.end());
  if (worst >= kBoundaryLimit) {
    v.tag = VerdictTag::Inconclusive;
    v.reason = "boundary mass fraction reached " + num(worst);
    return v;
  }
  if (has_tail && has_middle && tail <= kTailSlack * middle) {
    v.tag = VerdictTag::Bounded;
    v.reason = "late maximum within 5% of the middle-window maximum";
    return v;
  }
  if (v.growth_factor >= kGrowthRatio) {
    v.tag = VerdictTag::Growing;
    v.reason = "L^inf at least doubled over the second half";
    return v;
  }
  v.tag = VerdictTag::Inconclusive;
  v.reason = "no rule fired";
  return v;
}

std::vector<double> yk_trajectory(const NormSeries& s, EstimateCase c, int n, double A, int k_max) {
  std::vector<double> out;
  for (int k = 0; k <= k_max; ++k) {
    const double pk = pk_sequence(c, k, n, A);
    auto it = std::find_if(s.ps.begin(), s.ps.end(),
                           [&](double p) { return std::abs(p - pk) <= 1e-9 * pk; });
    if (it == s.ps.end())
      throw std::invalid_argument("yk_trajectory: p_" + std::to_string(k) + " = " + format_p(pk) +
                                  " is not monitored");
    const auto& col = s.lp[static_cast<std::size_t>(it - s.ps.begin())];
    double sup = 0.0;
    for (double norm : col) sup = std::max(sup, std::pow(norm, pk));
    out.push_back(sup);
  }
  return out;
}

Trajectory simulate(const DensityField& initial, const SimConfig& config, const PotentialParams& params,
                    const Observer& extra) {
  Trajectory traj;
  traj.regime = classify(params, config.m);
  traj.series.ps = config.monitored_p;
  traj.series.T_end = config.T_end;
  traj.series.h = initial.grid().spacing();
  traj.series.dim = initial.grid().dim();
  const bool with_residual = config.interaction && residual_supported(traj.regime.tag);
  Observer obs = [&](const DensityField& f, const StepReport& rep, const Rate& rate) {
    if (with_residual) {
      std::vector<Residual> res;
      const std::vector<double> rate_full = rate.values(f.grid());
      for (double p : config.monitored_p)
        res.push_back(differential_inequality_residual(f, rate_full, params, config.m, p));
      traj.series.push(rep, &res);
    } else {
      traj.series.push(rep);
    }
    if (extra) extra(f, rep, rate);
  };
  traj.run = run(initial, config, params, obs);
  traj.series.termination = traj.run.termination;
  return traj;
}

void write_series_csv(std::ostream& os, const NormSeries& s) {
  os << "t,dt,mass,linf";
  for (double p : s.ps) os << ",lp_" << format_p(p);
  for (double p : s.ps) os << ",diss_" << format_p(p);
  const bool resid = !s.residual.empty();
  if (resid)
    for (double p : s.ps) os << ",resid_" << format_p(p);
  os << ",boundary_frac\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << num(s.times[i]) << ',' << num(s.dt[i]) << ',' << num(s.mass[i]) << ',' << num(s.linf[i]);
    for (const auto& col : s.lp) os << ',' << num(col[i]);
    for (const auto& col : s.dissipation) os << ',' << num(col[i]);
    if (resid)
      for (const auto& col : s.residual) os << ',' << num(col[i]);
    os << ',' << num(s.boundary_fraction[i]) << '\n';
  }
}

std::string verdict_json(const Verdict& v, const Trajectory& traj) {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(v.tag);
  j["reason"] = v.reason;
  j["regime"] = to_string(traj.regime.tag);
  j["termination"] = to_string(traj.run.termination);
  j["steps"] = traj.run.steps;
  j["evidence"] = {{"peak_linf", v.peak_linf},
                   {"tail_to_peak", v.tail_to_peak},
                   {"growth_factor", v.growth_factor},
                   {"resolution_flag", v.resolution_flag}};
  const auto& s = traj.series;
  if (s.size() > 0) j["mass_drift"] = mass_drift(s);
  j["min_density"] = traj.run.min_density;
  if (!s.residual.empty()) j["residuals_pass"] = residuals_pass(s);
  return j.dump(2);
}

double mass_drift(const NormSeries& s) {
  if (s.size() == 0) return 0.0;
  const double m0 = s.mass.front();
  double drift = 0.0;
  for (double m : s.mass) drift = std::max(drift, std::abs(m - m0) / m0);
  return drift;
}

bool residuals_pass(const NormSeries& s) {
  for (std::size_t k = 0; k < s.residual.size(); ++k)
    for (std::size_t i = 0; i < s.residual[k].size(); ++i)
      if (!(s.residual[k][i] <= s.residual_tol[k][i])) return false;
  return true;
}

}  // namespace adlab
