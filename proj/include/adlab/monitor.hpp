// Norm time series, L^p differential-inequality residuals and the
// boundedness verdict.
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "adlab/estimates.hpp"
#include "adlab/field.hpp"
#include "adlab/kernel_model.hpp"
#include "adlab/solver.hpp"

namespace adlab {

/// LHS = p sum v^{p-1} rate h^n against the regime's upper bound RHS.
struct Residual {
  double lhs = 0.0;
  double rhs = 0.0;

  double value() const { return lhs - rhs; }
  /// 1e-6 (|LHS| + |RHS| + 1).
  double tolerance() const;
  bool passes() const { return value() <= tolerance(); }
};

/// True when differential_inequality_residual has a form for this regime.
bool residual_supported(RegimeTag tag);

/// Throws std::domain_error for p < 1 and std::invalid_argument when the
/// regime has no residual form (Unclassified).
Residual differential_inequality_residual(const DensityField& field, std::span<const double> rate,
                                          const PotentialParams& params, double m, double p);

struct NormSeries {
  std::vector<double> ps;  // monitored exponents
  std::vector<double> times;
  std::vector<double> dt;
  std::vector<double> mass;
  std::vector<double> linf;
  std::vector<std::vector<double>> lp;           // [p index][sample]
  std::vector<std::vector<double>> dissipation;  // [p index][sample]
  std::vector<std::vector<double>> residual;     // [p index][sample]; empty if not evaluated
  std::vector<std::vector<double>> residual_tol; // matching tolerances
  std::vector<double> boundary_fraction;
  Termination termination = Termination::Completed;
  double T_end = 0.0;
  double h = 0.0;
  int dim = 2;

  std::size_t size() const { return times.size(); }
  /// Appends one report (and optionally its residuals).
  void push(const StepReport& r, const std::vector<Residual>* residuals = nullptr);
};

enum class VerdictTag { Bounded, Growing, BlowupSuspected, Inconclusive };
std::string to_string(VerdictTag tag);

struct Verdict {
  VerdictTag tag = VerdictTag::Inconclusive;
  double peak_linf = 0.0;
  double tail_to_peak = 0.0;   // max L^inf over the last 25% / max over the middle 50%
  double growth_factor = 0.0;  // L^inf(T) / L^inf(T/2), or final / initial on early stop
  bool resolution_flag = false;  // peak cell holds more than 5% of the mass
  std::string reason;
};

/// Decision rule, first match wins: terminated on cap or dt_min ->
/// BlowupSuspected; boundary fraction >= 1e-6 at any sample -> Inconclusive;
/// tail max <= 1.05 x middle max -> Bounded; L^inf(T) >= 2 L^inf(T/2) ->
/// Growing; otherwise Inconclusive. Throws on an empty series.
Verdict boundedness_verdict(const NormSeries& series);

/// sup_t ||rho||_{p_k}^{p_k} for k = 0..k_max. Throws when some p_k is not
/// among the monitored exponents.
std::vector<double> yk_trajectory(const NormSeries& series, EstimateCase c, int n, double A, int k_max);

struct Trajectory {
  RunResult run;
  NormSeries series;
  Regime regime;
};

/// Runs the solver and records norms, plus residuals at every output time
/// when the regime has a residual form and config.interaction is on.
Trajectory simulate(const DensityField& initial, const SimConfig& config, const PotentialParams& params,
                    const Observer& extra = {});

/// Header t,dt,mass,linf,lp_<p>...,diss_<p>...,[resid_<p>...,]boundary_frac;
/// 17 significant digits.
void write_series_csv(std::ostream& os, const NormSeries& series);
std::string verdict_json(const Verdict& v, const Trajectory& traj);

/// max_t |mass(t) - mass(0)| / mass(0) over the samples.
double mass_drift(const NormSeries& series);
/// True when every recorded residual is within its tolerance (or none recorded).
bool residuals_pass(const NormSeries& series);

}  // namespace adlab
