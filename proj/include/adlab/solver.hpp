// Explicit finite-volume integrator for rho_t = Delta rho^m + div(rho grad(U * rho)).
#pragma once

#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adlab/field.hpp"
#include "adlab/kernel_model.hpp"
#include "adlab/operators.hpp"

namespace adlab {

struct SimConfig {
  double m = 1.0;
  double T_end = 1.0;
  double cfl = 0.45;
  double dt_min = 1e-12;
  /// Run stops once L^inf reaches this multiple of the initial L^inf.
  double blowup_cap_factor = 1e6;
  double output_every = 0.1;
  /// Mollification of non-integrable kernels; negative selects h/2.
  double epsilon = -1.0;
  std::vector<double> monitored_p;
  /// false drops the interaction term (pure porous-medium diagnostics).
  bool interaction = true;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

enum class Termination { Completed, BlowupCap, DtMin };
std::string to_string(Termination t);

struct StepReport {
  double t = 0.0;
  double dt = 0.0;  // size of the step that produced this state; 0 at t = 0
  double mass = 0.0;
  double linf = 0.0;
  std::vector<double> lp;           // per monitored p
  std::vector<double> dissipation;  // per monitored p
  double max_speed = 0.0;
  double boundary_fraction = 0.0;
  bool cap_hit = false;
  bool dt_min_hit = false;
};

/// Raised when a step produces a density below -1e-14 L^inf. Carries the last
/// valid state.
class SchemeViolation : public std::runtime_error {
 public:
  SchemeViolation(const std::string& what, DensityField last, double t)
      : std::runtime_error(what), last_state(std::move(last)), time(t) {}
  DensityField last_state;
  double time;
};

/// Discrete right-hand side of the PDE at one state. Cells outside the
/// window have zero rate.
struct Rate {
  Window window;
  std::vector<double> local;    // per window cell, row-major
  double linf = 0.0;            // L^inf of the state
  double max_speed = 0.0;       // max face |u| over faces touching positive cells
  double max_diffusivity = 0.0; // max m v^{m-1} over positive cells

  /// Rate on the full grid.
  std::vector<double> values(const Grid& grid) const;
};

/// u = -grad(U * rho) at cell centers of the full grid.
VectorField advective_velocity(const DensityField& field, const KernelCache& cache);

Rate compute_rate(const DensityField& field, const SimConfig& config, const KernelCache& cache);

/// Fraction of the mass held within 4 cells of the box edge.
double boundary_mass_fraction(const DensityField& field);

struct StepResult {
  DensityField field;
  double dt = 0.0;
  double max_speed = 0.0;
};

/// One forward-Euler step, at most `dt_cap` long. Throws SchemeViolation.
StepResult step(const DensityField& field, const SimConfig& config, const KernelCache& cache,
                double dt_cap);

/// Called at every output time with the state, its report and its rate.
using Observer = std::function<void(const DensityField&, const StepReport&, const Rate&)>;

struct RunResult {
  DensityField final_state;
  Termination termination = Termination::Completed;
  std::vector<StepReport> reports;
  std::size_t steps = 0;
  double initial_linf = 0.0;
  double peak_linf = 0.0;
  double min_density = std::numeric_limits<double>::infinity();  // over all cells and steps
};

/// Integrates to T_end or until the cap / dt_min stop fires. Throws
/// ParameterError on invalid params and SchemeViolation on a negative cell.
RunResult run(const DensityField& initial, const SimConfig& config, const PotentialParams& params,
              const Observer& observer = {});

}  // namespace adlab
