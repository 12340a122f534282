#include "adlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adlab {

namespace {

constexpr double kDegenerateFloor = 1e-30;
constexpr double kNegativeTol = 1e-14;
// Share of the largest positivity-preserving step actually taken.
constexpr double kPositivityShare = 0.9;
constexpr int kWindowMargin = 2;
// Cells below this share of L^inf outside the margin are left frozen.
constexpr double kFrozenShare = 1e-14;
constexpr int kBoundaryBand = 4;

double power(double v, double m) {
  if (m == 1.0) return v;
  if (m == 2.0) return v * v;
  if (m == 1.5) return v * std::sqrt(v);
  return v > 0.0 ? std::pow(v, m) : 0.0;
}

// Four independent lanes so the compare chain vectorizes.
double max_value(const DensityField& f) {
  const auto v = f.values();
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= v.size(); i += 4)
    for (int k = 0; k < 4; ++k) lane[k] = v[i + k] > lane[k] ? v[i + k] : lane[k];
  for (; i < v.size(); ++i) lane[0] = std::max(lane[0], v[i]);
  return std::max(std::max(lane[0], lane[1]), std::max(lane[2], lane[3]));
}

double stable_dt(const DensityField& field, const Rate& rate, const SimConfig& cfg) {
  const Grid& g = field.grid();
  const double h = g.spacing();
  double dt = h * h / (2.0 * g.dim() * std::max(rate.max_diffusivity, kDegenerateFloor));
  if (rate.max_speed > 0.0) dt = std::min(dt, h / (2.0 * rate.max_speed));
  dt *= cfg.cfl;
  const Window& w = rate.window;
  const int S = w.size;
  const int sy = g.dim() == 2 ? S : 1;
  for (int y = 0; y < sy; ++y)
    for (int x = 0; x < S; ++x) {
      const double r = rate.local[static_cast<std::size_t>(y) * S + x];
      if (r < 0.0) dt = std::min(dt, kPositivityShare * field.at(w.x0 + x, w.y0 + y) / -r);
    }
  return dt;
}

// In-place forward Euler on the rate window. The field is untouched when a
// cell would go negative beyond tolerance. Returns the smallest updated value.
double advance(DensityField& field, const Rate& rate, double dt, double t) {
  const Grid& g = field.grid();
  const Window& w = rate.window;
  const int S = w.size;
  const int sy = g.dim() == 2 ? S : 1;
  const double floor = -kNegativeTol * rate.linf;
  std::vector<double> next(rate.local.size());
  for (int y = 0; y < sy; ++y)
    for (int x = 0; x < S; ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * S + x;
      double v = field.at(w.x0 + x, w.y0 + y) + dt * rate.local[k];
      if (v < 0.0) {
        if (v < floor)
          throw SchemeViolation("negative density " + std::to_string(v) + " after step", field, t);
        v = 0.0;
      }
      next[k] = v;
    }
  double lowest = std::numeric_limits<double>::infinity();
  for (int y = 0; y < sy; ++y)
    for (int x = 0; x < S; ++x) {
      const double v = next[static_cast<std::size_t>(y) * S + x];
      lowest = std::min(lowest, v);
      field[g.index(w.x0 + x, w.y0 + y)] = v;
    }
  return lowest;
}

StepReport make_report(const DensityField& field, const Rate& rate, const SimConfig& cfg, double t,
                       double dt) {
  StepReport r;
  r.t = t;
  r.dt = dt;
  r.mass = mass(field);
  r.linf = rate.linf;
  for (double p : cfg.monitored_p) {
    r.lp.push_back(lp_norm(field, p));
    r.dissipation.push_back(dissipation_functional(field, cfg.m, p));
  }
  r.max_speed = rate.max_speed;
  r.boundary_fraction = boundary_mass_fraction(field);
  return r;
}

}  // namespace

void SimConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& rule) {
    throw std::invalid_argument(key + ": " + rule);
  };
  if (!(m > 0.0) || !std::isfinite(m)) fail("m", "must be > 0");
  if (!(T_end >= 0.0) || !std::isfinite(T_end)) fail("T_end", "must be >= 0");
  if (!(cfl > 0.0 && cfl <= 1.0)) fail("cfl", "must lie in (0, 1]");
  if (!(dt_min > 0.0)) fail("dt_min", "must be > 0");
  if (T_end > 0.0 && !(dt_min < T_end)) fail("dt_min", "must be < T_end");
  if (!(blowup_cap_factor > 1.0)) fail("blowup_cap_factor", "must be > 1");
  if (!(output_every > 0.0)) fail("output_every", "must be > 0");
  if (!std::isfinite(epsilon)) fail("epsilon", "must be finite");
  for (double p : monitored_p)
    if (!(p >= 1.0) || !std::isfinite(p)) fail("monitored_p", "every p must be finite and >= 1");
}

std::vector<double> Rate::values(const Grid& g) const {
  std::vector<double> out(g.size(), 0.0);
  const int S = window.size;
  const int sy = g.dim() == 2 ? S : 1;
  for (int y = 0; y < sy; ++y)
    for (int x = 0; x < S; ++x)
      out[g.index(window.x0 + x, window.y0 + y)] = local[static_cast<std::size_t>(y) * S + x];
  return out;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::BlowupCap: return "blowup_cap";
    case Termination::DtMin: return "dt_min";
  }
  return "completed";
}

VectorField advective_velocity(const DensityField& field, const KernelCache& cache) {
  VectorField u = interaction_gradient(field, cache);
  for (double& v : u.x) v = -v;
  for (double& v : u.y) v = -v;
  return u;
}

double boundary_mass_fraction(const DensityField& field) {
  const Grid& g = field.grid();
  const int N = g.cells_per_axis();
  const int ny = g.dim() == 2 ? N : 1;
  auto edge = [&](int i) { return i < kBoundaryBand || i >= N - kBoundaryBand; };
  double band = 0.0, total = 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < N; ++ix) {
      const double v = field.at(ix, iy);
      total += v;
      if (edge(ix) || (g.dim() == 2 && edge(iy))) band += v;
    }
  }
  return total > 0.0 ? band / total : 0.0;
}

Rate compute_rate(const DensityField& field, const SimConfig& cfg, const KernelCache& cache) {
  const Grid& g = field.grid();
  const int dim = g.dim();
  const double h = g.spacing();
  const double linf = max_value(field);
  const Window w = active_window(field, kWindowMargin, kFrozenShare * linf);
  const int S = w.size;
  const int sy = dim == 2 ? S : 1;
  const std::size_t count = w.count(dim);

  std::vector<double> v(count), pm(count);
  for (int y = 0; y < sy; ++y) {
    for (int x = 0; x < S; ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * S + x;
      v[k] = field.at(w.x0 + x, w.y0 + y);
      pm[k] = power(v[k], cfg.m);
    }
  }

  Rate r;
  r.window = w;
  r.linf = linf;
  for (std::size_t k = 0; k < count; ++k)
    if (v[k] > 0.0) r.max_diffusivity = std::max(r.max_diffusivity, cfg.m * pm[k] / v[k]);

  VectorField u;
  if (cfg.interaction) {
    u = interaction_gradient(field, cache, w);
    for (double& c : u.x) c = -c;
    for (double& c : u.y) c = -c;
  }

  std::vector<double>& local = r.local;
  local.assign(count, 0.0);
  const double inv_h = 1.0 / h;
  // Flux through the face from cell a to its neighbour b (positive = a -> b).
  auto face = [&](std::size_t a, std::size_t b, const std::vector<double>& comp) {
    double flux = -(pm[b] - pm[a]) * inv_h;
    if (cfg.interaction) {
      const double uf = 0.5 * (comp[a] + comp[b]);
      // Faces between two empty cells carry nothing and do not limit dt.
      if (v[a] > 0.0 || v[b] > 0.0) r.max_speed = std::max(r.max_speed, std::abs(uf));
      flux += uf * (uf > 0.0 ? v[a] : v[b]);
    }
    flux *= inv_h;
    local[a] -= flux;
    local[b] += flux;
  };
  for (int y = 0; y < sy; ++y)
    for (int x = 0; x + 1 < S; ++x) {
      const std::size_t a = static_cast<std::size_t>(y) * S + x;
      face(a, a + 1, u.x);
    }
  if (dim == 2)
    for (int y = 0; y + 1 < S; ++y)
      for (int x = 0; x < S; ++x) {
        const std::size_t a = static_cast<std::size_t>(y) * S + x;
        face(a, a + S, u.y);
      }
  return r;
}

StepResult step(const DensityField& field, const SimConfig& config, const KernelCache& cache,
                double dt_cap) {
  const Rate rate = compute_rate(field, config, cache);
  const double dt = std::min(stable_dt(field, rate, config), dt_cap);
  DensityField next = field;
  advance(next, rate, dt, 0.0);
  return StepResult{std::move(next), dt, rate.max_speed};
}

RunResult run(const DensityField& initial, const SimConfig& config, const PotentialParams& params,
              const Observer& observer) {
  config.validate();
  params.validate();
  const Grid& g = initial.grid();
  if (config.interaction && params.n != g.dim())
    throw std::invalid_argument("run: grid dimension must equal n when interaction is on");
  classify(params, config.m);
  const KernelCache cache(g, params, config.epsilon);

  RunResult out;
  DensityField field = initial;
  out.initial_linf = max_value(field);
  for (double v : field.values()) out.min_density = std::min(out.min_density, v);
  out.peak_linf = out.initial_linf;
  const double cap = config.blowup_cap_factor * out.initial_linf;

  Rate rate = compute_rate(field, config, cache);
  auto emit = [&](double t, double dt) {
    StepReport rep = make_report(field, rate, config, t, dt);
    if (observer) observer(field, rep, rate);
    out.reports.push_back(std::move(rep));
  };
  emit(0.0, 0.0);

  double t = 0.0;
  double next_out = std::min(config.output_every, config.T_end);
  int out_index = 1;
  while (t < config.T_end) {
    const double dt_stable = stable_dt(field, rate, config);
    if (dt_stable < config.dt_min) {
      out.termination = Termination::DtMin;
      if (out.reports.back().t < t) emit(t, 0.0);
      out.reports.back().dt_min_hit = true;
      break;
    }
    double dt = dt_stable;
    bool lands = false;
    if (t + dt >= next_out) {
      dt = next_out - t;
      lands = true;
    }
    out.min_density = std::min(out.min_density, advance(field, rate, dt, t));
    t = lands ? next_out : t + dt;
    ++out.steps;
    rate = compute_rate(field, config, cache);
    const double linf = rate.linf;
    out.peak_linf = std::max(out.peak_linf, linf);
    if (linf >= cap) {
      out.termination = Termination::BlowupCap;
      emit(t, dt);
      out.reports.back().cap_hit = true;
      break;
    }
    if (lands) {
      emit(t, dt);
      ++out_index;
      next_out = std::min(out_index * config.output_every, config.T_end);
    }
  }
  out.final_state = std::move(field);
  return out;
}

}  // namespace adlab
