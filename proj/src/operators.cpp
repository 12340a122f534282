#include "adlab/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adlab {

namespace {

// 6-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 6> kGaussNodes = {-0.9324695142031521, -0.6612093864662645,
                                               -0.2386191860831969, 0.2386191860831969,
                                               0.6612093864662645,  0.9324695142031521};
constexpr std::array<double, 6> kGaussWeights = {0.1713244923791704, 0.3607615730473684,
                                                 0.4679139345726910, 0.4679139345726910,
                                                 0.3607615730473684, 0.1713244923791704};

// Average of f over the cell [cx - h/2, cx + h/2] x [cy - h/2, cy + h/2]
// (or the interval in 1D), composite Gauss on `sub` subcells per axis.
template <class F>
double cell_average(int dim, double cx, double cy, double h, int sub, F&& f) {
  const double sh = h / sub;
  double acc = 0.0;
  for (int a = 0; a < sub; ++a) {
    const double ax = cx - 0.5 * h + (a + 0.5) * sh;
    if (dim == 1) {
      for (std::size_t i = 0; i < kGaussNodes.size(); ++i)
        acc += kGaussWeights[i] * f(ax + 0.5 * sh * kGaussNodes[i], 0.0);
      continue;
    }
    for (int b = 0; b < sub; ++b) {
      const double by = cy - 0.5 * h + (b + 0.5) * sh;
      for (std::size_t i = 0; i < kGaussNodes.size(); ++i)
        for (std::size_t j = 0; j < kGaussNodes.size(); ++j)
          acc += kGaussWeights[i] * kGaussWeights[j] *
                 f(ax + 0.5 * sh * kGaussNodes[i], by + 0.5 * sh * kGaussNodes[j]);
    }
  }
  // Weights sum to 2 per axis.
  return dim == 1 ? acc / (2.0 * sub) : acc / (4.0 * sub * sub);
}

}  // namespace

Window full_window(const Grid& grid) { return Window{0, 0, grid.cells_per_axis()}; }

Window active_window(const DensityField& field, int margin, double threshold) {
  const Grid& g = field.grid();
  const int N = g.cells_per_axis();
  const int ny = g.dim() == 2 ? N : 1;
  int xlo = N, xhi = -1, ylo = ny, yhi = -1;
  auto v = field.values();
  for (int iy = 0; iy < ny; ++iy) {
    const double* row = v.data() + static_cast<std::size_t>(iy) * N;
    // Branch-free count first; most rows are empty.
    int hits = 0;
    for (int ix = 0; ix < N; ++ix) hits += row[ix] > threshold;
    if (hits == 0) continue;
    int first = 0;
    while (!(row[first] > threshold)) ++first;
    int last = N - 1;
    while (!(row[last] > threshold)) --last;
    xlo = std::min(xlo, first);
    xhi = std::max(xhi, last);
    ylo = std::min(ylo, iy);
    yhi = std::max(yhi, iy);
  }
  if (xhi < 0) return full_window(g);
  xlo -= margin;
  xhi += margin;
  int side = xhi - xlo + 1;
  if (g.dim() == 2) {
    ylo -= margin;
    yhi += margin;
    side = std::max(side, yhi - ylo + 1);
  }
  // Sides of the form 8 * 2^a * 3^b keep the padded transforms fast.
  int nice = 8;
  for (int a = 8; a < 2 * N; a *= 2)
    for (int b = a; b < 4 * N; b *= 3)
      if (b >= side && (nice < side || b < nice)) nice = b;
  side = std::min(N, nice);
  auto place = [&](int lo, int hi) {
    // Center the window on [lo, hi] and clamp it into the grid.
    int start = lo - (side - (hi - lo + 1)) / 2;
    return std::clamp(start, 0, N - side);
  };
  Window w;
  w.size = side;
  w.x0 = place(xlo, xhi);
  w.y0 = g.dim() == 2 ? place(ylo, yhi) : 0;
  return w;
}

KernelCache::KernelCache(const Grid& grid, const PotentialParams& params, double epsilon)
    : grid_(grid), params_(params), epsilon_(epsilon < 0.0 ? 0.5 * grid.spacing() : epsilon) {
  params_.validate();
  const double lowest = params_.lambda > 0.0 ? std::min(params_.A, params_.B) : params_.A;
  // |grad U| ~ r^{lowest - 1}
  integrable_ = lowest - 1.0 > -static_cast<double>(grid_.dim());
  const double h = grid_.spacing();
  const double eps = integrable_ ? 0.0 : epsilon_;
  for (int axis = 0; axis < grid_.dim(); ++axis) {
    for (int dy = -1; dy <= 1; ++dy) {
      if (grid_.dim() == 1 && dy != 0) continue;
      for (int dx = -1; dx <= 1; ++dx) {
        double avg = 0.0;
        // The origin cell averages to zero by odd symmetry.
        if (dx != 0 || dy != 0) {
          avg = cell_average(grid_.dim(), dx * h, dy * h, h, 4,
                             [&](double x, double y) { return exact_component(axis, x, y, eps); });
        }
        near_[axis][dy + 1][dx + 1] = avg;
      }
    }
  }
}

double KernelCache::exact_component(int axis, double x, double y, double eps) const {
  const double r2 = x * x + y * y + eps * eps;
  if (r2 == 0.0) return 0.0;
  const double r = std::sqrt(r2);
  double g = std::pow(r, params_.A - 2.0);
  if (params_.lambda > 0.0) g -= params_.lambda * std::pow(r, params_.B - 2.0);
  return (axis == 0 ? x : y) * g;
}

double KernelCache::component(int axis, int dx, int dy) const {
  if (std::abs(dx) <= 1 && std::abs(dy) <= 1) return near_[axis][dy + 1][dx + 1];
  const double h = grid_.spacing();
  return exact_component(axis, dx * h, dy * h, 0.0);
}

const PaddedConvolution& KernelCache::convolution(int window) const {
  std::lock_guard lock(mutex_);
  auto it = convolutions_.find(window);
  if (it != convolutions_.end()) return *it->second;
  std::vector<OffsetKernel> kernels;
  for (int axis = 0; axis < grid_.dim(); ++axis)
    kernels.emplace_back([this, axis](int dx, int dy) { return component(axis, dx, dy); });
  auto conv = std::make_unique<PaddedConvolution>(grid_.dim(), window, grid_.cell_volume(), kernels);
  auto& ref = *conv;
  convolutions_.emplace(window, std::move(conv));
  return ref;
}

FractionalOrder::FractionalOrder(double s) : s_(s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("FractionalOrder: requires 0 < s < 1");
}

std::vector<double> diffusion_term(const DensityField& field, double m) {
  const Grid& g = field.grid();
  const int N = g.cells_per_axis();
  const int ny = g.dim() == 2 ? N : 1;
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  std::vector<double> pm(g.size());
  for (std::size_t i = 0; i < pm.size(); ++i) pm[i] = std::pow(field[i], m);
  std::vector<double> rate(g.size(), 0.0);
  // Face-by-face so the rates telescope.
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix + 1 < N; ++ix) {
      const std::size_t a = g.index(ix, iy), b = g.index(ix + 1, iy);
      const double flux = (pm[b] - pm[a]) * inv_h2;
      rate[a] += flux;
      rate[b] -= flux;
    }
  }
  if (g.dim() == 2) {
    for (int iy = 0; iy + 1 < N; ++iy) {
      for (int ix = 0; ix < N; ++ix) {
        const std::size_t a = g.index(ix, iy), b = g.index(ix, iy + 1);
        const double flux = (pm[b] - pm[a]) * inv_h2;
        rate[a] += flux;
        rate[b] -= flux;
      }
    }
  }
  return rate;
}

VectorField interaction_gradient(const DensityField& field, const KernelCache& cache,
                                 const Window& window) {
  const Grid& g = field.grid();
  if (!(g == cache.grid())) throw std::invalid_argument("interaction_gradient: grid/cache mismatch");
  const int S = window.size;
  const int sy = g.dim() == 2 ? S : 1;
  std::vector<double> block(window.count(g.dim()));
  for (int y = 0; y < sy; ++y)
    for (int x = 0; x < S; ++x)
      block[static_cast<std::size_t>(y) * S + x] = field.at(window.x0 + x, window.y0 + y);

  std::vector<std::vector<double>> outs;
  cache.convolution(S).apply(block, outs);
  VectorField out;
  out.x = std::move(outs[0]);
  if (g.dim() == 2) out.y = std::move(outs[1]);
  return out;
}

VectorField interaction_gradient(const DensityField& field, const KernelCache& cache) {
  return interaction_gradient(field, cache, full_window(field.grid()));
}

Grid padded_grid(const Grid& grid) {
  return Grid(grid.dim(), 2 * grid.cells_per_axis(), 2.0 * grid.half_width());
}

std::vector<double> zero_pad(const DensityField& field) {
  const Grid& g = field.grid();
  const Grid pg = padded_grid(g);
  const int N = g.cells_per_axis();
  const int off = N / 2;
  std::vector<double> out(pg.size(), 0.0);
  if (g.dim() == 1) {
    for (int ix = 0; ix < N; ++ix) out[ix + off] = field.at(ix);
    return out;
  }
  for (int iy = 0; iy < N; ++iy)
    for (int ix = 0; ix < N; ++ix) out[pg.index(ix + off, iy + off)] = field.at(ix, iy);
  return out;
}

std::vector<double> crop_center(std::span<const double> padded, const Grid& grid) {
  const Grid pg = padded_grid(grid);
  const int N = grid.cells_per_axis();
  const int off = N / 2;
  std::vector<double> out(grid.size());
  if (grid.dim() == 1) {
    for (int ix = 0; ix < N; ++ix) out[ix] = padded[ix + off];
    return out;
  }
  for (int iy = 0; iy < N; ++iy)
    for (int ix = 0; ix < N; ++ix) out[grid.index(ix, iy)] = padded[pg.index(ix + off, iy + off)];
  return out;
}

std::vector<double> periodic_fractional_laplacian(std::span<const double> values, const Grid& box,
                                                  double s) {
  if (!(s > 0.0 && s <= 1.0))
    throw std::domain_error("periodic_fractional_laplacian: requires 0 < s <= 1");
  if (values.size() != box.size()) throw std::invalid_argument("periodic_fractional_laplacian: size");
  const int N = box.cells_per_axis();
  const int ny = box.dim() == 2 ? N : 1;
  RealFft fft(N, ny);
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  fft.forward(values, spec);
  const double dk = std::numbers::pi / box.half_width();
  const int hx = N / 2 + 1;
  const double norm = 1.0 / static_cast<double>(fft.real_size());
  for (int ky = 0; ky < ny; ++ky) {
    const int sy = ky <= ny / 2 ? ky : ky - ny;
    for (int kx = 0; kx < hx; ++kx) {
      const double xi2 = dk * dk * (static_cast<double>(kx) * kx + static_cast<double>(sy) * sy);
      const double mult = xi2 == 0.0 ? 0.0 : std::pow(xi2, s);
      spec[static_cast<std::size_t>(ky) * hx + kx] *= mult * norm;
    }
  }
  std::vector<double> out(values.size());
  fft.inverse(spec, out);
  return out;
}

std::vector<double> fractional_laplacian(const DensityField& field, FractionalOrder s) {
  const auto padded = zero_pad(field);
  const auto applied = periodic_fractional_laplacian(padded, padded_grid(field.grid()), s.value());
  return crop_center(applied, field.grid());
}

std::vector<double> riesz_potential(const DensityField& field, FractionalOrder order) {
  const Grid& g = field.grid();
  const int dim = g.dim();
  const double s = order.value();
  if (!(dim - 2.0 * s > 0.0)) throw std::domain_error("riesz_potential: requires n - 2s > 0");
  const double c = riesz_constant(dim, s);
  const double h = g.spacing();
  const double decay = dim - 2.0 * s;
  // Origin cell: average over the ball of equal volume, alpha_n R^n = h^n.
  const double R = h / std::pow(unit_ball_volume(dim), 1.0 / dim);
  const double origin = c * unit_sphere_area(dim) * std::pow(R, 2.0 * s) / (2.0 * s) / std::pow(h, dim);
  // Other cells carry the exact cell average of the kernel, so the discrete
  // convolution is the potential of the piecewise-constant density.
  auto radial = [=](double x, double y) { return c * std::pow(x * x + y * y, -0.5 * decay); };
  OffsetKernel kernel = [=](int dx, int dy) {
    if (dx == 0 && dy == 0) return origin;
    const int sub = std::max(std::abs(dx), std::abs(dy)) <= 8 ? 4 : 1;
    return cell_average(dim, dx * h, dy * h, h, sub, radial);
  };
  PaddedConvolution conv(dim, g.cells_per_axis(), g.cell_volume(), {kernel});
  std::vector<std::vector<double>> outs;
  conv.apply(field.values(), outs);
  return std::move(outs[0]);
}

double dissipation_functional(const DensityField& field, double m, double p) {
  if (!(p >= 1.0)) throw std::domain_error("dissipation_functional: p must be >= 1");
  const Grid& g = field.grid();
  const int N = g.cells_per_axis();
  const int ny = g.dim() == 2 ? N : 1;
  const double q = 0.5 * (m + p - 1.0);
  const double h = g.spacing();
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(field[i], q);

  auto derivative = [&](auto at, int i) {
    if (i == 0) return (at(1) - at(0)) / h;
    if (i == N - 1) return (at(N - 1) - at(N - 2)) / h;
    return (at(i + 1) - at(i - 1)) / (2.0 * h);
  };
  double acc = 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < N; ++ix) {
      const double gx = derivative([&](int k) { return w[g.index(k, iy)]; }, ix);
      acc += gx * gx;
      if (g.dim() == 2) {
        const double gy = derivative([&](int k) { return w[g.index(ix, k)]; }, iy);
        acc += gy * gy;
      }
    }
  }
  return acc * g.cell_volume();
}

double sv_gap(const DensityField& field, double gamma, double alpha) {
  if (!(gamma >= 2.0)) throw std::domain_error("sv_gap: requires gamma >= 2");
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::domain_error("sv_gap: requires 0 < alpha < 2");
  const Grid pg = padded_grid(field.grid());
  const double vol = pg.cell_volume();
  const auto v = zero_pad(field);
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::pow(v[i], 0.5 * gamma);

  const auto lv = periodic_fractional_laplacian(v, pg, 0.5 * alpha);
  const auto hw = periodic_fractional_laplacian(w, pg, 0.25 * alpha);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) lhs += std::pow(v[i], gamma - 1.0) * lv[i];
    rhs += hw[i] * hw[i];
  }
  return (lhs - 4.0 * (gamma - 1.0) / (gamma * gamma) * rhs) * vol;
}

}  // namespace adlab
