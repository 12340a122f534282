// Discrete spatial operators: porous-medium diffusion, nonlocal interaction
// gradient, spectral fractional Laplacian, Riesz potential, dissipation and
// the Stroock-Varopoulos gap.
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "adlab/fft.hpp"
#include "adlab/field.hpp"
#include "adlab/kernel_model.hpp"

namespace adlab {

/// Cell-centered vector field. y is empty on 1D grids.
struct VectorField {
  std::vector<double> x;
  std::vector<double> y;
};

/// Square sub-block of the grid (an interval on 1D grids) given by its lower
/// corner and side length in cells.
struct Window {
  int x0 = 0;
  int y0 = 0;
  int size = 0;

  std::size_t count(int dim) const {
    return dim == 2 ? static_cast<std::size_t>(size) * size : static_cast<std::size_t>(size);
  }
};

Window full_window(const Grid& grid);
/// Smallest window covering every cell above `threshold` plus `margin` cells,
/// with the side rounded up to the next 8 * 2^a * 3^b (capped at N). Covers
/// the full grid when no cell exceeds the threshold.
Window active_window(const DensityField& field, int margin, double threshold = 0.0);

/// Sampled gradient kernel grad U(x) = x (|x|^{A-2} - lambda |x|^{B-2}) and
/// its padded transforms, keyed by window side. Transforms for a given side
/// are built on first use and never modified afterwards.
class KernelCache {
 public:
  /// epsilon < 0 selects the default mollification h/2.
  KernelCache(const Grid& grid, const PotentialParams& params, double epsilon = -1.0);

  const Grid& grid() const { return grid_; }
  const PotentialParams& params() const { return params_; }
  double epsilon() const { return epsilon_; }
  /// True when |grad U| is integrable at the origin, i.e. the near-origin
  /// cells use exact averages rather than the mollified kernel.
  bool integrable() const { return integrable_; }

  /// Kernel component (0 = x, 1 = y) at an offset of (dx, dy) cells.
  double component(int axis, int dx, int dy) const;

  const PaddedConvolution& convolution(int window) const;

 private:
  double exact_component(int axis, double x, double y, double eps) const;

  Grid grid_;
  PotentialParams params_;
  double epsilon_;
  bool integrable_;
  double near_[2][3][3] = {};  // cell averages for |dx|,|dy| <= 1
  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<PaddedConvolution>> convolutions_;
};

class FractionalOrder {
 public:
  /// Throws std::domain_error unless 0 < s < 1.
  explicit FractionalOrder(double s);
  double value() const { return s_; }

 private:
  double s_;
};

/// Discrete Laplacian of v^m with zero-flux closure, as a per-cell rate.
std::vector<double> diffusion_term(const DensityField& field, double m);

/// grad(U * rho) on the full grid.
VectorField interaction_gradient(const DensityField& field, const KernelCache& cache);
/// grad(U * rho) restricted to a window; exact whenever rho vanishes outside it.
VectorField interaction_gradient(const DensityField& field, const KernelCache& cache,
                                 const Window& window);

/// Grid of twice the extent ([-2L, 2L) with 2N cells per axis).
Grid padded_grid(const Grid& grid);
/// Embeds the field in the center of padded_grid(grid), zero elsewhere.
std::vector<double> zero_pad(const DensityField& field);
/// Inverse of zero_pad: the central block.
std::vector<double> crop_center(std::span<const double> padded, const Grid& grid);

/// Multiplier |xi|^{2s} on the box of `box` treated as periodic; the zero
/// mode is annihilated. Accepts 0 < s <= 1.
std::vector<double> periodic_fractional_laplacian(std::span<const double> values, const Grid& box,
                                                  double s);

/// (-Delta)^s of the zero-padded field, returned on the physical box.
std::vector<double> fractional_laplacian(const DensityField& field, FractionalOrder s);

/// Free-space convolution with C(n,s)|x|^{-(n-2s)}, n the grid dimension.
std::vector<double> riesz_potential(const DensityField& field, FractionalOrder s);

/// Discrete integral of |grad v^{(m+p-1)/2}|^2 by centered differences.
double dissipation_functional(const DensityField& field, double m, double p);

/// int v^{gamma-1} (-Delta)^{alpha/2} v - 4(gamma-1)/gamma^2 int |(-Delta)^{alpha/4} v^{gamma/2}|^2
/// on the zero-padded box.
double sv_gap(const DensityField& field, double gamma, double alpha);

}  // namespace adlab
