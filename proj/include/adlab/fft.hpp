// Thin RAII wrapper over FFTW real transforms, plus zero-padded free-space
// convolution on a square (or 1D) window of cells.
#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace adlab {

/// Real-to-complex transform of an nx-by-ny array (ny = 1 for 1D), row-major
/// with x fastest. Unnormalized in both directions.
class RealFft {
 public:
  RealFft(int nx, int ny);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t real_size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t spectrum_size() const { return static_cast<std::size_t>(nx_ / 2 + 1) * ny_; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// The input spectrum is left intact.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  int nx_;
  int ny_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Offset kernel K(dx, dy) in cell units; dy is always 0 for 1D windows.
using OffsetKernel = std::function<double(int dx, int dy)>;

/// Exact linear convolution out[i] = sum_j K(i - j) in[j] * cell_volume on an
/// S (x S) window, computed by zero padding to 2S per axis. Several kernels
/// share one forward transform of the input.
class PaddedConvolution {
 public:
  PaddedConvolution(int dim, int window, double cell_volume, const std::vector<OffsetKernel>& kernels);

  int window() const { return window_; }
  std::size_t kernel_count() const { return spectra_.size(); }

  /// in has window^dim values; outs[k] receives kernel k's convolution.
  void apply(std::span<const double> in, std::vector<std::vector<double>>& outs) const;

 private:
  int dim_;
  int window_;
  double scale_;
  RealFft fft_;
  std::vector<std::vector<std::complex<double>>> spectra_;
};

}  // namespace adlab
