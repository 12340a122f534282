#include "adlab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>
#include <stdexcept>

namespace adlab {

namespace {
// The FFTW planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Plans are made on fftw_malloc storage so that SIMD codelets are allowed;
// every execution copies through buffers of the same alignment.
template <class T>
struct AlignedBuffer {
  explicit AlignedBuffer(std::size_t n) : data(static_cast<T*>(fftw_malloc(n * sizeof(T)))), size(n) {
    if (!data) throw std::bad_alloc();
  }
  ~AlignedBuffer() { fftw_free(data); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  T* data;
  std::size_t size;
};
}  // namespace

RealFft::RealFft(int nx, int ny) : nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("RealFft: bad size");
  AlignedBuffer<double> r(real_size());
  AlignedBuffer<fftw_complex> c(spectrum_size());
  const unsigned flags = FFTW_ESTIMATE;
  std::lock_guard lock(planner_mutex());
  if (ny == 1) {
    forward_plan_ = fftw_plan_dft_r2c_1d(nx, r.data, c.data, flags);
    inverse_plan_ = fftw_plan_dft_c2r_1d(nx, c.data, r.data, flags | FFTW_DESTROY_INPUT);
  } else {
    forward_plan_ = fftw_plan_dft_r2c_2d(ny, nx, r.data, c.data, flags);
    inverse_plan_ = fftw_plan_dft_c2r_2d(ny, nx, c.data, r.data, flags | FFTW_DESTROY_INPUT);
  }
  if (!forward_plan_ || !inverse_plan_) throw std::runtime_error("RealFft: planning failed");
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != real_size() || out.size() != spectrum_size())
    throw std::invalid_argument("RealFft::forward: size mismatch");
  AlignedBuffer<double> r(in.size());
  AlignedBuffer<fftw_complex> c(out.size());
  std::copy(in.begin(), in.end(), r.data);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), r.data, c.data);
  std::copy_n(reinterpret_cast<const std::complex<double>*>(c.data), out.size(), out.begin());
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != spectrum_size() || out.size() != real_size())
    throw std::invalid_argument("RealFft::inverse: size mismatch");
  AlignedBuffer<fftw_complex> c(in.size());
  AlignedBuffer<double> r(out.size());
  std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(c.data));
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), c.data, r.data);
  std::copy_n(r.data, out.size(), out.begin());
}

PaddedConvolution::PaddedConvolution(int dim, int window, double cell_volume,
                                     const std::vector<OffsetKernel>& kernels)
    : dim_(dim),
      window_(window),
      scale_(0.0),
      fft_(2 * window, dim == 2 ? 2 * window : 1) {
  const int P = 2 * window;
  const int py = dim == 2 ? P : 1;
  scale_ = cell_volume / static_cast<double>(fft_.real_size());
  std::vector<double> samples(fft_.real_size());
  // Padded slot q holds offset q for q < S and q - 2S for q > S; slot S is
  // never reached by a linear convolution of two S-windows.
  auto offset = [&](int q) { return q < window ? q : q - P; };
  for (const auto& k : kernels) {
    for (int qy = 0; qy < py; ++qy) {
      for (int qx = 0; qx < P; ++qx) {
        const bool unused = qx == window || (dim == 2 && qy == window);
        samples[static_cast<std::size_t>(qy) * P + qx] =
            unused ? 0.0 : k(offset(qx), dim == 2 ? offset(qy) : 0);
      }
    }
    auto& spec = spectra_.emplace_back(fft_.spectrum_size());
    fft_.forward(samples, spec);
  }
}

void PaddedConvolution::apply(std::span<const double> in, std::vector<std::vector<double>>& outs) const {
  const int S = window_;
  const int P = 2 * S;
  const int sy = dim_ == 2 ? S : 1;
  if (in.size() != static_cast<std::size_t>(S) * sy)
    throw std::invalid_argument("PaddedConvolution::apply: input size mismatch");

  std::vector<double> padded(fft_.real_size(), 0.0);
  for (int y = 0; y < sy; ++y)
    for (int x = 0; x < S; ++x) padded[static_cast<std::size_t>(y) * P + x] = in[static_cast<std::size_t>(y) * S + x];

  std::vector<std::complex<double>> rho_hat(fft_.spectrum_size());
  fft_.forward(padded, rho_hat);

  outs.resize(spectra_.size());
  std::vector<std::complex<double>> prod(rho_hat.size());
  for (std::size_t k = 0; k < spectra_.size(); ++k) {
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = rho_hat[i] * spectra_[k][i];
    fft_.inverse(prod, padded);
    auto& out = outs[k];
    out.assign(static_cast<std::size_t>(S) * sy, 0.0);
    for (int y = 0; y < sy; ++y)
      for (int x = 0; x < S; ++x)
        out[static_cast<std::size_t>(y) * S + x] = padded[static_cast<std::size_t>(y) * P + x] * scale_;
  }
}

}  // namespace adlab
