#include "adlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace adlab {

namespace {
constexpr double kGaussCut = 6.0;
}

Grid::Grid(int dim, int cells_per_axis, double half_width)
    : dim_(dim), n_(cells_per_axis), half_width_(half_width) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
  if (cells_per_axis < 8 || cells_per_axis % 2 != 0)
    throw std::invalid_argument("Grid: N must be even and >= 8");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("Grid: L must be positive");
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

std::size_t Grid::size() const {
  return dim_ == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * n_;
}

DensityField::DensityField(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

DensityField::DensityField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("DensityField: value count does not match grid");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("DensityField: values must be finite and nonnegative");
}

double mass(const DensityField& field) {
  double s = 0.0;
  for (double v : field.values()) s += v;
  return s * field.grid().cell_volume();
}

double lp_norm(std::span<const double> values, double cell_volume, double p) {
  if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must be >= 1");
  if (p == 1.0) {
    double s = 0.0;
    for (double v : values) s += v;
    return s * cell_volume;
  }
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (std::isinf(p) || vmax == 0.0) return vmax;
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v) / vmax, p);
  return vmax * std::pow(s * cell_volume, 1.0 / p);
}

double lp_norm(const DensityField& field, double p) {
  return lp_norm(field.values(), field.grid().cell_volume(), p);
}

ProfileKind parse_profile_kind(const std::string& name) {
  if (name == "gaussian") return ProfileKind::Gaussian;
  if (name == "bump") return ProfileKind::Bump;
  if (name == "two_bumps") return ProfileKind::TwoBumps;
  if (name == "ring") return ProfileKind::Ring;
  if (name == "uniform_random") return ProfileKind::UniformRandom;
  throw std::invalid_argument("unknown profile kind '" + name + "'");
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Gaussian: return "gaussian";
    case ProfileKind::Bump: return "bump";
    case ProfileKind::TwoBumps: return "two_bumps";
    case ProfileKind::Ring: return "ring";
    case ProfileKind::UniformRandom: return "uniform_random";
  }
  return "gaussian";
}

InitialProfile init_profile(const Grid& grid, const ProfileSpec& spec) {
  if (!(spec.mass > 0.0)) throw std::invalid_argument("init_profile: target mass must be > 0");
  if (!(spec.width > 0.0)) throw std::invalid_argument("init_profile: width must be > 0");

  const int N = grid.cells_per_axis();
  const int ny = grid.dim() == 2 ? N : 1;
  const double w = spec.width;
  std::vector<double> values(grid.size(), 0.0);

  // Gaussian tails are cut at kGaussCut widths so the support stays compact.
  auto gauss = [&](double dx, double dy) {
    const double q = (dx * dx + dy * dy) / (w * w);
    return q < kGaussCut * kGaussCut ? std::exp(-0.5 * q) : 0.0;
  };

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double extent = 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    const double y = grid.dim() == 2 ? grid.center(iy) : 0.0;
    const double cy = grid.dim() == 2 ? spec.center_y : 0.0;
    for (int ix = 0; ix < N; ++ix) {
      const double dx = grid.center(ix) - spec.center_x;
      const double dy = y - cy;
      const double r = std::sqrt(dx * dx + dy * dy);
      double v = 0.0;
      switch (spec.kind) {
        case ProfileKind::Gaussian:
          v = gauss(dx, dy);
          break;
        case ProfileKind::Bump:
          if (r < w) v = std::exp(-1.0 / (1.0 - (r / w) * (r / w)));
          break;
        case ProfileKind::TwoBumps: {
          const double a = 0.5 * spec.separation;
          v = gauss(dx - a, dy) + gauss(dx + a, dy);
          break;
        }
        case ProfileKind::Ring: {
          const double d = r - spec.radius;
          v = std::abs(d) < kGaussCut * w ? std::exp(-d * d / (2.0 * w * w)) : 0.0;
          break;
        }
        case ProfileKind::UniformRandom: {
          const double u = unit(rng);
          if (r < w) v = u;
          break;
        }
      }
      values[grid.index(ix, iy)] = v;
    }
  }
  switch (spec.kind) {
    case ProfileKind::Gaussian: extent = 4.0 * w; break;
    case ProfileKind::Bump: extent = w; break;
    case ProfileKind::TwoBumps: extent = 0.5 * spec.separation + 4.0 * w; break;
    case ProfileKind::Ring: extent = spec.radius + 4.0 * w; break;
    case ProfileKind::UniformRandom: extent = w; break;
  }
  const double offset = std::max(std::abs(spec.center_x), grid.dim() == 2 ? std::abs(spec.center_y) : 0.0);

  double total = 0.0;
  for (double v : values) total += v;
  total *= grid.cell_volume();
  if (!(total > 0.0)) throw std::invalid_argument("init_profile: profile misses every cell center");
  const double scale = spec.mass / total;
  for (double& v : values) v *= scale;

  InitialProfile out{DensityField(grid, std::move(values)), false};
  out.near_boundary = offset + extent > 0.5 * grid.half_width();
  return out;
}

void write_field_csv(std::ostream& os, const DensityField& field) {
  const Grid& g = field.grid();
  os << "N,L,n_dim\n";
  os.precision(17);
  os << g.cells_per_axis() << ',' << g.half_width() << ',' << g.dim() << '\n';
  const int N = g.cells_per_axis();
  const int rows = g.dim() == 2 ? N : 1;
  for (int iy = 0; iy < rows; ++iy) {
    for (int ix = 0; ix < N; ++ix) {
      if (ix) os << ',';
      os << field.at(ix, iy);
    }
    os << '\n';
  }
}

DensityField read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "N,L,n_dim")
    throw std::runtime_error("read_field_csv: missing header");
  if (!std::getline(is, line)) throw std::runtime_error("read_field_csv: missing grid line");
  for (char& c : line)
    if (c == ',') c = ' ';
  std::istringstream hs(line);
  int N = 0, dim = 0;
  double L = 0.0;
  if (!(hs >> N >> L >> dim)) throw std::runtime_error("read_field_csv: bad grid line");
  Grid grid(dim, N, L);
  std::vector<double> values;
  values.reserve(grid.size());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) values.push_back(std::stod(cell));
  }
  return DensityField(grid, std::move(values));
}

void write_field_binary(std::ostream& os, const DensityField& field) {
  const Grid& g = field.grid();
  const std::int64_t N = g.cells_per_axis();
  const std::int64_t dim = g.dim();
  const double L = g.half_width();
  os.write(reinterpret_cast<const char*>(&N), sizeof N);
  os.write(reinterpret_cast<const char*>(&L), sizeof L);
  os.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  auto v = field.values();
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
}

DensityField read_field_binary(std::istream& is) {
  std::int64_t N = 0, dim = 0;
  double L = 0.0;
  is.read(reinterpret_cast<char*>(&N), sizeof N);
  is.read(reinterpret_cast<char*>(&L), sizeof L);
  is.read(reinterpret_cast<char*>(&dim), sizeof dim);
  if (!is) throw std::runtime_error("read_field_binary: truncated header");
  Grid grid(static_cast<int>(dim), static_cast<int>(N), L);
  std::vector<double> values(grid.size());
  is.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("read_field_binary: truncated values");
  return DensityField(grid, std::move(values));
}

}  // namespace adlab
