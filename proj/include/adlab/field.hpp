// Uniform cell-centered grids and nonnegative density fields.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace adlab {

/// Square box [-L, L)^dim split into N cells per axis. dim is 1 or 2.
class Grid {
 public:
  Grid() = default;
  Grid(int dim, int cells_per_axis, double half_width);

  int dim() const { return dim_; }
  int cells_per_axis() const { return n_; }
  double half_width() const { return half_width_; }
  double spacing() const { return 2.0 * half_width_ / n_; }
  double cell_volume() const;
  std::size_t size() const;

  /// Cell-center coordinate along one axis. Exactly antisymmetric under
  /// i -> N-1-i.
  double center(int i) const { return (i + 0.5 - 0.5 * n_) * spacing(); }

  std::size_t index(int ix, int iy = 0) const {
    return static_cast<std::size_t>(iy) * n_ + ix;
  }

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && half_width_ == o.half_width_;
  }

 private:
  int dim_ = 2;
  int n_ = 8;
  double half_width_ = 1.0;
};

class DensityField {
 public:
  DensityField() = default;
  explicit DensityField(const Grid& grid);
  /// Throws std::invalid_argument on size mismatch or negative/non-finite values.
  DensityField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double at(int ix, int iy = 0) const { return values_[grid_.index(ix, iy)]; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

double mass(const DensityField& field);
/// Discrete L^p norm; p = kInfNorm gives the max. Throws std::domain_error for p < 1.
double lp_norm(const DensityField& field, double p);
double lp_norm(std::span<const double> values, double cell_volume, double p);

enum class ProfileKind { Gaussian, Bump, TwoBumps, Ring, UniformRandom };

ProfileKind parse_profile_kind(const std::string& name);
std::string to_string(ProfileKind kind);

struct ProfileSpec {
  ProfileKind kind = ProfileKind::Gaussian;
  double mass = 1.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double width = 0.5;       // gaussian sigma (cut at 6 sigma), bump radius, random disk radius
  double separation = 1.0;  // two_bumps: distance between the two centers
  double radius = 1.0;      // ring radius
  std::uint64_t seed = 1;
};

struct InitialProfile {
  DensityField field;
  bool near_boundary = false;  // nominal support reaches beyond 0.5 L
};

InitialProfile init_profile(const Grid& grid, const ProfileSpec& spec);

/// Snapshot layout: header (N, L, n_dim) followed by row-major values.
void write_field_csv(std::ostream& os, const DensityField& field);
DensityField read_field_csv(std::istream& is);
void write_field_binary(std::ostream& os, const DensityField& field);
DensityField read_field_binary(std::istream& is);

}  // namespace adlab
