// Interaction potential U(x) = |x|^A/A - lambda |x|^B/B, its distributional
// Laplacian, and the regime classifier.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace adlab {

/// Thrown when a parameter set violates the admissible exponent range.
class ParameterError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct PotentialParams {
  double A = 2.0;
  double B = 1.0;
  double lambda = 0.0;
  int n = 2;

  bool repulsive() const { return lambda > 0.0; }
  /// Throws ParameterError naming the first violated inequality.
  void validate() const;
};

enum class RegimeTag {
  WeakSingularInterior,
  WeakSingularNewtonianB,
  StrongSingular,
  AttractiveDiffusionDominated,
  AttractiveNewtonian,
  FairCompetition,
  Unclassified
};

std::string to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag = RegimeTag::Unclassified;
  std::vector<std::string> witnesses;
};

/// Absolute tolerance used for the exponent equalities (B = 2-n, A = 2-n,
/// m = 1 - A/n).
inline constexpr double kExponentTol = 1e-12;

Regime classify(const PotentialParams& params, double m);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);
/// Surface area |S^{n-1}| = n * alpha_n.
double unit_sphere_area(int n);

/// r^A/A - lambda r^B/B, with |x|^0/0 read as log|x|.
double potential_value(const PotentialParams& params, double r);

/// f(r) = (A-2+n) r^{A-2} - lambda (B-2+n) r^{B-2}; requires 2-n < B < A <= 2.
double laplacian_mass_f(const PotentialParams& params, double r);

/// Unique zero of f on (0, inf).
double repulsion_zero_r0(const PotentialParams& params);

/// Riesz normalization C(n,s) = Gamma(n/2 - s) / (4^s pi^{n/2} Gamma(s)),
/// so that C(n,s)|x|^{-(n-2s)} is the kernel of (-Delta)^{-s}.
double riesz_constant(int n, double s);

struct ConvolutionTerm {
  double coefficient;
  double exponent;  // kernel |x|^exponent
};
struct LocalTerm {
  double coefficient;  // multiplies rho(x)
};
struct FractionalTerm {
  double coefficient;
  double order;  // (-Delta)^order applied to rho
};

/// Delta(U * rho) written as a sum of convolution, local and fractional
/// pieces. Empty vectors mean the piece is absent.
struct LaplacianForm {
  std::vector<ConvolutionTerm> convolution;
  std::vector<LocalTerm> local;
  std::vector<FractionalTerm> fractional;
};

LaplacianForm interaction_laplacian_form(const PotentialParams& params);

}  // namespace adlab
