#include <doctest.h>

#include <cmath>
#include <numbers>

#include "adlab/kernel_model.hpp"

using namespace adlab;

namespace {
PotentialParams P(double A, double B, double lambda, int n) {
  PotentialParams p;
  p.A = A;
  p.B = B;
  p.lambda = lambda;
  p.n = n;
  return p;
}
}  // namespace

TEST_CASE("classify") {
  CHECK(classify(P(2, 1, 1, 2), 1.5).tag == RegimeTag::WeakSingularInterior);
  CHECK(classify(P(0, 1, 0, 2), 1.0).tag == RegimeTag::FairCompetition);
  CHECK(classify(P(0, -2, 1, 3), 1.0).tag == RegimeTag::StrongSingular);
  CHECK(classify(P(2, 0, 1, 2), 1.5).tag == RegimeTag::WeakSingularNewtonianB);
  CHECK(classify(P(1, -0.5, 1, 2), 1.2).tag == RegimeTag::StrongSingular);
  CHECK(classify(P(0, 1, 0, 2), 1.5).tag == RegimeTag::AttractiveNewtonian);
  CHECK(classify(P(1, 0, 0, 2), 1.2).tag == RegimeTag::AttractiveDiffusionDominated);
  // Below the fair-competition exponent nothing is claimed.
  CHECK(classify(P(1, 0, 0, 2), 0.4).tag == RegimeTag::Unclassified);
  CHECK_FALSE(classify(P(2, 1, 1, 2), 1.5).witnesses.empty());
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(P(2, 1, -1, 2).validate(), ParameterError);
  CHECK_THROWS_AS(P(1, 1.5, 1, 2).validate(), ParameterError);
  CHECK_THROWS_AS(P(2.5, 1, 1, 2).validate(), ParameterError);
  CHECK_NOTHROW(P(2, 1, 1, 2).validate());
}

TEST_CASE("potential_value") {
  CHECK(potential_value(P(2, 1, 0, 2), 1.0) == doctest::Approx(0.5));
  CHECK(potential_value(P(0, -1, 0, 2), 1.0) == doctest::Approx(0.0));
  const double e = std::numbers::e;
  CHECK(potential_value(P(2, 0, 1, 2), e) == doctest::Approx(e * e / 2.0 - 1.0).epsilon(1e-14));
  CHECK(potential_value(P(2, 0, 1, 2), e) == doctest::Approx(2.694528).epsilon(1e-6));
}

TEST_CASE("laplacian_mass_f and r0") {
  const auto p = P(2, 1, 1, 2);
  CHECK(laplacian_mass_f(p, 0.25) == doctest::Approx(-2.0));
  CHECK(laplacian_mass_f(p, 1.0) == doctest::Approx(1.0));
  CHECK(repulsion_zero_r0(p) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(repulsion_zero_r0(P(2, 0, 1, 3)) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
  for (const auto& q : {P(2, 1, 1, 2), P(2, 0, 1, 3), P(1.5, 0.2, 2.0, 3)}) {
    const double r0 = repulsion_zero_r0(q);
    CHECK(std::abs(laplacian_mass_f(q, r0)) < 1e-12);
    CHECK(laplacian_mass_f(q, 0.9 * r0) < 0.0);
    CHECK(laplacian_mass_f(q, 1.1 * r0) > 0.0);
  }
}

TEST_CASE("ball and sphere") {
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
}

TEST_CASE("riesz_constant") {
  // Newtonian kernel in 3D and the half-Laplacian in 2D.
  CHECK(riesz_constant(3, 1.0) == doctest::Approx(1.0 / (4.0 * std::numbers::pi)).epsilon(1e-14));
  CHECK(riesz_constant(2, 0.5) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("interaction_laplacian_form") {
  SUBCASE("weak interior: two convolutions") {
    const auto f = interaction_laplacian_form(P(2, 1, 1, 2));
    REQUIRE(f.convolution.size() == 2);
    CHECK(f.local.empty());
    CHECK(f.fractional.empty());
    CHECK(f.convolution[0].coefficient == doctest::Approx(2.0));
    CHECK(f.convolution[0].exponent == doctest::Approx(0.0));
    CHECK(f.convolution[1].coefficient == doctest::Approx(-1.0));
    CHECK(f.convolution[1].exponent == doctest::Approx(-1.0));
  }
  SUBCASE("Newtonian B: convolution plus local") {
    const auto f = interaction_laplacian_form(P(2, -1, 1, 3));
    REQUIRE(f.convolution.size() == 1);
    REQUIRE(f.local.size() == 1);
    CHECK(f.convolution[0].coefficient == doctest::Approx(3.0));
    CHECK(f.convolution[0].exponent == doctest::Approx(0.0));
    // Repulsion lowers the Laplacian: coefficient -n alpha_n.
    CHECK(f.local[0].coefficient == doctest::Approx(-3.0 * 4.0 * std::numbers::pi / 3.0));
  }
  SUBCASE("strong: convolution plus fractional") {
    const auto f = interaction_laplacian_form(P(0, -2, 1, 3));
    REQUIRE(f.convolution.size() == 1);
    REQUIRE(f.fractional.size() == 1);
    CHECK(f.convolution[0].coefficient == doctest::Approx(1.0));
    CHECK(f.convolution[0].exponent == doctest::Approx(-2.0));
    // C(3, 1/2) = Gamma(1) / (4^{1/2} pi^{3/2} Gamma(1/2)) = 1 / (2 pi^2).
    CHECK(f.fractional[0].coefficient == doctest::Approx(1.0 / (2.0 * std::numbers::pi * std::numbers::pi) / -2.0));
    CHECK(f.fractional[0].order == doctest::Approx(0.5));
  }
}
