#include <doctest.h>

#include <cmath>
#include <numbers>

#include "adlab/estimates.hpp"
#include "adlab/verify.hpp"

using namespace adlab;

TEST_CASE("S_3 matches the measured bubble quotient within 5%") {
  const double s3 = sobolev_constant(3);
  const double measured = measured_sobolev_quotient(256);
  CHECK(std::abs(measured - s3) <= 0.05 * s3);
  // Bubble quotient from above, up to quadrature truncation.
  CHECK(measured >= s3 * (1.0 - 0.02));
}

TEST_CASE("S_3 closed form") {
  CHECK(sobolev_constant(3) == doctest::Approx(3.0 * std::pow(std::numbers::pi / 2.0, 4.0 / 3.0)).epsilon(1e-13));
  CHECK(sobolev_constant(4) > 0.0);
  CHECK_THROWS_AS(sobolev_constant(2), std::domain_error);
}
