#include <doctest.h>

#include <cmath>
#include <sstream>

#include "adlab/field.hpp"

using namespace adlab;

namespace {
DensityField constant(const Grid& g, double c) {
  return DensityField(g, std::vector<double>(g.size(), c));
}
}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(2, 16, 1.0);
  CHECK(g.spacing() == doctest::Approx(0.125));
  CHECK(g.size() == 256);
  CHECK(g.cell_volume() == doctest::Approx(0.125 * 0.125));
  for (int i = 0; i < 16; ++i) CHECK(g.center(i) == -g.center(15 - i));
}

TEST_CASE("mass") {
  for (int N : {8, 34, 128}) {
    const Grid g(2, N, 1.0);
    CHECK(mass(constant(g, 2.5)) == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(mass(DensityField(g)) == 0.0);
    DensityField one(g);
    one[g.index(3, 5)] = 7.0;
    CHECK(mass(one) == doctest::Approx(7.0 * g.cell_volume()).epsilon(1e-15));
  }
}

TEST_CASE("lp_norm") {
  const Grid g(2, 32, 1.0);
  CHECK(lp_norm(constant(g, 3.0), 2.0) == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(lp_norm(constant(g, 3.0), 1.0) == doctest::Approx(12.0).epsilon(1e-13));

  DensityField f(g);
  f[g.index(1, 2)] = 0.5;
  f[g.index(20, 7)] = 4.25;
  CHECK(lp_norm(f, kInfNorm) == 4.25);

  DensityField ind(g);
  const int k = 17;
  for (int i = 0; i < k; ++i) ind[g.index(i, 9)] = 1.0;
  CHECK(lp_norm(ind, 3.0) == doctest::Approx(std::cbrt(k * g.cell_volume())).epsilon(1e-13));
  CHECK_THROWS_AS(lp_norm(ind, 0.5), std::domain_error);
}

TEST_CASE("density fields reject bad values") {
  const Grid g(1, 8, 1.0);
  CHECK_THROWS_AS(DensityField(g, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(DensityField(g, {1, -2, 3, 4, 5, 6, 7, 8}), std::invalid_argument);
  CHECK_THROWS_AS(DensityField(g, {1, NAN, 3, 4, 5, 6, 7, 8}), std::invalid_argument);
  CHECK_THROWS(Grid(2, 33, 1.0));
}

TEST_CASE("initial profiles") {
  const Grid g(2, 64, 2.0);
  ProfileSpec s;
  s.mass = 1.0;
  s.width = 0.3;

  SUBCASE("gaussian hits the target mass") {
    s.width = 0.15;  // cut at 6 sigma = 0.9 < L/2
    const auto p = init_profile(g, s);
    CHECK(std::abs(mass(p.field) - 1.0) <= 1e-12);
    CHECK_FALSE(p.near_boundary);
  }
  SUBCASE("two bumps are point symmetric") {
    s.kind = ProfileKind::TwoBumps;
    s.separation = 1.0;
    const auto f = init_profile(g, s).field;
    for (int j = 0; j < 64; ++j)
      for (int i = 0; i < 64; ++i) CHECK(f.at(i, j) == f.at(63 - i, 63 - j));
    CHECK(std::abs(mass(f) - 1.0) <= 1e-12);
  }
  SUBCASE("seeded random is reproducible") {
    s.kind = ProfileKind::UniformRandom;
    s.width = 1.0;
    s.seed = 42;
    const auto a = init_profile(g, s).field;
    const auto b = init_profile(g, s).field;
    s.seed = 43;
    const auto c = init_profile(g, s).field;
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    CHECK_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
  }
  SUBCASE("wide profiles are flagged") {
    s.width = 0.8;
    CHECK(init_profile(g, s).near_boundary);
  }
  SUBCASE("every kind is nonnegative with the target mass") {
    for (auto kind : {ProfileKind::Gaussian, ProfileKind::Bump, ProfileKind::TwoBumps, ProfileKind::Ring,
                      ProfileKind::UniformRandom}) {
      s.kind = kind;
      s.mass = 3.0;
      const auto f = init_profile(g, s).field;
      CHECK(std::abs(mass(f) - 3.0) <= 3e-12);
      for (double v : f.values()) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("profile names round-trip") {
  for (auto kind : {ProfileKind::Gaussian, ProfileKind::Bump, ProfileKind::TwoBumps, ProfileKind::Ring,
                    ProfileKind::UniformRandom})
    CHECK(parse_profile_kind(to_string(kind)) == kind);
  CHECK_THROWS(parse_profile_kind("square"));
}

TEST_CASE("snapshots round-trip exactly") {
  const Grid g(2, 16, 1.5);
  ProfileSpec s;
  s.kind = ProfileKind::UniformRandom;
  s.width = 1.0;
  const auto f = init_profile(g, s).field;

  std::stringstream csv;
  write_field_csv(csv, f);
  const auto a = read_field_csv(csv);
  CHECK(a.grid() == g);
  CHECK(std::equal(a.values().begin(), a.values().end(), f.values().begin()));

  std::stringstream bin;
  write_field_binary(bin, f);
  const auto b = read_field_binary(bin);
  CHECK(b.grid() == g);
  CHECK(std::equal(b.values().begin(), b.values().end(), f.values().begin()));
}
