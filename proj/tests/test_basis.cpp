#include <doctest.h>

#include <cmath>

#include "fracfilt/basis.hpp"
#include "fracfilt/errors.hpp"

using namespace fracfilt;

TEST_CASE("basis grid and eigenvalues") {
  const auto b = build_basis(2.0, 1, 63);
  CHECK(b->spacing() == doctest::Approx(4.0 / 64.0));
  CHECK(b->nodes().front() == doctest::Approx(-2.0 + 4.0 / 64.0));
  CHECK(b->eigenvalue(3) == doctest::Approx(std::pow(3.0 * M_PI / 4.0, 2)));
  CHECK_THROWS_AS(build_basis(1.0, 2, 16), FeatureError);
}

TEST_CASE("modes round-trip through the transform") {
  const auto b = build_basis(1.0, 1, 64);
  const Field f = Field::mode(b, 3);
  CHECK(f.values()[5] == doctest::Approx(b->eigenfunction(3, b->nodes()[5])).epsilon(1e-14));
  const Field g = Field::from_values(b, std::vector<double>(f.values().begin(), f.values().end()));
  CHECK(g.coeffs()[2] == doctest::Approx(1.0).epsilon(1e-13));
  for (int k = 0; k < 64; ++k) {
    if (k != 2) CHECK(std::abs(g.coeffs()[k]) < 1e-13);
  }
}

TEST_CASE("eigenfunctions are orthonormal on the grid") {
  const auto b = build_basis(1.5, 1, 40);
  for (int i : {1, 7, 40}) {
    for (int j : {1, 7, 40}) {
      const double ip = Field::mode(b, i).inner(Field::mode(b, j));
      CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("spectral powers compose") {
  const auto b = build_basis(1.0, 1, 32);
  const Field f = Field::mode(b, 2) + Field::mode(b, 5) * 0.3;
  const FracOrder s(0.3);
  const Field twice = apply_power(apply_power(f, 0.15), 0.15);
  const Field once = spectral_frac_laplacian(f, s);
  CHECK((twice - once).l2_norm() < 1e-12 * once.l2_norm());
  CHECK(hs_norm(Field::mode(b, 1), s) == doctest::Approx(std::pow(b->eigenvalue(1), 0.15)));
  CHECK(dom_norm(Field::mode(b, 1), s) == doctest::Approx(std::pow(b->eigenvalue(1), 0.3)));
}

TEST_CASE("nested grids share nodes") {
  const auto a = build_basis_with_spacing(2.0, 1.0 / 8.0);
  const auto c = build_basis_with_spacing(4.0, 1.0 / 8.0);
  CHECK(a->size() == 31);
  CHECK(c->size() == 63);
  CHECK(a->nodes()[0] == doctest::Approx(c->nodes()[16]));
  CHECK_THROWS(build_basis_with_spacing(1.0, 0.3));
}

TEST_CASE("fields on different bases do not mix") {
  const auto a = build_basis(1.0, 1, 16);
  const auto c = build_basis(2.0, 1, 16);
  const auto twin = build_basis(1.0, 1, 16);
  CHECK_THROWS_AS(Field::mode(a, 1) + Field::mode(c, 1), SizeMismatch);
  CHECK_NOTHROW(Field::mode(a, 1) + Field::mode(twin, 1));
  CHECK_THROWS_AS(Field::from_values(a, std::vector<double>(15, 0.0)), SizeMismatch);
}

TEST_CASE("evaluate interpolates the spectral sum") {
  const auto b = build_basis(1.0, 1, 32);
  const Field f = Field::mode(b, 4) * 2.0;
  CHECK(f.evaluate(0.123) == doctest::Approx(2.0 * b->eigenfunction(4, 0.123)).epsilon(1e-13));
}
