#include <doctest.h>

#include <cmath>

#include "fracfilt/errors.hpp"
#include "fracfilt/quadrature.hpp"
#include "fracfilt/specfun.hpp"

using namespace fracfilt;

TEST_CASE("FracOrder rejects the endpoints") {
  CHECK_THROWS_AS(FracOrder(0.0), DomainError);
  CHECK_THROWS_AS(FracOrder(1.0), DomainError);
  CHECK(FracOrder(0.3).value() == 0.3);
}

TEST_CASE("bessel_k matches frozen high-precision values") {
  // Reference values computed with 30-digit arithmetic.
  struct Ref {
    double nu, z, k;
  };
  const Ref refs[] = {{0.25, 1e-6, 6.81072278897349435e+01}, {0.25, 1e-3, 1.17564762719344582e+01},
                      {0.25, 0.5, 9.60316324931886012e-01},  {0.25, 1.9, 1.30600563447080043e-01},
                      {0.25, 2.1, 1.02043318934317701e-01},  {0.25, 10, 1.78331844398063912e-05},
                      {0.25, 50, 3.41227888757488575e-23},   {0.75, 1e-3, 1.83234638521758228e+02},
                      {0.75, 1.0, 5.15775300695918593e-01},  {0.75, 7.5, 2.58124925149604532e-04},
                      {0.1, 0.01, 4.93466600975559722e+00},  {0.9, 3.0, 3.90702737467930952e-02},
                      {0.3, 2.0, 1.16036974348119257e-01},   {0.6, 40, 8.43025155468982501e-19}};
  for (const auto& r : refs) {
    CAPTURE(r.nu);
    CAPTURE(r.z);
    CHECK(std::abs(bessel_k(r.nu, r.z) / r.k - 1.0) < 1e-13);
  }
}

TEST_CASE("bessel_k of order one half is elementary") {
  for (double z : {1e-3, 0.1, 1.0, 1.99, 2.01, 5.0, 30.0}) {
    const double exact = std::sqrt(M_PI / (2.0 * z)) * std::exp(-z);
    CHECK(std::abs(bessel_k(0.5, z) / exact - 1.0) < 1e-13);
  }
}

TEST_CASE("scaled and unscaled Bessel agree") {
  for (double z : {0.01, 1.0, 3.0, 20.0}) {
    CHECK(bessel_k_scaled(0.3, z) == doctest::Approx(std::exp(z) * bessel_k(0.3, z)).epsilon(1e-13));
  }
}

TEST_CASE("bessel_k derivative identity d/dz [z^s K_s] = -z^s K_{1-s}") {
  const double s = 0.35, h = 1e-5;
  for (double z : {0.3, 1.0, 4.0}) {
    auto g = [&](double t) { return std::pow(t, s) * bessel_k(s, t); };
    const double fd = (g(z + h) - g(z - h)) / (2.0 * h);
    CHECK(fd == doctest::Approx(-std::pow(z, s) * bessel_k(1.0 - s, z)).epsilon(1e-8));
  }
}

TEST_CASE("bessel_k domain errors") {
  CHECK_THROWS_AS(bessel_k(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_k(1.5, 1.0), DomainError);
}

TEST_CASE("constants satisfy the product identity and known values") {
  for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const auto c = constants(1, FracOrder(s));
    CHECK(c.mu_s * c.c_s * std::tgamma(1.0 - s) * std::pow(2.0, -s) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c.kappa_ds * 2.0 == doctest::Approx(1.0 / detail::poisson_mass_integral(1, s) * 2.0).epsilon(1e-10));
  }
  const auto half = constants(1, FracOrder(0.5));
  CHECK(half.kappa_ds == doctest::Approx(1.0 / M_PI).epsilon(1e-14));
  CHECK(half.c_ds == doctest::Approx(1.0 / M_PI).epsilon(1e-14));
  CHECK(half.mu_s == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Gauss-Jacobi integrates weighted polynomials exactly") {
  const auto r = quad::gauss_jacobi_left(20, -0.4, 1.0);
  CHECK(r.apply([](double y) { return y * y; }) == doctest::Approx(1.0 / 2.6).epsilon(1e-14));
  const auto lag = quad::gauss_laguerre(16);
  CHECK(lag.apply([](double t) { return t * t * t; }) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("adaptive integration handles breakpoints and tails") {
  auto f = [](double x) { return std::abs(x - 0.3); };
  const std::vector<double> bp{0.3};
  CHECK(quad::integrate(f, 0.0, 1.0, 1e-13, bp) == doctest::Approx(0.29).epsilon(1e-13));
  CHECK(quad::integrate_tail([](double x) { return 1.0 / (x * x * x); }, 2.0, 1e-13) ==
        doctest::Approx(0.125).epsilon(1e-11));
}
