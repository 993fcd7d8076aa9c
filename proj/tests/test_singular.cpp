#include <doctest.h>

#include <cmath>

#include "fracfilt/errors.hpp"
#include "fracfilt/quadrature.hpp"
#include "fracfilt/singular.hpp"

using namespace fracfilt;

TEST_CASE("Hurwitz zeta reduces to Riemann zeta") {
  CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-14));
  CHECK(hurwitz_zeta(3.0, 2.0) == doctest::Approx(1.2020569031595942 - 1.0).epsilon(1e-13));
}

TEST_CASE("fractional Laplacian of a cosine is a multiple of it") {
  for (double sv : {0.25, 0.5, 0.75}) {
    const FracOrder s(sv);
    const double k = 3.0;
    SmoothFunction f;
    f.value = [k](double x) { return std::cos(k * x); };
    f.second_derivative = [k](double x) { return -k * k * std::cos(k * x); };
    f.period = 2.0 * M_PI / k;
    f.scale = 1.0 / k;
    CHECK(frac_lap_pv(f, s, 0.3) == doctest::Approx(std::pow(k, 2.0 * sv) * std::cos(0.9)).epsilon(1e-8));
  }
}

TEST_CASE("fractional Laplacian of a Gaussian matches its Fourier integral") {
  for (double sv : {0.25, 0.75}) {
    const FracOrder s(sv);
    SmoothFunction g;
    g.value = [](double x) { return std::exp(-x * x / 2.0); };
    g.second_derivative = [](double x) { return (x * x - 1.0) * std::exp(-x * x / 2.0); };
    g.decay_exponent = 50.0;
    for (double x : {0.0, 0.7, 3.0}) {
      auto fo = [&](double xi) { return std::pow(xi, 2.0 * sv) * std::exp(-xi * xi / 2.0) * std::cos(xi * x); };
      const double oracle =
          quad::integrate(fo, 0.0, 40.0, 1e-14, std::vector<double>{1, 2, 4, 8}) * 2.0 / std::sqrt(2.0 * M_PI);
      CHECK(std::abs(frac_lap_pv(g, s, x) - oracle) < 1e-8);
    }
  }
}

TEST_CASE("fractional Laplacian of a compactly supported function has zero integral") {
  const FracOrder s(0.5);
  const CutoffGamma g(1.0);
  const auto f = g.as_function();
  auto lap = [&](double x) { return frac_lap_pv(f, s, x); };
  const double inner = quad::integrate(lap, 0.0, 3.0, 1e-9, std::vector<double>{1.0, 2.0});
  const double tail = quad::integrate_tail(lap, 3.0, 1e-9);
  CHECK(std::abs(2.0 * (inner + tail)) < 1e-6);
}

TEST_CASE("cut-off profile") {
  const CutoffGamma g(2.0);
  CHECK(g(0.0) == 1.0);
  CHECK(g(2.0) == 1.0);
  CHECK(g(4.0) == 0.0);
  CHECK(g(3.0) == doctest::Approx(0.5));
  const double h = 1e-6;
  CHECK(g.derivative(2.7) == doctest::Approx((g(2.7 + h) - g(2.7 - h)) / (2 * h)).epsilon(1e-7));
  CHECK(g.second_derivative(2.7) ==
        doctest::Approx((g.derivative(2.7 + h) - g.derivative(2.7 - h)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("weight h bounds and parameter checks") {
  const FracOrder s(0.5);
  const WeightH h(1.5, 1, s);
  for (double x : {0.0, 0.5, 1.0, 3.0, 100.0}) {
    const double ref = 1.0 / (1.0 + std::pow(std::abs(x), 1.5));
    CHECK(h(x) >= h.c1() * ref * (1 - 1e-14));
    CHECK(h(x) <= h.c2() * ref * (1 + 1e-14));
  }
  CHECK_THROWS_AS(WeightH(2.5, 1, s), ConfigError);
  CHECK_THROWS_AS(check_holder_exponent(1, FracOrder(0.25), 3.0), ConfigError);
  CHECK_NOTHROW(check_holder_exponent(1, FracOrder(0.25), 1.5));
  CHECK(default_holder_exponent(1, s) == doctest::Approx(1.1));
}

TEST_CASE("cut-off scaling slopes") {
  const FracOrder s(0.5);
  const auto scan = cutoff_scaling_scan(s, {1.0, 2.0, 4.0, 8.0}, 1.1, default_weight_alpha(1, s));
  CHECK(scan.rows.size() == 4);
  CHECK(scan.lap_slope == doctest::Approx(-1.0).epsilon(0.15));
  CHECK(scan.tp_slope == doctest::Approx(-0.55).epsilon(0.15));
  for (const auto& r : scan.rows) {
    CHECK(r.lap_scaled <= 2.0 * scan.rows.front().lap_scaled);
    CHECK(r.lap_scaled >= 0.5 * scan.rows.front().lap_scaled);
  }
}

TEST_CASE("loglog slope of a power law") {
  CHECK(loglog_slope({1, 2, 4}, {3, 0.75, 0.1875}) == doctest::Approx(-2.0));
}
