#include <doctest.h>

#include <cmath>

#include "fracfilt/errors.hpp"
#include "fracfilt/extension.hpp"
#include "fracfilt/quadrature.hpp"

using namespace fracfilt;

TEST_CASE("profile equals the exponential at s = 1/2") {
  const FracOrder s(0.5);
  for (double lambda : {1.0, 25.0, 900.0}) {
    for (double y : {1e-4, 0.01, 0.3, 2.0}) {
      CHECK(profile_psi(lambda, s, y) == doctest::Approx(std::exp(-std::sqrt(lambda) * y)).epsilon(1e-12));
      CHECK(profile_flux(lambda, s, y) ==
            doctest::Approx(-std::sqrt(lambda) * std::exp(-std::sqrt(lambda) * y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("profile starts at one and decreases") {
  for (double sv : {0.2, 0.5, 0.8}) {
    const FracOrder s(sv);
    CHECK(profile_psi(4.0, s, 0.0) == 1.0);
    double prev = 1.0;
    for (double y : log_spaced(1e-6, 5.0, 30)) {
      const double v = profile_psi(4.0, s, y);
      CHECK(v < prev);
      CHECK(v > 0.0);
      prev = v;
    }
  }
}

TEST_CASE("profile derivative agrees with finite differences") {
  const FracOrder s(0.3);
  const double h = 1e-6;
  for (double y : {0.05, 0.5, 2.0}) {
    const double fd = (profile_psi(9.0, s, y + h) - profile_psi(9.0, s, y - h)) / (2.0 * h);
    CHECK(profile_psi_derivative(9.0, s, y) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("DtN flux approaches the spectral operator as y decreases") {
  const auto b = build_basis(1.0, 1, 128);
  const Field f = Field::mode(b, 1) + Field::mode(b, 3) * 0.5;
  for (double sv : {0.25, 0.5, 0.75}) {
    const FracOrder s(sv);
    const Field target = spectral_frac_laplacian(f, s);
    double prev = INFINITY;
    for (double y : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double e = (dtn_flux(f, s, y) - target).l2_norm();
      CHECK(e < prev);
      prev = e;
    }
  }
  // At s = 1/4 the approach is fast enough for 1e-3 at y = 1e-4.
  const FracOrder quarter(0.25);
  CHECK((dtn_flux(f, quarter, 1e-4) - spectral_frac_laplacian(f, quarter)).l2_norm() < 1e-3);
}

TEST_CASE("weighted energy equals the H^s norm") {
  const auto b = build_basis(1.0, 1, 64);
  const Field f = Field::mode(b, 1) + Field::mode(b, 4) * 0.5;
  for (double sv : {0.3, 0.5, 0.7}) {
    const FracOrder s(sv);
    const std::vector<double> y{0.1};
    const auto rep = weighted_energy(extend_cylinder(f, s, y));
    CHECK(rep.energy == doctest::Approx(hs_norm(f, s)).epsilon(sv == 0.5 ? 1e-10 : 1e-6));
    CHECK(rep.tail_converged);
  }
}

TEST_CASE("single mode energy") {
  const auto b = build_basis(1.0, 1, 32);
  const FracOrder s(0.5);
  const std::vector<double> y{0.5};
  const auto rep = weighted_energy(extend_cylinder(Field::mode(b, 1), s, y));
  CHECK(rep.energy * rep.energy == doctest::Approx(std::sqrt(b->eigenvalue(1))).epsilon(1e-12));
}

TEST_CASE("energy needs the boundary datum") {
  const ExtensionField bare(FracOrder(0.5), {0.0}, {0.1}, {1.0});
  CHECK_THROWS_AS(weighted_energy(bare), FeatureError);
}

TEST_CASE("local energy grows with the radius") {
  const auto b = build_basis(2.0, 1, 64);
  const std::vector<Field> fields{Field::mode(b, 1) + Field::mode(b, 2) * 0.4};
  const FracOrder s(0.4);
  const double small = local_weighted_energy(fields, s, 0.5)[0];
  const double large = local_weighted_energy(fields, s, 1.0)[0];
  CHECK(small > 0.0);
  CHECK(small < large);
}

TEST_CASE("energy weight") {
  const EnergyWeight w(2.0);
  CHECK(w(0.5) == 1.0);
  CHECK(w(1.5) == doctest::Approx(std::exp(-0.25)));
  for (double y : {0.5, 1.3, 2.7}) CHECK(std::abs(w.derivative(y)) <= 2.0 * w(y) + 1e-15);
  const FracOrder s(0.3);
  auto f = [&](double y) { return w(y) * std::pow(y, 0.4); };
  const double direct = quad::integrate(f, 0.0, 2.0, 1e-12, std::vector<double>{1.0}) +
                        quad::integrate_tail(f, 2.0, 1e-12);
  CHECK(w.weighted_mass(s) == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("Poisson kernel has unit mass") {
  for (double sv : {0.25, 0.5, 0.75}) {
    const FracOrder s(sv);
    for (double y : {0.1, 1.0, 10.0}) {
      auto k = [&](double x) { return poisson_kernel(x, y, s); };
      const double mass = 2.0 * (quad::integrate(k, 0.0, 10.0 * y, 1e-13) + quad::integrate_tail(k, 10.0 * y, 1e-13));
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("Poisson extension of constants and far-field decay") {
  const FracOrder s(0.5);
  LineData c;
  c.x0 = -1.0;
  c.h = 0.1;
  c.values.assign(20, 1.0);
  c.exterior = 1.0;
  const auto rc = poisson_extend(c, s, 3.0, std::vector<double>{0.3, 5.0});
  CHECK(rc.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rc.values[1] == doctest::Approx(1.0).epsilon(1e-12));

  const LineData d = sample_line([](double x) { return std::abs(x) < 1.0 ? 1.0 : 0.0; }, 1.0, 2);
  const std::vector<double> xs{20.0, 40.0, 80.0, 160.0};
  const auto ext = poisson_extend(d, s, 1.0, xs);
  CHECK(loglog_slope(xs, ext.values) == doctest::Approx(-2.0).epsilon(0.01));
}

TEST_CASE("centered and general Poisson evaluations agree") {
  const FracOrder s(0.3);
  const LineData d = sample_line([](double x) { return std::exp(-x * x); }, 2.0, 16);
  const auto centers = poisson_extend_at_centers(d, s, 0.2);
  std::vector<double> xs;
  for (std::size_t j = 0; j < d.values.size(); ++j) xs.push_back(d.center(j));
  const auto general = poisson_extend(d, s, 0.2, xs);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    CHECK(centers.values[j] == doctest::Approx(general.values[j]).epsilon(1e-12));
    CHECK(centers.dy[j] == doctest::Approx(general.dy[j]).epsilon(1e-10));
  }
}

TEST_CASE("pairing identity residual shrinks under refinement") {
  SmoothFunction v;
  const double a = 0.5;
  v.value = [a](double x) {
    const double t = x / a;
    return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
  };
  v.second_derivative = [a](double x) {
    const double t = x / a;
    if (std::abs(t) >= 1.0) return 0.0;
    const double q = 1.0 - t * t;
    return std::exp(-1.0 / q) / (a * a) * (4.0 * t * t / (q * q * q * q) - 2.0 / (q * q) - 8.0 * t * t / (q * q * q));
  };
  v.support_radius = a;
  v.scale = 0.05;
  v.knots = {-a, a};
  const auto b = build_basis(1.0, 1, 256);
  const FracOrder s(0.5);
  const auto coarse = check_pairing_identity(v, b, s, 128);
  const auto fine = check_pairing_identity(v, b, s, 256);
  CHECK(fine.residual < 1e-6);
  CHECK(fine.residual * 2.0 <= coarse.residual);
}
