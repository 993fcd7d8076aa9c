#include <doctest.h>

#include <cmath>

#include "fracfilt/duality.hpp"
#include "fracfilt/errors.hpp"

using namespace fracfilt;

namespace {

double bump(double x, double c, double w) {
  const double z = (x - c) / w;
  return std::abs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0;
}

Trajectory run(const Field& u0, double tau, const Nonlinearity& phi) {
  SolverConfig cfg;
  cfg.tau = tau;
  return evolve(u0, 0.5, cfg, phi, FracOrder(0.5));
}

}  // namespace

TEST_CASE("coefficient from two trajectories") {
  const auto b = build_basis(1.0, 1, 64);
  const Field u0 = Field::from_function(b, [](double x) { return bump(x, 0.0, 0.6); });
  const auto phi = Nonlinearity::porous_medium(2.0);
  const auto u = run(u0, 1.0 / 16, phi);
  const auto w = run(u0 * 0.5, 1.0 / 16, phi);
  const auto a = build_coefficient(u, w, phi);
  for (std::size_t i = 0; i < a.a.size(); ++i) {
    for (std::size_t j = 0; j < a.a[i].size(); ++j) {
      const double uu = u.fields[i].values()[j], ww = w.fields[i].values()[j];
      if (uu != ww) CHECK(a.a[i][j] == doctest::Approx(uu + ww).epsilon(1e-9).scale(1e-6));
      CHECK(a.a[i][j] >= 0.0);
      CHECK(a.a[i][j] <= a.lipschitz);
    }
  }
  const auto same = build_coefficient(u, u, phi);
  CHECK(same.sup() == 0.0);
  const auto lin = build_coefficient(run(u0, 1.0 / 16, Nonlinearity::linear()),
                                     run(u0 * 0.5, 1.0 / 16, Nonlinearity::linear()), Nonlinearity::linear());
  CHECK(lin.a[3][32] == doctest::Approx(1.0));
  CHECK_THROWS_AS(build_coefficient(u, run(u0, 1.0 / 8, phi), phi), SizeMismatch);
}

TEST_CASE("smoothed coefficient bounds and convergence") {
  const auto b = build_basis(1.0, 1, 128);
  const Field u0 = Field::from_function(b, [](double x) { return bump(x, 0.0, 0.6); });
  const auto phi = Nonlinearity::porous_medium(2.0);
  const auto a = build_coefficient(run(u0, 1.0 / 32, phi), run(u0 * 0.7, 1.0 / 32, phi), phi);
  double prev = INFINITY;
  for (int k : {4, 16, 64}) {
    const auto c = smooth_coefficient(a, k, 8);
    CHECK(c.min_value >= 1.0 / (2.0 * k));
    CHECK(c.max_value <= 2.0 / k + a.sup());
    CHECK(c.approx_error < prev);
    prev = c.approx_error;
  }
  double prev_avg = INFINITY;
  for (int n : {2, 4, 8}) {
    const auto c = smooth_coefficient(a, 16, n);
    CHECK(c.time_average_error < prev_avg);
    prev_avg = c.time_average_error;
  }
}

TEST_CASE("backward solve with unit coefficient is the heat semigroup") {
  const auto b = build_basis(1.0, 1, 64);
  const FracOrder s(0.5);
  const Field chi = Field::from_function(b, [](double x) { return bump(x, 0.1, 0.6); });
  const auto beta = SmoothedCoefficient::constant(b, 0.5, 4, 1.0);
  const auto psi = backward_solve(beta, chi, s, 64);
  CHECK(psi.times.front() == 0.0);
  CHECK(psi.times.back() == 0.5);
  std::vector<double> c(chi.coeffs().begin(), chi.coeffs().end());
  for (int k = 0; k < 64; ++k) c[k] *= std::exp(-std::sqrt(b->eigenvalues()[k]) * 0.5);
  CHECK((psi.initial() - Field::from_coeffs(b, c)).l2_norm() < 1e-12);

  // Forward-backward duality for the linear problem.
  const Field u0 = Field::from_function(b, [](double x) { return bump(x, -0.2, 0.5); });
  std::vector<double> f(u0.coeffs().begin(), u0.coeffs().end());
  for (int k = 0; k < 64; ++k) f[k] *= std::exp(-std::sqrt(b->eigenvalues()[k]) * 0.5);
  CHECK(Field::from_coeffs(b, f).inner(chi) == doctest::Approx(u0.inner(psi.initial())).epsilon(1e-12));

  const auto zero = backward_solve(beta, Field::zero(b), s, 16);
  for (const auto& g : zero.fields) CHECK(g.l2_norm() == 0.0);
}

TEST_CASE("single mode energy identity") {
  const auto b = build_basis(1.0, 1, 32);
  const FracOrder s(0.5);
  const auto beta = SmoothedCoefficient::constant(b, 0.5, 2, 1.0);
  const Field chi = Field::mode(b, 1);
  const auto id = energy_identity_check(backward_solve(beta, chi, s, 64), beta, chi, s);
  CHECK(id.rhs == doctest::Approx(0.5 * std::sqrt(b->eigenvalue(1))));
}

TEST_CASE("backward solve is Markov and balances energy at first order") {
  const auto b = build_basis(1.0, 1, 64);
  const FracOrder s(0.5);
  const Field u0 = Field::from_function(b, [](double x) { return 1.5 * bump(x, 0.0, 0.5); });
  const auto phi = Nonlinearity::porous_medium(2.0);
  const auto a = build_coefficient(run(u0, 1.0 / 16, phi), run(u0 * 0.5, 1.0 / 16, phi), phi);
  const auto beta = smooth_coefficient(a, 8, 4);
  const Field chi = Field::from_function(b, [](double x) { return bump(x, 0.0, 0.7); });
  std::vector<double> res;
  for (int steps : {128, 256, 512}) {
    const auto psi = backward_solve(beta, chi, s, steps);
    for (const auto& f : psi.fields) {
      CHECK(f.min_value() >= -1e-8);
      CHECK(f.max_value() <= 1.0 + 1e-8);
    }
    res.push_back(energy_identity_check(psi, beta, chi, s).residual);
  }
  CHECK(res[0] / res[1] == doctest::Approx(2.0).epsilon(0.15));
  CHECK(res[1] / res[2] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("uniqueness witness") {
  const auto b = build_basis(1.0, 1, 64);
  const FracOrder s(0.5);
  const auto phi = Nonlinearity::porous_medium(2.0);
  const Field u0 = Field::from_function(b, [](double x) { return bump(x, 0.0, 0.5); });
  const Field chi = Field::from_function(b, [](double x) { return bump(x, 0.1, 0.6); });
  const auto u = run(u0, 1.0 / 16, phi);
  const auto same = uniqueness_witness(u, u, chi, 8, 4, phi, s, 64);
  CHECK(same.witness == 0.0);
  const auto w = run(u0, 1.0 / 32, phi);
  double prev = INFINITY;
  for (int k : {4, 16, 64}) {
    const auto rep = uniqueness_witness(u, w, chi, k, 8, phi, s, 256);
    CHECK(std::abs(rep.witness) <= rep.bound + 1e-6);
    CHECK(rep.controlled <= rep.bound * (1.0 + 1e-6));
    CHECK(rep.bound < prev);
    prev = rep.bound;
  }
}
