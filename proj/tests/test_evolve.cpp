#include <doctest.h>

#include <cmath>
#include <random>

#include "fracfilt/errors.hpp"
#include "fracfilt/evolve.hpp"

using namespace fracfilt;

namespace {

double bump(double x, double c, double w) {
  const double z = (x - c) / w;
  return std::abs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0;
}

}  // namespace

TEST_CASE("nonlinearities") {
  const auto pme = Nonlinearity::porous_medium(3.0);
  CHECK(pme.phi(-2.0) == doctest::Approx(-8.0));
  CHECK(pme.psi(2.0) == doctest::Approx(4.0));
  CHECK(pme.lipschitz_on(-1.0, 2.0) == doctest::Approx(12.0));
  const auto st = Nonlinearity::stefan();
  CHECK(st.phi(0.5) == 0.0);
  CHECK(st.phi(1.5) == 0.5);
  CHECK(st.psi(3.0) == doctest::Approx(2.0));
  CHECK(st.lipschitz_on(0.0, 0.9) == 0.0);
  CHECK_THROWS_AS(Nonlinearity::porous_medium(0.5), DomainError);

  const auto tab = Nonlinearity::table({0.0, 1.0, 2.0}, {0.0, 0.0, 2.0});
  CHECK(tab.phi(1.5) == doctest::Approx(1.0));
  CHECK(tab.psi(2.0) == doctest::Approx(1.0));
  CHECK(tab.phi(3.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(Nonlinearity::table({0.0, 1.0}, {1.0, 0.0}), DomainError);

  for (const auto& phi : {Nonlinearity::linear(), pme, st, tab}) {
    double prev = -INFINITY;
    for (int i = 0; i <= 400; ++i) {
      const double u = -3.0 + 0.015 * i;
      CHECK(phi.phi(u) >= prev);
      prev = phi.phi(u);
      // Psi is the primitive of Phi.
      const double h = 1e-5;
      CHECK((phi.psi(u + h) - phi.psi(u - h)) / (2 * h) == doctest::Approx(phi.phi(u)).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("shifted nonlinearity vanishes at zero") {
  const auto phi = Nonlinearity::porous_medium(3.0);
  const auto hat = phi.shifted(-1.0);
  CHECK(hat.phi(0.0) == 0.0);
  CHECK(hat.phi(1.0) == doctest::Approx(phi.phi(0.0) - phi.phi(-1.0)));
  CHECK(hat.psi(0.0) == 0.0);
}

TEST_CASE("linear resolvent is diagonal") {
  const auto b = build_basis(1.0, 1, 64);
  const FracOrder s(0.4);
  SolverConfig cfg;
  cfg.tau = 0.1;
  cfg.eps = 0.0;
  const auto step = resolvent_step(Field::mode(b, 1), cfg, Nonlinearity::linear(), s);
  const Field expected = Field::mode(b, 1) * (1.0 / (1.0 + 0.1 * std::pow(b->eigenvalue(1), 0.4)));
  CHECK((step.u - expected).l2_norm() < 1e-12);
}

TEST_CASE("Stefan step below the threshold is the identity") {
  const auto b = build_basis(1.0, 1, 64);
  const Field un = Field::from_function(b, [](double x) { return 0.9 * bump(x, 0.0, 0.8); });
  SolverConfig cfg;
  cfg.eps = 0.0;
  const auto step = resolvent_step(un, cfg, Nonlinearity::stefan(), FracOrder(0.5));
  CHECK((step.u - un).l2_norm() == 0.0);
}

TEST_CASE("porous medium step is accurate and bounded") {
  const auto b = build_basis(1.0, 1, 128);
  const Field un = Field::from_function(b, [](double x) { return 0.5 * (1.0 + std::cos(M_PI * x)); });
  SolverConfig cfg;
  cfg.tau = 1.0 / 16.0;
  cfg.eps = 0.0;
  const auto phi = Nonlinearity::porous_medium(2.0);
  const FracOrder s(0.5);
  const auto step = resolvent_step(un, cfg, phi, s);
  CHECK(step.diagnostics.residual <= 1e-10);
  CHECK(step.u.min_value() >= -1e-12);
  CHECK(step.u.max_value() <= un.max_value() + 1e-12);
  // Independent residual check.
  std::vector<double> p(step.u.values().begin(), step.u.values().end());
  for (double& v : p) v = phi.phi(v);
  const Field r = step.u + spectral_frac_laplacian(Field::from_values(b, p), s) * cfg.tau - un;
  CHECK(r.max_value() < 1e-10);
  CHECK(r.min_value() > -1e-10);
}

TEST_CASE("linear evolution converges at first order") {
  const auto b = build_basis(1.0, 1, 64);
  const FracOrder s(0.5);
  const Field u0 = Field::from_function(b, [](double x) { return bump(x, 0.0, 0.5); });
  std::vector<double> c(u0.coeffs().begin(), u0.coeffs().end());
  for (int k = 0; k < 64; ++k) c[k] *= std::exp(-std::sqrt(b->eigenvalues()[k]) * 0.5);
  const Field exact = Field::from_coeffs(b, c);
  std::vector<double> errs;
  for (double tau : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    SolverConfig cfg;
    cfg.tau = tau;
    errs.push_back((evolve(u0, 0.5, cfg, Nonlinearity::linear(), s).final() - exact).l2_norm());
  }
  CHECK(std::log2(errs[0] / errs[1]) >= 0.9);
  CHECK(std::log2(errs[1] / errs[2]) >= 0.9);
}

TEST_CASE("zero datum stays zero") {
  const auto b = build_basis(1.0, 1, 32);
  const auto traj = evolve(Field::zero(b), 0.25, SolverConfig{}, Nonlinearity::porous_medium(2.0), FracOrder(0.5));
  for (const auto& f : traj.fields) CHECK(f.l2_norm() == 0.0);
  CHECK(traj.times.back() == 0.25);
}

TEST_CASE("solutions stay in [0, sup u0] and keep their order") {
  const auto b = build_basis(1.0, 1, 64);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& phi : {Nonlinearity::linear(), Nonlinearity::porous_medium(2.0), Nonlinearity::stefan()}) {
    for (int i = 0; i < 5; ++i) {
      const double a = 0.5 + 2.0 * unit(rng), c = 0.6 * unit(rng) - 0.3, f = unit(rng);
      const Field w0 = Field::from_function(b, [&](double x) { return a * bump(x, c, 0.5); });
      const Field u0 = w0 * f;
      SolverConfig cfg;
      cfg.tau = 1.0 / 16.0;
      const auto rep = compare(u0, w0, 0.25, cfg, phi, FracOrder(0.5));
      CHECK(rep.min_gap >= -1e-8);
      CHECK(rep.min_value >= -1e-10);
      CHECK(rep.max_value <= rep.max_initial + 1e-10);
    }
  }
  const Field one = Field::from_function(b, [](double x) { return bump(x, 0.0, 0.5); });
  CHECK_THROWS_AS(compare(one, one * 0.5, 0.1, SolverConfig{}, Nonlinearity::linear(), FracOrder(0.5)), DomainError);
  const auto same = compare(one, one, 0.1, SolverConfig{}, Nonlinearity::linear(), FracOrder(0.5));
  CHECK(same.min_gap == 0.0);
}

TEST_CASE("minimal solution family is monotone") {
  MinimalSetup setup;
  setup.radii = {2.0, 4.0};
  setup.truncations = {1.0, 2.0};
  setup.spacing = 1.0 / 8.0;
  setup.T = 0.25;
  SolverConfig cfg;
  cfg.tau = 1.0 / 16.0;
  const auto rep = minimal_solution([](double x) { return 0.5 * (std::abs(x) < 1.5 ? 1.0 : 0.0); }, setup, cfg,
                                    Nonlinearity::porous_medium(2.0), FracOrder(0.5));
  CHECK(rep.solutions.size() == 4);
  CHECK(rep.domain_violation <= 1e-8);
  CHECK(rep.truncation_violation <= 1e-8);
  CHECK(rep.monotone);
  CHECK(rep.limit.has_value());

  const auto zero = minimal_solution([](double) { return 0.0; }, setup, cfg, Nonlinearity::linear(), FracOrder(0.5));
  for (const auto& e : zero.solutions) CHECK(e.trajectory.final().l2_norm() == 0.0);
}

TEST_CASE("shift round trip") {
  const auto b = build_basis(1.0, 1, 64);
  const auto phi = Nonlinearity::porous_medium(3.0);
  const Field u0 = Field::from_function(b, [](double x) { return std::sin(M_PI * (x + 1.0)); });
  const auto red = shift_reduce(u0, phi);
  CHECK(red.c == doctest::Approx(u0.min_value()));
  CHECK(red.data.min_value() >= 0.0);
  CHECK(red.phi.phi(0.0) == 0.0);
  SolverConfig cfg;
  cfg.tau = 1.0 / 16.0;
  cfg.eps = 0.0;
  const auto direct = evolve(u0, 0.25, cfg, phi.minus_constant(phi.phi(red.c)), FracOrder(0.5));
  const auto shifted = unshift(evolve(red.data, 0.25, cfg, red.phi, FracOrder(0.5)), red.c);
  const auto& a = direct.final();
  const auto& c = shifted.final();
  CHECK((a - c).l2_norm() < 1e-9);
  const auto argmax = [](const Field& f) {
    return std::max_element(f.values().begin(), f.values().end()) - f.values().begin();
  };
  CHECK(argmax(a) == argmax(c));

  // Linear case: the shifted problem is the original one.
  const auto lin = Nonlinearity::linear();
  const auto rl = shift_reduce(u0, lin);
  const auto d1 = evolve(u0, 0.25, cfg, lin.minus_constant(lin.phi(rl.c)), FracOrder(0.5));
  const auto d2 = unshift(evolve(rl.data, 0.25, cfg, rl.phi, FracOrder(0.5)), rl.c);
  CHECK((d1.final() - d2.final()).l2_norm() < 1e-10);
}

TEST_CASE("Steklov average") {
  const auto b = build_basis(1.0, 1, 16);
  Trajectory t;
  for (int i = 0; i <= 8; ++i) {
    t.times.push_back(i * 0.125);
    t.fields.push_back(Field::mode(b, 1) * (1.0 + 2.0 * i * 0.125));
  }
  const auto avg = steklov_average(t, 0.25);
  for (std::size_t i = 0; i < avg.times.size(); ++i) {
    const Field expected = Field::mode(b, 1) * (1.0 + 2.0 * (avg.times[i] + 0.125));
    CHECK((avg.fields[i] - expected).l2_norm() < 1e-13);
  }
  CHECK(avg.times.back() == doctest::Approx(0.75));
  Trajectory flat;
  flat.times = {0.0, 0.5, 1.0};
  flat.fields = {Field::mode(b, 2), Field::mode(b, 2), Field::mode(b, 2)};
  CHECK((steklov_average(flat, 0.3).fields[1] - Field::mode(b, 2)).l2_norm() < 1e-14);
  CHECK_THROWS_AS(steklov_average(flat, 2.0), DomainError);
}

TEST_CASE("local energy estimate") {
  const auto b = build_basis(2.0, 1, 64);
  const FracOrder s(0.5);
  const auto phi = Nonlinearity::porous_medium(2.0);
  const Field u0 = Field::from_function(b, [](double x) { return bump(x, 0.0, 0.5); });
  SolverConfig cfg;
  cfg.tau = 1.0 / 16.0;
  const auto traj = evolve(u0, 0.5, cfg, phi, s);
  const auto big = local_energy_check(traj, 0.8, phi, s);
  const auto small = local_energy_check(traj, 0.4, phi, s);
  CHECK(std::isfinite(big.lhs));
  CHECK(big.holds);
  CHECK(small.lhs <= big.lhs);
  const auto zero = local_energy_check(evolve(Field::zero(b), 0.5, cfg, phi, s), 0.8, phi, s);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK_THROWS_AS(local_energy_check(traj, 0.2, phi, s), DomainError);
}
