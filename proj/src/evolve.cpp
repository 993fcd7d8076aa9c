#include "fracfilt/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "fracfilt/errors.hpp"
#include "fracfilt/extension.hpp"

namespace fracfilt {

namespace {

using Vec = std::vector<double>;

double sup_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

// Matrix-free work for one resolvent step.
class StepOperator {
public:
  StepOperator(const DirichletBasis& basis, double s, double tau)
      : basis_(basis), s_(s), tau_(tau), tmp_(basis.size()), tmp2_(basis.size()),
        coeffs_(basis.size()) {}

  void apply_s(const Vec& in, Vec& out) const { basis_.apply_power(in, s_, out); }

  // F(u) = u + tau S Phi_eps(u) - un.
  void residual(const Vec& u, const Vec& un, const Nonlinearity& phi, double eps, Vec& out) const {
    for (std::size_t j = 0; j < u.size(); ++j) tmp_[j] = phi.phi(u[j]) + eps * u[j];
    apply_s(tmp_, out);
    for (std::size_t j = 0; j < u.size(); ++j) out[j] = u[j] + tau_ * out[j] - un[j];
  }

  // Solves (I + tau S D) delta = r through z with
  // (I + tau D^{1/2} S D^{1/2}) z = D^{1/2} r and delta = r - tau S D^{1/2} z.
  int solve_jacobian(const Vec& d, const Vec& r, Vec& delta, double tol, int max_iter) const {
    const std::size_t n = r.size();
    Vec sq(n);
    for (std::size_t j = 0; j < n; ++j) sq[j] = std::sqrt(std::max(d[j], 0.0));
    const double dbar = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);

    auto apply_a = [&](const Vec& z, Vec& out) {
      for (std::size_t j = 0; j < n; ++j) tmp_[j] = sq[j] * z[j];
      apply_s(tmp_, tmp2_);
      for (std::size_t j = 0; j < n; ++j) out[j] = z[j] + tau_ * sq[j] * tmp2_[j];
    };
    // Preconditioner (I + tau dbar S)^{-1}, diagonal in the eigenbasis.
    const auto lambda = basis_.eigenvalues();
    auto precond = [&](const Vec& in, Vec& out) {
      basis_.analyze(in, coeffs_);
      for (std::size_t k = 0; k < n; ++k) coeffs_[k] /= 1.0 + tau_ * dbar * std::pow(lambda[k], s_);
      basis_.synthesize(coeffs_, out);
    };

    Vec b(n), z(n, 0.0), res(n), p(n), q(n), y(n);
    for (std::size_t j = 0; j < n; ++j) b[j] = sq[j] * r[j];
    int iterations = 0;
    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm > 0.0) {
      res = b;
      precond(res, y);
      p = y;
      double rho = dot(res, y);
      for (; iterations < max_iter; ++iterations) {
        if (std::sqrt(dot(res, res)) <= tol * bnorm) break;
        apply_a(p, q);
        const double alpha = rho / dot(p, q);
        for (std::size_t j = 0; j < n; ++j) {
          z[j] += alpha * p[j];
          res[j] -= alpha * q[j];
        }
        precond(res, y);
        const double rho_next = dot(res, y);
        const double beta = rho_next / rho;
        rho = rho_next;
        for (std::size_t j = 0; j < n; ++j) p[j] = y[j] + beta * p[j];
      }
    }
    for (std::size_t j = 0; j < n; ++j) tmp_[j] = sq[j] * z[j];
    apply_s(tmp_, tmp2_);
    delta.resize(n);
    for (std::size_t j = 0; j < n; ++j) delta[j] = r[j] - tau_ * tmp2_[j];
    return iterations;
  }

private:
  const DirichletBasis& basis_;
  double s_;
  double tau_;
  mutable Vec tmp_;
  mutable Vec tmp2_;
  mutable Vec coeffs_;
};

void check_same_times(const Trajectory& a, const Trajectory& b) {
  if (a.fields.empty() || a.times.size() != b.times.size()) {
    throw SizeMismatch("trajectories do not share their times");
  }
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    if (std::abs(a.times[i] - b.times[i]) > 1e-12 * (1.0 + std::abs(a.times[i]))) {
      throw SizeMismatch("trajectories do not share their times");
    }
  }
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (!(cfg.tau > 0.0) || !std::isfinite(cfg.tau)) throw ConfigError("tau", "must be positive");
  if (!std::isfinite(cfg.eps)) throw ConfigError("eps", "must be finite");
  if (!(cfg.newton_tol > 0.0)) throw ConfigError("newton_tol", "must be positive");
  if (cfg.newton_max_iter < 1) throw ConfigError("newton_max_iter", "must be at least 1");
  if (cfg.damping < 0) throw ConfigError("damping", "must be nonnegative");
  if (!(cfg.cg_tol > 0.0)) throw ConfigError("cg_tol", "must be positive");
  if (cfg.cg_max_iter < 1) throw ConfigError("cg_max_iter", "must be at least 1");
}

double effective_eps(const SolverConfig& cfg, const Nonlinearity& phi, const Field& u0) {
  if (cfg.eps >= 0.0) return cfg.eps;
  if (!phi.degenerate()) return 0.0;
  return 1e-8 * std::max(std::abs(u0.max_value()), std::abs(u0.min_value()));
}

StepResult resolvent_step(const Field& un, const SolverConfig& cfg, const Nonlinearity& phi,
                          FracOrder s) {
  validate(cfg);
  const double eps = std::max(cfg.eps, 0.0);
  const auto& basis = un.basis();
  const std::size_t n = un.size();
  StepOperator op(basis, s.value(), cfg.tau);

  const Vec target(un.values().begin(), un.values().end());
  Vec u = target;
  Vec f(n), trial(n), ftrial(n), d(n), r(n), delta(n);
  op.residual(u, target, phi, eps, f);
  double norm = sup_abs(f);

  StepDiagnostics diag;
  while (norm > cfg.newton_tol) {
    if (diag.newton_iterations >= cfg.newton_max_iter) {
      std::ostringstream os;
      os << "resolvent_step: Newton stalled after " << diag.newton_iterations
         << " iterations, residual " << norm << " (tau " << cfg.tau << ", eps " << eps << ")";
      throw NumericalError(os.str());
    }
    ++diag.newton_iterations;
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = phi.dphi(u[j]) + eps;
      r[j] = -f[j];
    }
    diag.cg_iterations += op.solve_jacobian(d, r, delta, cfg.cg_tol, cfg.cg_max_iter);

    double step = 1.0;
    double trial_norm = 0.0;
    for (int h = 0;; ++h) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = u[j] + step * delta[j];
      op.residual(trial, target, phi, eps, ftrial);
      trial_norm = sup_abs(ftrial);
      if (trial_norm < norm || h >= cfg.damping) break;
      step *= 0.5;
      ++diag.halvings;
    }
    if (!(trial_norm < norm)) {
      if (norm <= 1e3 * cfg.newton_tol) break;
      // No descent in the sup norm along the whole ladder: take the full
      // Newton step and let the iteration limit decide.
      for (std::size_t j = 0; j < n; ++j) trial[j] = u[j] + delta[j];
      op.residual(trial, target, phi, eps, ftrial);
      trial_norm = sup_abs(ftrial);
    }
    u.swap(trial);
    f.swap(ftrial);
    norm = trial_norm;
  }
  diag.residual = norm;
  return {Field::from_values(un.basis_ptr(), std::move(u)), diag};
}

std::vector<double> Trajectory::sup_norms() const {
  std::vector<double> out;
  out.reserve(fields.size());
  for (const auto& f : fields) out.push_back(std::max(std::abs(f.max_value()), std::abs(f.min_value())));
  return out;
}

Field Trajectory::at(double t) const {
  if (times.empty()) throw DomainError("Trajectory::at: empty trajectory");
  if (t <= times.front()) return fields.front();
  if (t >= times.back()) return fields.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
  const double theta = (t - times[i]) / (times[i + 1] - times[i]);
  return fields[i] * (1.0 - theta) + fields[i + 1] * theta;
}

Trajectory evolve(const Field& u0, double T, const SolverConfig& cfg, const Nonlinearity& phi,
                  FracOrder s) {
  validate(cfg);
  if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("evolve: T must be nonnegative");
  const long steps = T == 0.0 ? 0 : std::max(1L, static_cast<long>(std::ceil(T / cfg.tau - 1e-9)));
  SolverConfig step_cfg = cfg;
  step_cfg.eps = effective_eps(cfg, phi, u0);
  if (steps > 0) step_cfg.tau = T / static_cast<double>(steps);

  Trajectory traj;
  traj.eps = step_cfg.eps;
  traj.times.reserve(steps + 1);
  traj.fields.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.fields.push_back(u0);
  for (long i = 1; i <= steps; ++i) {
    auto result = resolvent_step(traj.fields.back(), step_cfg, phi, s);
    traj.times.push_back(i == steps ? T : static_cast<double>(i) * step_cfg.tau);
    traj.fields.push_back(std::move(result.u));
    traj.diagnostics.push_back(result.diagnostics);
  }
  return traj;
}

ComparisonReport compare(const Field& u0, const Field& w0, double T, const SolverConfig& cfg,
                         const Nonlinearity& phi, FracOrder s) {
  if (u0.basis_ptr() != w0.basis_ptr()) throw SizeMismatch("compare: data on different bases");
  for (std::size_t j = 0; j < u0.size(); ++j) {
    if (u0.values()[j] > w0.values()[j]) throw DomainError("compare: need u0 <= w0");
  }
  // Both runs must see the same regularization.
  SolverConfig shared = cfg;
  shared.eps = effective_eps(cfg, phi, w0);
  ComparisonReport rep;
  rep.lower = evolve(u0, T, shared, phi, s);
  rep.upper = evolve(w0, T, shared, phi, s);
  rep.min_gap = INFINITY;
  rep.min_value = INFINITY;
  rep.max_value = -INFINITY;
  rep.max_initial = std::max(std::abs(w0.max_value()), std::abs(u0.max_value()));
  for (std::size_t i = 0; i < rep.lower.fields.size(); ++i) {
    const auto& a = rep.lower.fields[i];
    const auto& b = rep.upper.fields[i];
    for (std::size_t j = 0; j < a.size(); ++j) rep.min_gap = std::min(rep.min_gap, b.values()[j] - a.values()[j]);
    rep.min_value = std::min({rep.min_value, a.min_value(), b.min_value()});
    rep.max_value = std::max({rep.max_value, a.max_value(), b.max_value()});
  }
  return rep;
}

MinimalReport minimal_solution(const std::function<double(double)>& u0, const MinimalSetup& setup,
                               const SolverConfig& cfg, const Nonlinearity& phi, FracOrder s) {
  if (setup.radii.empty() || setup.truncations.empty()) {
    throw ConfigError("radii", "need at least one radius and one truncation");
  }
  if (!std::is_sorted(setup.radii.begin(), setup.radii.end()) ||
      !std::is_sorted(setup.truncations.begin(), setup.truncations.end())) {
    throw ConfigError("radii", "radii and truncations must be increasing");
  }
  if (!phi.phi0_zero()) throw DomainError("minimal_solution: need Phi(0) = 0");

  std::vector<BasisPtr> bases;
  for (double R : setup.radii) bases.push_back(build_basis_with_spacing(R, setup.spacing));

  // One regularization for the whole family.
  double sup0 = 0.0;
  for (double x : bases.back()->nodes()) sup0 = std::max(sup0, std::abs(u0(x)));
  SolverConfig shared = cfg;
  if (shared.eps < 0.0) shared.eps = phi.degenerate() ? 1e-8 * sup0 : 0.0;

  MinimalReport rep;
  rep.window = std::min(setup.window, setup.radii.front());
  const std::size_t nk = setup.truncations.size(), nr = setup.radii.size();
  for (double k : setup.truncations) {
    for (std::size_t ir = 0; ir < nr; ++ir) {
      auto data = Field::from_function(bases[ir], [&](double x) { return std::abs(x) < k ? u0(x) : 0.0; });
      rep.solutions.push_back({k, setup.radii[ir], evolve(data, setup.T, shared, phi, s)});
    }
  }
  auto entry = [&](std::size_t ik, std::size_t ir) -> const Trajectory& {
    return rep.solutions[ik * nr + ir].trajectory;
  };
  // Node j of B_R1 sits at index j + offset on B_R2.
  auto offset = [&](std::size_t i1, std::size_t i2) {
    return static_cast<std::size_t>(std::llround((setup.radii[i2] - setup.radii[i1]) / setup.spacing));
  };

  for (std::size_t ik = 0; ik < nk; ++ik) {
    for (std::size_t i1 = 0; i1 < nr; ++i1) {
      for (std::size_t i2 = i1 + 1; i2 < nr; ++i2) {
        const auto& a = entry(ik, i1);
        const auto& b = entry(ik, i2);
        check_same_times(a, b);
        const std::size_t off = offset(i1, i2);
        for (std::size_t t = 0; t < a.fields.size(); ++t) {
          const auto va = a.fields[t].values();
          const auto vb = b.fields[t].values();
          for (std::size_t j = 0; j < va.size(); ++j) {
            rep.domain_violation = std::max(rep.domain_violation, va[j] - vb[j + off]);
          }
        }
      }
    }
  }
  for (std::size_t ir = 0; ir < nr; ++ir) {
    for (std::size_t k1 = 0; k1 < nk; ++k1) {
      for (std::size_t k2 = k1 + 1; k2 < nk; ++k2) {
        const auto& a = entry(k1, ir);
        const auto& b = entry(k2, ir);
        for (std::size_t t = 0; t < a.fields.size(); ++t) {
          const auto va = a.fields[t].values();
          const auto vb = b.fields[t].values();
          for (std::size_t j = 0; j < va.size(); ++j) {
            rep.truncation_violation = std::max(rep.truncation_violation, va[j] - vb[j]);
          }
        }
      }
    }
  }
  for (std::size_t ir = 0; ir + 1 < nr; ++ir) {
    const auto& a = entry(nk - 1, ir);
    const auto& b = entry(nk - 1, ir + 1);
    const std::size_t off = offset(ir, ir + 1);
    const auto nodes = bases[ir]->nodes();
    double diff = 0.0;
    for (std::size_t t = 0; t < a.fields.size(); ++t) {
      const auto va = a.fields[t].values();
      const auto vb = b.fields[t].values();
      for (std::size_t j = 0; j < va.size(); ++j) {
        if (std::abs(nodes[j]) <= rep.window + 1e-12) diff = std::max(diff, std::abs(va[j] - vb[j + off]));
      }
    }
    rep.successive_differences.push_back(diff);
  }
  rep.limit = entry(nk - 1, nr - 1).final();
  rep.cauchy_estimate = rep.successive_differences.empty() ? 0.0 : rep.successive_differences.back();
  rep.monotone = rep.domain_violation <= setup.tolerance && rep.truncation_violation <= setup.tolerance;
  return rep;
}

ShiftReduction shift_reduce(const Field& u0, const Nonlinearity& phi) {
  const double c = u0.min_value();
  Vec v(u0.values().begin(), u0.values().end());
  for (double& x : v) x = std::max(x - c, 0.0);
  return {Field::from_values(u0.basis_ptr(), std::move(v)), phi.shifted(c), c};
}

Trajectory unshift(const Trajectory& traj, double c) {
  Trajectory out;
  out.times = traj.times;
  out.diagnostics = traj.diagnostics;
  out.eps = traj.eps;
  for (const auto& f : traj.fields) {
    Vec v(f.values().begin(), f.values().end());
    for (double& x : v) x += c;
    out.fields.push_back(Field::from_values(f.basis_ptr(), std::move(v)));
  }
  return out;
}

Trajectory steklov_average(const Trajectory& traj, double h) {
  if (!(h > 0.0)) throw DomainError("steklov_average: window must be positive");
  if (traj.times.size() < 2 || h > traj.times.back() - traj.times.front()) {
    throw DomainError("steklov_average: window exceeds the trajectory span");
  }
  const auto& times = traj.times;
  const std::size_t n = traj.fields.front().size();
  // Exact integral of the piecewise linear interpolant over [a, b].
  auto integral = [&](double a, double b) {
    Vec acc(n, 0.0);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
      const double lo = std::max(a, times[i]);
      const double hi = std::min(b, times[i + 1]);
      if (!(hi > lo)) continue;
      const Field fl = traj.at(lo);
      const Field fh = traj.at(hi);
      for (std::size_t j = 0; j < n; ++j) acc[j] += 0.5 * (hi - lo) * (fl.values()[j] + fh.values()[j]);
    }
    return acc;
  };
  Trajectory out;
  out.eps = traj.eps;
  const double end = times.back();
  for (double t : times) {
    if (t + h > end * (1.0 + 1e-14)) break;
    Vec v = integral(t, std::min(t + h, end));
    for (double& x : v) x /= h;
    out.times.push_back(t);
    out.fields.push_back(Field::from_values(traj.fields.front().basis_ptr(), std::move(v)));
  }
  return out;
}

LocalEnergyReport local_energy_check(const Trajectory& traj, double r, const Nonlinearity& phi,
                                     FracOrder s, double constant) {
  if (traj.fields.empty()) throw DomainError("local_energy_check: empty trajectory");
  const auto& basis = traj.initial().basis();
  const double R = basis.radius();
  if (!(r > 0.25 && r < 0.5 * R)) throw DomainError("local_energy_check: need 1/4 < r < R/2");
  const double sv = s.value();

  LocalEnergyReport rep;
  rep.radius = r;
  rep.constant = constant;

  std::vector<Field> flux;
  flux.reserve(traj.fields.size() - 1);
  for (std::size_t i = 1; i < traj.fields.size(); ++i) {
    Vec v(traj.fields[i].values().begin(), traj.fields[i].values().end());
    for (double& x : v) x = phi.phi(x);
    flux.push_back(Field::from_values(traj.fields[i].basis_ptr(), std::move(v)));
  }
  const auto energies = local_weighted_energy(flux, s, r);
  // Right endpoint in time, matching the implicit scheme.
  for (std::size_t i = 0; i < energies.size(); ++i) {
    rep.lhs += (traj.times[i + 1] - traj.times[i]) * energies[i];
  }

  const auto fc = constants(1, s);
  const auto nodes = basis.nodes();
  const auto u0 = traj.initial().values();
  double potential = 0.0, phimax = 0.0;
  for (std::size_t j = 0; j < u0.size(); ++j) {
    if (std::abs(nodes[j]) < 2.0 * r) potential += basis.spacing() * phi.psi(u0[j]);
    phimax = std::max(phimax, std::abs(phi.phi(u0[j])));
  }
  rep.potential_term = 2.0 / fc.mu_s * potential;
  const double rho = 2.0 * r;
  rep.volume_term = phimax * phimax * std::pow(rho, 3.0 - 2.0 * sv) * boost::math::beta(1.0 - sv, 1.5);
  rep.rhs = rep.potential_term + constant * rep.volume_term;
  rep.measured_constant =
      rep.volume_term > 0.0 ? std::max(0.0, (rep.lhs - rep.potential_term) / rep.volume_term) : 0.0;
  rep.holds = rep.lhs <= rep.rhs;
  return rep;
}

}  // namespace fracfilt
