#include "fracfilt/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fracfilt/errors.hpp"

namespace fracfilt {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

// Snapshot interval (t_{i-1}, t_i] overlapping [lo, hi].
double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

Vec mollify(const DirichletBasis& basis, const Vec& a, double width) {
  const double h = basis.spacing();
  const int n = static_cast<int>(a.size());
  const int reach = static_cast<int>(std::floor(4.0 * width / h));
  Vec kernel(reach + 1);
  for (int m = 0; m <= reach; ++m) {
    const double x = m * h / width;
    kernel[m] = std::exp(-0.5 * x * x);
  }
  Vec out(n);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0, mass = 0.0;
    for (int i = std::max(0, j - reach); i <= std::min(n - 1, j + reach); ++i) {
      const double w = kernel[std::abs(i - j)];
      acc += w * a[i];
      mass += w;
    }
    out[j] = acc / mass;
  }
  return out;
}

bool is_constant(const Vec& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo <= 1e-15 * std::abs(*hi);
}

}  // namespace

double BackwardCoefficient::sup() const {
  double m = 0.0;
  for (const auto& row : a) m = std::max(m, *std::max_element(row.begin(), row.end()));
  return m;
}

BackwardCoefficient build_coefficient(const Trajectory& u, const Trajectory& w, const Nonlinearity& phi) {
  if (u.fields.empty() || u.times.size() != w.times.size()) {
    throw SizeMismatch("build_coefficient: trajectories do not share their times");
  }
  for (std::size_t i = 0; i < u.times.size(); ++i) {
    if (std::abs(u.times[i] - w.times[i]) > 1e-12 * (1.0 + u.times[i])) {
      throw SizeMismatch("build_coefficient: trajectories do not share their times");
    }
    if (u.fields[i].basis_ptr() != w.fields[i].basis_ptr()) {
      throw SizeMismatch("build_coefficient: trajectories live on different grids");
    }
  }
  double lo = INFINITY, hi = -INFINITY;
  for (const auto* t : {&u, &w}) {
    for (const auto& f : t->fields) {
      lo = std::min(lo, f.min_value());
      hi = std::max(hi, f.max_value());
    }
  }
  BackwardCoefficient c;
  c.basis = u.fields.front().basis_ptr();
  c.times = u.times;
  c.lipschitz = phi.lipschitz_on(lo, hi);
  for (std::size_t i = 0; i < u.fields.size(); ++i) {
    const auto uv = u.fields[i].values();
    const auto wv = w.fields[i].values();
    Vec row(uv.size(), 0.0);
    for (std::size_t j = 0; j < uv.size(); ++j) {
      if (uv[j] != wv[j]) {
        const double q = (phi.phi(uv[j]) - phi.phi(wv[j])) / (uv[j] - wv[j]);
        // Cancellation for nearly equal arguments can leave the admissible range.
        row[j] = std::clamp(q, 0.0, c.lipschitz);
      }
    }
    c.a.push_back(std::move(row));
  }
  return c;
}

SmoothedCoefficient SmoothedCoefficient::constant(BasisPtr basis, double T, int n, double value) {
  if (!(T > 0.0) || n < 1 || !(value > 0.0)) throw DomainError("SmoothedCoefficient::constant: bad arguments");
  SmoothedCoefficient c;
  c.k = 0;
  c.n = n;
  for (int h = 0; h <= n; ++h) c.partition.push_back(T * h / n);
  c.pieces.assign(n, Vec(basis->size(), value));
  c.basis = std::move(basis);
  c.min_value = c.max_value = value;
  return c;
}

std::size_t SmoothedCoefficient::piece_at(double t) const {
  const auto it = std::upper_bound(partition.begin(), partition.end(), t);
  const auto i = static_cast<std::ptrdiff_t>(it - partition.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, n - 1));
}

SmoothedCoefficient smooth_coefficient(const BackwardCoefficient& a, int k, int n) {
  if (k < 1 || n < 1) throw DomainError("smooth_coefficient: need k, n >= 1");
  if (a.times.size() < 2) throw DomainError("smooth_coefficient: need at least one time step");
  const auto& basis = *a.basis;
  const double h = basis.spacing();
  const double T = a.times.back();
  const std::size_t m = a.times.size();
  const std::size_t nx = basis.size();

  std::vector<Vec> ak(m);
  for (std::size_t i = 1; i < m; ++i) {
    ak[i] = mollify(basis, a.a[i], 1.0 / k);
    for (double& v : ak[i]) v += 1.0 / k;
  }

  SmoothedCoefficient c;
  c.basis = a.basis;
  c.k = k;
  c.n = n;
  for (int p = 0; p <= n; ++p) c.partition.push_back(T * p / n);
  c.pieces.assign(n, Vec(nx, 0.0));
  for (int p = 0; p < n; ++p) {
    const double len = c.partition[p + 1] - c.partition[p];
    for (std::size_t i = 1; i < m; ++i) {
      const double o = overlap(a.times[i - 1], a.times[i], c.partition[p], c.partition[p + 1]);
      if (o <= 0.0) continue;
      for (std::size_t j = 0; j < nx; ++j) c.pieces[p][j] += o / len * ak[i][j];
    }
  }

  double approx = 0.0, part = 0.0, avg = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    const double dt = a.times[i] - a.times[i - 1];
    for (std::size_t j = 0; j < nx; ++j) {
      const double d = ak[i][j] - a.a[i][j];
      approx += dt * h * d * d / ak[i][j];
    }
    for (int p = 0; p < n; ++p) {
      const double o = overlap(a.times[i - 1], a.times[i], c.partition[p], c.partition[p + 1]);
      if (o <= 0.0) continue;
      for (std::size_t j = 0; j < nx; ++j) {
        const double b = c.pieces[p][j];
        const double d = a.a[i][j] - b;
        part += o * h * d * d / b;
        const double e = b - ak[i][j];
        avg += o * h * e * e;
      }
    }
  }
  c.approx_error = std::sqrt(approx);
  c.partition_error = std::sqrt(part);
  c.time_average_error = std::sqrt(avg);
  c.min_value = INFINITY;
  c.max_value = -INFINITY;
  for (const auto& row : c.pieces) {
    c.min_value = std::min(c.min_value, *std::min_element(row.begin(), row.end()));
    c.max_value = std::max(c.max_value, *std::max_element(row.begin(), row.end()));
  }
  return c;
}

Trajectory backward_solve(const SmoothedCoefficient& beta, const Field& chi, FracOrder s,
                          int inner_steps, double cg_tol) {
  if (inner_steps < 1) throw DomainError("backward_solve: need at least one inner step");
  if (chi.basis_ptr() != beta.basis) throw SizeMismatch("backward_solve: chi and beta on different grids");
  const auto& basis = chi.basis();
  const std::size_t nx = chi.size();
  const double sv = s.value();
  const auto lambda = basis.eigenvalues();
  Vec lam_s(nx);
  for (std::size_t k = 0; k < nx; ++k) lam_s[k] = std::pow(lambda[k], sv);
  const int per_piece = std::max(1, (inner_steps + beta.n - 1) / beta.n);

  // Reversed time: collect from t = T down to 0, then reverse.
  std::vector<double> times{beta.horizon()};
  std::vector<Field> fields{chi};
  Vec tmp(nx), tmp2(nx), coeffs(nx);

  for (int p = beta.n - 1; p >= 0; --p) {
    const Vec& b = beta.pieces[p];
    const double t0 = beta.partition[p], t1 = beta.partition[p + 1];
    const double dt = (t1 - t0) / per_piece;
    const bool diagonal = is_constant(b);
    Vec sq(nx), isq(nx);
    for (std::size_t j = 0; j < nx; ++j) {
      sq[j] = std::sqrt(b[j]);
      isq[j] = 1.0 / sq[j];
    }
    const double bbar = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(nx);

    for (int step = 1; step <= per_piece; ++step) {
      const Field& prev = fields.back();
      const double t = step == per_piece ? t0 : t1 - step * dt;
      if (diagonal) {
        Vec c(prev.coeffs().begin(), prev.coeffs().end());
        for (std::size_t k = 0; k < nx; ++k) c[k] *= std::exp(-b[0] * dt * lam_s[k]);
        fields.push_back(Field::from_coeffs(chi.basis_ptr(), std::move(c)));
        times.push_back(t);
        continue;
      }
      // (I + dt beta S) psi = prev with psi = beta^{1/2} z:
      // (I + dt beta^{1/2} S beta^{1/2}) z = beta^{-1/2} prev.
      auto apply_a = [&](const Vec& z, Vec& out) {
        for (std::size_t j = 0; j < nx; ++j) tmp[j] = sq[j] * z[j];
        basis.apply_power(tmp, sv, tmp2);
        for (std::size_t j = 0; j < nx; ++j) out[j] = z[j] + dt * sq[j] * tmp2[j];
      };
      auto precond = [&](const Vec& in, Vec& out) {
        basis.analyze(in, coeffs);
        for (std::size_t k = 0; k < nx; ++k) coeffs[k] /= 1.0 + dt * bbar * lam_s[k];
        basis.synthesize(coeffs, out);
      };
      Vec rhs(nx), z(nx), res(nx), pdir(nx), q(nx), y(nx);
      for (std::size_t j = 0; j < nx; ++j) rhs[j] = isq[j] * prev.values()[j];
      // Start from the previous value, already close.
      for (std::size_t j = 0; j < nx; ++j) z[j] = rhs[j];
      apply_a(z, q);
      for (std::size_t j = 0; j < nx; ++j) res[j] = rhs[j] - q[j];
      const double bnorm = std::sqrt(dot(rhs, rhs));
      precond(res, y);
      pdir = y;
      double rho = dot(res, y);
      int it = 0;
      for (; it < 5000; ++it) {
        if (std::sqrt(dot(res, res)) <= cg_tol * bnorm) break;
        apply_a(pdir, q);
        const double alpha = rho / dot(pdir, q);
        for (std::size_t j = 0; j < nx; ++j) {
          z[j] += alpha * pdir[j];
          res[j] -= alpha * q[j];
        }
        precond(res, y);
        const double next = dot(res, y);
        const double bcoef = next / rho;
        rho = next;
        for (std::size_t j = 0; j < nx; ++j) pdir[j] = y[j] + bcoef * pdir[j];
      }
      if (it >= 5000 && bnorm > 0.0) throw NumericalError("backward_solve: inner CG did not converge");
      Vec psi(nx);
      for (std::size_t j = 0; j < nx; ++j) psi[j] = sq[j] * z[j];
      fields.push_back(Field::from_values(chi.basis_ptr(), std::move(psi)));
      times.push_back(t);
    }
  }
  Trajectory out;
  out.times.assign(times.rbegin(), times.rend());
  out.fields.assign(std::make_move_iterator(fields.rbegin()), std::make_move_iterator(fields.rend()));
  return out;
}

EnergyIdentity energy_identity_check(const Trajectory& psi, const SmoothedCoefficient& beta,
                                     const Field& chi, FracOrder s) {
  if (psi.fields.size() < 2) throw DomainError("energy_identity_check: need a solved trajectory");
  const double h = chi.basis().spacing();
  EnergyIdentity e;
  for (std::size_t i = 0; i + 1 < psi.fields.size(); ++i) {
    const double t0 = psi.times[i], t1 = psi.times[i + 1];
    const Vec& b = beta.pieces[beta.piece_at(0.5 * (t0 + t1))];
    // End of the reversed-time step is the earlier time.
    const Field lap = spectral_frac_laplacian(psi.fields[i], s);
    double acc = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) acc += b[j] * lap.values()[j] * lap.values()[j];
    e.lhs += (t1 - t0) * h * acc;
  }
  const double h0 = hs_norm(psi.fields.front(), s);
  const double hc = hs_norm(chi, s);
  e.lhs += 0.5 * h0 * h0;
  e.rhs = 0.5 * hc * hc;
  e.residual = e.rhs > 0.0 ? std::abs(e.lhs - e.rhs) / e.rhs : std::abs(e.lhs - e.rhs);
  return e;
}

WitnessReport uniqueness_witness(const Trajectory& u, const Trajectory& w, const Field& chi, int k,
                                 int n, const Nonlinearity& phi, FracOrder s, int inner_steps) {
  Trajectory ws;
  ws.times = u.times;
  for (double t : u.times) ws.fields.push_back(w.at(t));
  const auto a = build_coefficient(u, ws, phi);
  const auto beta = smooth_coefficient(a, k, n);
  const auto psi = backward_solve(beta, chi, s, inner_steps);

  WitnessReport rep;
  rep.witness = (u.final() - ws.final()).inner(chi);
  const double hc = hs_norm(chi, s);
  rep.c_r = std::sqrt(0.5 * hc * hc);
  rep.partition_error = beta.partition_error;
  auto sup = [](const Trajectory& t) {
    double m = 0.0;
    for (double v : t.sup_norms()) m = std::max(m, v);
    return m;
  };
  rep.bound = (sup(u) + sup(ws)) * beta.partition_error * rep.c_r;

  rep.psi_min = INFINITY;
  rep.psi_max = -INFINITY;
  for (const auto& f : psi.fields) {
    rep.psi_min = std::min(rep.psi_min, f.min_value());
    rep.psi_max = std::max(rep.psi_max, f.max_value());
  }
  const double h = chi.basis().spacing();
  for (std::size_t i = 0; i + 1 < psi.fields.size(); ++i) {
    const double t0 = psi.times[i], t1 = psi.times[i + 1];
    const double mid = 0.5 * (t0 + t1);
    const Vec& b = beta.pieces[beta.piece_at(mid)];
    const Field lap = spectral_frac_laplacian(psi.fields[i], s);
    // Snapshot of a holding at mid.
    const auto it = std::lower_bound(a.times.begin(), a.times.end(), mid);
    const std::size_t si = std::min<std::size_t>(static_cast<std::size_t>(it - a.times.begin()), a.times.size() - 1);
    const Field uu = u.at(mid), ww = ws.at(mid);
    double acc = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      acc += std::abs(uu.values()[j] - ww.values()[j]) * std::abs(a.a[si][j] - b[j]) * std::abs(lap.values()[j]);
    }
    rep.controlled += (t1 - t0) * h * acc;
  }
  return rep;
}

}  // namespace fracfilt
