#include "fracfilt/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fracfilt/errors.hpp"
#include "fracfilt/quadrature.hpp"

namespace fracfilt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_height(double y, const char* who) {
  if (!(y > 0.0)) throw DomainError(std::string(who) + ": height y must be positive");
}

}  // namespace

double profile_psi(double lambda, FracOrder order, double y) {
  if (y < 0.0) throw DomainError("profile_psi: negative height");
  if (y == 0.0) return 1.0;
  const double s = order.value();
  const double z = std::sqrt(lambda) * y;
  const double cs = std::pow(2.0, 1.0 - s) / std::tgamma(s);
  return cs * std::pow(z, s) * std::exp(-z) * bessel_k_scaled(s, z);
}

double profile_psi_derivative(double lambda, FracOrder order, double y) {
  require_positive_height(y, "profile_psi_derivative");
  const double s = order.value();
  const double root = std::sqrt(lambda);
  const double z = root * y;
  const double cs = std::pow(2.0, 1.0 - s) / std::tgamma(s);
  return -cs * root * std::pow(z, s) * std::exp(-z) * bessel_k_scaled(1.0 - s, z);
}

double profile_flux(double lambda, FracOrder order, double y) {
  if (y < 0.0) throw DomainError("profile_flux: negative height");
  const double s = order.value();
  const double cs = std::pow(2.0, 1.0 - s) / std::tgamma(s);
  const double ls = std::pow(lambda, s);
  if (y == 0.0) return -cs * ls * std::tgamma(1.0 - s) * std::pow(2.0, -s);
  const double z = std::sqrt(lambda) * y;
  return -cs * ls * std::pow(z, 1.0 - s) * std::exp(-z) * bessel_k_scaled(1.0 - s, z);
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi >= lo) || n < 1) throw DomainError("log_spaced: need 0 < lo <= hi, n >= 1");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

// ---------------------------------------------------------------------------

ExtensionField::ExtensionField(FracOrder s, std::vector<double> x, std::vector<double> y,
                               std::vector<double> values, std::optional<Field> datum)
    : s_(s), x_(std::move(x)), y_(std::move(y)), values_(std::move(values)),
      datum_(std::move(datum)) {
  if (values_.size() != x_.size() * y_.size()) {
    throw SizeMismatch("ExtensionField: values must have size |x| * |y|");
  }
  if (datum_ && datum_->size() != x_.size()) {
    throw SizeMismatch("ExtensionField: datum does not match the x-grid");
  }
}

std::span<const double> ExtensionField::row(std::size_t iy) const {
  if (iy >= y_.size()) throw DomainError("ExtensionField::row: index out of range");
  return std::span<const double>(values_).subspan(iy * x_.size(), x_.size());
}

std::span<const double> ExtensionField::trace() const {
  if (y_.empty()) throw DomainError("ExtensionField::trace: empty y-grid");
  const auto it = std::min_element(y_.begin(), y_.end());
  return row(static_cast<std::size_t>(it - y_.begin()));
}

ExtensionField extend_cylinder(const Field& f, FracOrder s, std::span<const double> y) {
  const auto& basis = f.basis();
  const auto n = static_cast<std::size_t>(basis.size());
  const auto lambda = basis.eigenvalues();
  std::vector<double> values(n * y.size());
  std::vector<double> c(n);
  for (std::size_t i = 0; i < y.size(); ++i) {
    require_positive_height(y[i], "extend_cylinder");
    for (std::size_t k = 0; k < n; ++k) c[k] = f.coeffs()[k] * profile_psi(lambda[k], s, y[i]);
    basis.synthesize(c, std::span<double>(values).subspan(i * n, n));
  }
  const auto x = basis.nodes();
  return ExtensionField(s, std::vector<double>(x.begin(), x.end()),
                        std::vector<double>(y.begin(), y.end()), std::move(values), f);
}

Field dtn_flux(const Field& f, FracOrder s, double y) {
  require_positive_height(y, "dtn_flux");
  const double mu = constants(1, s).mu_s;
  const auto lambda = f.basis().eigenvalues();
  std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= -mu * profile_flux(lambda[k], s, y);
  return Field::from_coeffs(f.basis_ptr(), std::move(c));
}

EnergyReport weighted_energy(const ExtensionField& u, int nodes) {
  if (!u.datum()) {
    throw FeatureError("weighted_energy: needs an extension built from a spectral datum");
  }
  if (nodes < 2) throw DomainError("weighted_energy: need at least 2 nodes");
  const FracOrder order = u.order();
  const double s = order.value();
  const auto k = constants(1, order);

  // With y = z / sqrt(lambda_k) the per-mode integral becomes
  // lambda_k^s int_0^inf z^{1-2s} (Psi^2 + Psi'^2) dz, Psi(z) = c_s z^s K_s(z).
  const double cs = k.c_s;
  const auto rule_psi = quad::gauss_jacobi_left(nodes, 1.0 - 2.0 * s, 1.0);
  const auto rule_flux = quad::gauss_jacobi_left(nodes, 2.0 * s - 1.0, 1.0);
  const double near =
      rule_psi.apply([&](double z) {
        const double p = profile_psi(1.0, order, z);
        return p * p;
      }) +
      rule_flux.apply([&](double z) {
        const double q = cs * std::pow(z, 1.0 - s) * std::exp(-z) * bessel_k_scaled(1.0 - s, z);
        return q * q;
      });

  // z = 1 + t/2 on [1, inf): the factor e^{-2z} = e^{-2} e^{-t} is the Laguerre weight.
  auto tail_rule = [&](int n) {
    const auto r = quad::gauss_laguerre(n);
    return r.apply([&](double t) {
      const double z = 1.0 + 0.5 * t;
      const double a = bessel_k_scaled(s, z);
      const double b = bessel_k_scaled(1.0 - s, z);
      return 0.5 * std::exp(-2.0) * cs * cs * z * (a * a + b * b);
    });
  };
  const double tail = tail_rule(nodes);
  const double tail_half = tail_rule(std::max(nodes / 2, 1));

  double modal = 0.0;
  const auto lambda = u.datum()->basis().eigenvalues();
  const auto coeffs = u.datum()->coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    modal += coeffs[i] * coeffs[i] * std::pow(lambda[i], s);
  }

  EnergyReport rep;
  rep.energy = std::sqrt(k.mu_s * (near + tail) * modal);
  rep.tail = k.mu_s * tail * modal;
  rep.tail_change = std::abs(tail - tail_half) / std::max(near + tail, 1e-300);
  rep.tail_converged = std::isfinite(tail) && rep.tail_change < 1e-8;
  return rep;
}

// ---------------------------------------------------------------------------

EnergyWeight::EnergyWeight(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0)) throw DomainError("EnergyWeight: alpha must be positive");
}

double EnergyWeight::operator()(double y) const {
  if (y <= 1.0) return 1.0;
  if (y <= 2.0) return std::exp(-0.5 * alpha_ * (y - 1.0) * (y - 1.0));
  return std::exp(-alpha_ * (y - 1.5));
}

double EnergyWeight::derivative(double y) const {
  if (y <= 1.0) return 0.0;
  if (y <= 2.0) return -alpha_ * (y - 1.0) * (*this)(y);
  return -alpha_ * (*this)(y);
}

double EnergyWeight::weighted_mass(FracOrder order) const {
  const double s = order.value();
  const double a = 2.0 - 2.0 * s;
  const double inner = 1.0 / a;
  const auto rule = quad::gauss_legendre(32, 1.0, 2.0);
  const double middle = rule.apply([&](double y) { return (*this)(y) * std::pow(y, 1.0 - 2.0 * s); });
  // e^{3 alpha/2} int_2^inf e^{-alpha y} y^{1-2s} dy
  const double outer = std::exp(1.5 * alpha_) * std::pow(alpha_, -a) *
                       boost::math::tgamma(a, 2.0 * alpha_);
  return inner + middle + outer;
}

std::vector<double> local_weighted_energy(std::span<const Field> fields, FracOrder order, double r,
                                          int ny, int nx) {
  if (fields.empty()) return {};
  const auto& basis = fields.front().basis();
  for (const auto& f : fields) {
    if (f.basis_ptr() != fields.front().basis_ptr()) {
      throw SizeMismatch("local_weighted_energy: fields must share one basis");
    }
  }
  if (!(r > 0.0 && r <= basis.radius())) {
    throw DomainError("local_weighted_energy: need 0 < r <= R");
  }
  const double s = order.value();
  const int n = basis.size();
  const auto lambda = basis.eigenvalues();

  // The x-extent sqrt(r^2 - y^2) of the half-disc gives the y-integrand a
  // square-root zero at y = r; it goes into the Jacobi weight.
  auto y_rule = [&](double beta) {
    auto rule = quad::gauss_jacobi(ny, 0.5, beta);
    const double scale = std::pow(0.5 * r, 1.5 + beta);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      rule.nodes[i] = 0.5 * r * (1.0 + rule.nodes[i]);
      rule.weights[i] *= scale;
    }
    return rule;
  };
  const auto rule_x = quad::gauss_legendre(nx);

  std::vector<double> out(fields.size(), 0.0);
  std::vector<double> sx(n), sy(n);
  for (int term = 0; term < 2; ++term) {
    const auto ry = y_rule(term == 0 ? 1.0 - 2.0 * s : 2.0 * s - 1.0);
    for (std::size_t iy = 0; iy < ry.size(); ++iy) {
      const double y = ry.nodes[iy];
      const double half = std::sqrt(std::max(r * r - y * y, 0.0));
      // weight (r-y)^{1/2} absorbed: multiply by half / sqrt(r - y) = sqrt(r + y)
      const double jac = std::sqrt(r + y);
      for (int k = 0; k < n; ++k) {
        sx[k] = profile_psi(lambda[k], order, y);
        sy[k] = profile_flux(lambda[k], order, y);
      }
      for (std::size_t ix = 0; ix < rule_x.size(); ++ix) {
        const double x = half * rule_x.nodes[ix];
        const double w = ry.weights[iy] * jac * rule_x.weights[ix];
        std::vector<double> basis_vals(n);
        for (int k = 0; k < n; ++k) {
          basis_vals[k] = term == 0 ? basis.eigenfunction_derivative(k + 1, x) * sx[k]
                                    : basis.eigenfunction(k + 1, x) * sy[k];
        }
        for (std::size_t f = 0; f < fields.size(); ++f) {
          const auto c = fields[f].coeffs();
          double g = 0.0;
          for (int k = 0; k < n; ++k) g += c[k] * basis_vals[k];
          out[f] += w * g * g;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Kernel1d {
  double s;
  double kappa;

  // G(t) = 1/2 - F(t) for t >= 0, F the kernel primitive with F(0) = 0.
  double G(double t) const {
    if (t == kInf) return 0.0;
    return 0.5 * boost::math::ibeta(s, 0.5, 1.0 / (1.0 + t * t));
  }
  // F(ta) - F(tb), ta >= tb, without cancellation in the far field.
  double mass(double ta, double tb) const {
    if (tb >= 0.0) return G(tb) - G(ta);
    if (ta <= 0.0) return G(-ta) - G(-tb);
    return 1.0 - G(ta) - G(-tb);
  }
  // t F'(t)
  double H(double t) const {
    if (std::isinf(t)) return 0.0;
    return kappa * t * std::pow(1.0 + t * t, -0.5 - s);
  }
};

Kernel1d make_kernel(FracOrder s) {
  return Kernel1d{s.value(), 1.0 / boost::math::beta(0.5, s.value())};
}

}  // namespace

double poisson_kernel(double x, double y, FracOrder s) {
  require_positive_height(y, "poisson_kernel");
  const auto k = constants(1, s);
  return k.kappa_ds * std::pow(y, 2.0 * s.value()) *
         std::pow(x * x + y * y, -0.5 - s.value());
}

LineData sample_line(const std::function<double(double)>& f, double half_width, int cells) {
  if (!(half_width > 0.0) || cells < 1) throw DomainError("sample_line: bad window");
  LineData d;
  d.x0 = -half_width;
  d.h = 2.0 * half_width / cells;
  d.values.resize(cells);
  for (int j = 0; j < cells; ++j) d.values[j] = f(d.center(j));
  return d;
}

double default_window(double support) { return 8.0 * support; }

PoissonResult poisson_extend(const LineData& v, FracOrder s, double y, std::span<const double> x,
                             double tol) {
  require_positive_height(y, "poisson_extend");
  if (v.values.empty()) throw SizeMismatch("poisson_extend: empty data");
  const Kernel1d K = make_kernel(s);
  const double edge = std::max(std::abs(v.values.front() - v.exterior),
                               std::abs(v.values.back() - v.exterior));
  PoissonResult res;
  res.values.resize(x.size());
  res.dy.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double tl = (x[i] - v.x_begin()) / y;
    const double tr = (x[i] - v.x_end()) / y;
    const double outside = K.mass(kInf, tl) + K.mass(tr, -kInf);
    double e = v.exterior * outside;
    double dy = -v.exterior * (-K.H(tl) + K.H(tr));
    for (std::size_t j = 0; j < v.values.size(); ++j) {
      const double a = v.x0 + static_cast<double>(j) * v.h;
      const double ta = (x[i] - a) / y;
      const double tb = (x[i] - a - v.h) / y;
      e += v.values[j] * K.mass(ta, tb);
      dy -= v.values[j] * (K.H(ta) - K.H(tb));
    }
    res.values[i] = e;
    res.dy[i] = dy / y;
    res.truncation_estimate = std::max(res.truncation_estimate, outside * edge);
  }
  res.truncation_warning = res.truncation_estimate > tol;
  return res;
}

PoissonResult poisson_extend_at_centers(const LineData& v, FracOrder s, double y, double tol) {
  require_positive_height(y, "poisson_extend_at_centers");
  const std::size_t n = v.values.size();
  if (n == 0) throw SizeMismatch("poisson_extend_at_centers: empty data");
  const Kernel1d K = make_kernel(s);
  const double r = v.h / y;

  // Cell masses and H-differences by index offset m = i - j.
  std::vector<double> G(n + 1), Hh(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    G[k] = K.G((static_cast<double>(k) + 0.5) * r);
    Hh[k] = K.H((static_cast<double>(k) + 0.5) * r);
  }
  std::vector<double> mass(n), dH(n);
  mass[0] = 1.0 - 2.0 * G[0];
  dH[0] = 2.0 * Hh[0];
  for (std::size_t m = 1; m < n; ++m) {
    mass[m] = G[m - 1] - G[m];
    dH[m] = Hh[m] - Hh[m - 1];
  }

  const double edge = std::max(std::abs(v.values.front() - v.exterior),
                               std::abs(v.values.back() - v.exterior));
  PoissonResult res;
  res.values.assign(n, 0.0);
  res.dy.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double outside = G[i] + G[n - 1 - i];
    double e = v.exterior * outside;
    // left exterior: ta = inf, tb = (i+1/2) r; right: ta = -(n-i-1/2) r, tb = -inf
    double dy = v.exterior * (Hh[i] + Hh[n - 1 - i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (j <= i) {
        e += v.values[j] * mass[i - j];
        dy -= v.values[j] * dH[i - j];
      } else {
        e += v.values[j] * mass[j - i];
        dy -= v.values[j] * dH[j - i];
      }
    }
    res.values[i] = e;
    res.dy[i] = dy / y;
    res.truncation_estimate = std::max(res.truncation_estimate, outside * edge);
  }
  res.truncation_warning = res.truncation_estimate > tol;
  return res;
}

PairingReport check_pairing_identity(const SmoothFunction& v, const BasisPtr& basis,
                                     FracOrder order, int cells) {
  const double R = basis->radius();
  if (!(v.support_radius > 0.0 && v.support_radius < R)) {
    throw DomainError("check_pairing_identity: v must be supported inside B_R");
  }
  if (cells < 4) throw DomainError("check_pairing_identity: need at least 4 cells");
  const double s = order.value();
  const auto consts = constants(1, order);
  const Field phi = Field::from_function(basis, v.value);

  PairingReport rep;
  const auto lhs_rule = quad::gauss_legendre(96, -v.support_radius, v.support_radius);
  rep.lhs = lhs_rule.apply([&](double x) { return v.value(x) * frac_lap_pv(v, order, x); });

  const LineData line = sample_line(v.value, R, cells);
  const auto coeffs = phi.coeffs();
  const auto lambda = basis->eigenvalues();
  double cmax = 0.0;
  for (double c : coeffs) cmax = std::max(cmax, std::abs(c));
  int modes = 0;
  for (int k = 0; k < basis->size(); ++k) {
    if (std::abs(coeffs[k]) > 1e-14 * cmax) modes = k + 1;
  }

  std::vector<double> table(static_cast<std::size_t>(modes) * cells);
  for (int k = 0; k < modes; ++k) {
    for (int i = 0; i < cells; ++i) table[k * cells + i] = basis->eigenfunction(k + 1, line.center(i));
  }
  const std::vector<double> ends = {-R, R};

  // Integrand pieces at height y: the first carries the weight y^{1-2s},
  // the second y^{2s-1}.
  auto slice = [&](double y) {
    const auto e = poisson_extend_at_centers(line, order, y);
    const auto b = poisson_extend(line, order, y, ends);
    const double lift = std::pow(y, 1.0 - 2.0 * s);
    double t1 = 0.0, t2 = 0.0;
    for (int k = 0; k < modes; ++k) {
      double a = 0.0, ad = 0.0;
      for (int i = 0; i < cells; ++i) {
        a += e.values[i] * table[k * cells + i];
        ad += e.dy[i] * table[k * cells + i];
      }
      a *= line.h;
      ad *= line.h;
      const double bdry = b.values[1] * basis->eigenfunction_derivative(k + 1, R) -
                          b.values[0] * basis->eigenfunction_derivative(k + 1, -R);
      t1 += coeffs[k] * profile_psi(lambda[k], order, y) * (lambda[k] * a + bdry);
      t2 += coeffs[k] * profile_flux(lambda[k], order, y) * lift * ad;
    }
    return std::pair<double, double>{t1, t2};
  };

  const double y1 = line.h;
  double total = 0.0;
  const auto r1 = quad::gauss_jacobi_left(24, 1.0 - 2.0 * s, y1);
  const auto r2 = quad::gauss_jacobi_left(24, 2.0 * s - 1.0, y1);
  for (std::size_t i = 0; i < r1.size(); ++i) total += r1.weights[i] * slice(r1.nodes[i]).first;
  for (std::size_t i = 0; i < r2.size(); ++i) total += r2.weights[i] * slice(r2.nodes[i]).second;
  const double ymax = 40.0 / std::sqrt(lambda[0]);
  for (double lo = y1; lo < ymax; lo *= 2.0) {
    const auto rule = quad::gauss_legendre(16, lo, 2.0 * lo);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double y = rule.nodes[i];
      const auto [t1, t2] = slice(y);
      total += rule.weights[i] * (t1 * std::pow(y, 1.0 - 2.0 * s) + t2 * std::pow(y, 2.0 * s - 1.0));
    }
  }
  rep.rhs = consts.mu_s * total;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  return rep;
}

}  // namespace fracfilt
