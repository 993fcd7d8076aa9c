#include "fracfilt/singular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "fracfilt/errors.hpp"
#include "fracfilt/quadrature.hpp"

namespace fracfilt {

namespace {

double near_radius(double scale, const PvOptions& opt) {
  return opt.near_factor * opt.spacing * scale;
}

// Breakpoints for integrals in z over [delta, A] around the point x:
// a geometric ladder resolving the region near z = 0, plus every z at
// which x +- z hits a knot of one of the functions.
std::vector<double> breakpoints(double x, double delta, double scale, double A,
                                const std::vector<double>& knots) {
  std::vector<double> br;
  for (double z = 2.0 * delta; z < std::min(scale, A); z *= 2.0) br.push_back(z);
  for (double z = scale; z < A; z *= 2.0) br.push_back(z);
  for (double c : knots) {
    const double z = std::abs(x - c);
    if (z > delta && z < A) br.push_back(z);
  }
  return br;
}

std::vector<double> knots_of(const SmoothFunction& f) {
  std::vector<double> k = f.knots;
  if (f.support_radius > 0.0) {
    k.push_back(-f.support_radius);
    k.push_back(f.support_radius);
  }
  return k;
}

// Far end of the explicitly integrated range for a non-periodic,
// non-compact function.
double far_cut(const SmoothFunction& f, double x, double delta) {
  double extent = 0.0;
  for (double c : f.knots) extent = std::max(extent, std::abs(c));
  return std::max(std::abs(x) + extent + 8.0 * f.scale, 2.0 * delta);
}

}  // namespace

double hurwitz_zeta(double sigma, double a) {
  if (!(sigma > 1.0)) throw DomainError("hurwitz_zeta: sigma must exceed 1");
  if (!(a > 0.0)) throw DomainError("hurwitz_zeta: a must be positive");
  // Euler-Maclaurin after shifting the argument by N.
  constexpr int kShift = 12;
  constexpr std::array<double, 6> kBernoulli = {1.0 / 6.0,   -1.0 / 30.0, 1.0 / 42.0,
                                                -1.0 / 30.0, 5.0 / 66.0,  -691.0 / 2730.0};
  double sum = 0.0;
  for (int n = 0; n < kShift; ++n) sum += std::pow(a + n, -sigma);
  const double b = a + kShift;
  sum += std::pow(b, 1.0 - sigma) / (sigma - 1.0) + 0.5 * std::pow(b, -sigma);
  double rising = sigma;  // sigma (sigma+1) ... (sigma+2j-2)
  double fact = 2.0;      // (2j)!
  double power = std::pow(b, -sigma - 1.0);
  for (std::size_t j = 1; j <= kBernoulli.size(); ++j) {
    sum += kBernoulli[j - 1] / fact * rising * power;
    rising *= (sigma + 2.0 * j - 1.0) * (sigma + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    power /= b * b;
  }
  return sum;
}

double frac_lap_pv(const SmoothFunction& f, FracOrder order, double x, const PvOptions& opt) {
  if (!f.value) throw DomainError("frac_lap_pv: function value missing");
  if (!f.second_derivative) {
    throw DomainError("frac_lap_pv: second derivative required for the near-field term");
  }
  const double s = order.value();
  const double c = constants(1, order).c_ds;
  const double delta = near_radius(f.scale, opt);
  const double fx = f.value(x);

  const double near = -f.second_derivative(x) * std::pow(delta, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
  auto g = [&](double z) { return 2.0 * fx - f.value(x + z) - f.value(x - z); };
  auto integrand = [&](double z) { return g(z) * std::pow(z, -1.0 - 2.0 * s); };
  const auto knots = knots_of(f);

  double A = 0.0;
  double tail = 0.0;
  if (f.support_radius > 0.0) {
    A = std::max(std::abs(x) + f.support_radius, 2.0 * delta);
    tail = 2.0 * fx * std::pow(A, -2.0 * s) / (2.0 * s);
  } else if (f.period > 0.0) {
    const double P = f.period;
    const double m = std::max(1.0, std::ceil(2.0 * delta / P));
    A = m * P;
    // sum over periods m, m+1, ... of int_0^P g(u) (u + jP)^{-1-2s} du
    auto periodic = [&](double u) {
      return g(u) * hurwitz_zeta(1.0 + 2.0 * s, m + u / P);
    };
    std::vector<double> br;
    for (int q = 1; q < 4; ++q) br.push_back(q * P / 4.0);
    tail = std::pow(P, -1.0 - 2.0 * s) * quad::integrate(periodic, 0.0, P, opt.rel_tol, br);
  } else {
    A = far_cut(f, x, delta);
    tail = quad::integrate_tail(integrand, A, opt.rel_tol);
  }

  auto br = breakpoints(x, delta, f.scale, A, knots);
  if (f.period > 0.0) {
    for (double z = f.period / 4.0; z < A; z += f.period / 4.0) br.push_back(z);
  }
  const double middle = quad::integrate(integrand, delta, A, opt.rel_tol, br);
  return c * (near + middle + tail);
}

// ---------------------------------------------------------------------------

CutoffGamma::CutoffGamma(double radius) : radius_(radius) {
  if (!(radius > 0.0)) throw DomainError("CutoffGamma: radius must be positive");
}

double CutoffGamma::operator()(double x) const {
  const double r = std::abs(x) / radius_;
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double t = r - 1.0;
  const double t2 = t * t;
  return 1.0 - t2 * t2 * (35.0 - 84.0 * t + 70.0 * t2 - 20.0 * t2 * t);
}

double CutoffGamma::derivative(double x) const {
  const double r = std::abs(x) / radius_;
  if (r <= 1.0 || r >= 2.0) return 0.0;
  const double t = r - 1.0;
  const double u = 1.0 - t;
  const double sign = x > 0.0 ? 1.0 : -1.0;
  return -140.0 * t * t * t * u * u * u * sign / radius_;
}

double CutoffGamma::second_derivative(double x) const {
  const double r = std::abs(x) / radius_;
  if (r <= 1.0 || r >= 2.0) return 0.0;
  const double t = r - 1.0;
  const double u = 1.0 - t;
  return -420.0 * t * t * u * u * (1.0 - 2.0 * t) / (radius_ * radius_);
}

SmoothFunction CutoffGamma::as_function() const {
  SmoothFunction f;
  const CutoffGamma self = *this;
  f.value = [self](double x) { return self(x); };
  f.first_derivative = [self](double x) { return self.derivative(x); };
  f.second_derivative = [self](double x) { return self.second_derivative(x); };
  f.scale = radius_;
  f.support_radius = 2.0 * radius_;
  f.knots = {-2.0 * radius_, -radius_, radius_, 2.0 * radius_};
  return f;
}

WeightH::WeightH(double alpha, int d, FracOrder s) : alpha_(alpha) {
  if (!(alpha > d && alpha < d + 2.0 * s.value())) {
    throw ConfigError("alpha", "must lie in (d, d+2s)");
  }
  const double mid = std::pow(2.0, 1.0 - 0.5 * alpha);
  c1_ = std::min(1.0, mid);
  c2_ = std::max(1.0, mid);
}

double WeightH::operator()(double x) const { return std::pow(1.0 + x * x, -0.5 * alpha_); }

double WeightH::derivative(double x) const {
  return -alpha_ * x * std::pow(1.0 + x * x, -0.5 * alpha_ - 1.0);
}

double WeightH::second_derivative(double x) const {
  const double q = 1.0 + x * x;
  return -alpha_ * std::pow(q, -0.5 * alpha_ - 1.0) +
         alpha_ * (alpha_ + 2.0) * x * x * std::pow(q, -0.5 * alpha_ - 2.0);
}

SmoothFunction WeightH::as_function() const {
  SmoothFunction f;
  const WeightH self = *this;
  f.value = [self](double x) { return self(x); };
  f.first_derivative = [self](double x) { return self.derivative(x); };
  f.second_derivative = [self](double x) { return self.second_derivative(x); };
  f.scale = 1.0;
  f.decay_exponent = alpha_;
  f.knots = {0.0};
  return f;
}

// ---------------------------------------------------------------------------

double tp_operator(const SmoothFunction& f, double p, FracOrder order, double x,
                   const PvOptions& opt) {
  if (!(p > 1.0)) throw DomainError("tp_operator: exponent p must exceed 1");
  if (!f.value || !f.first_derivative) {
    throw DomainError("tp_operator: first derivative required for the near-field term");
  }
  const double s = order.value();
  const double expo = -1.0 - p * s;
  const double delta = near_radius(f.scale, opt);
  const double fx = f.value(x);
  const double d1 = f.first_derivative(x);
  const double d2 = f.second_derivative ? f.second_derivative(x) : 0.0;

  auto taylor = [&](double z) {
    if (z <= 0.0) return 0.0;
    const double a = d1 + 0.5 * d2 * z;
    const double b = -d1 + 0.5 * d2 * z;
    return (std::pow(std::abs(a), p) + std::pow(std::abs(b), p)) * std::pow(z, p + expo);
  };
  const double near = (d1 == 0.0 && d2 == 0.0)
                          ? 0.0
                          : quad::integrate_endpoint_singular(taylor, 0.0, delta, opt.rel_tol);

  auto integrand = [&](double z) {
    return (std::pow(std::abs(fx - f.value(x + z)), p) +
            std::pow(std::abs(fx - f.value(x - z)), p)) *
           std::pow(z, expo);
  };
  double A = 0.0;
  double tail = 0.0;
  if (f.support_radius > 0.0) {
    A = std::max(std::abs(x) + f.support_radius, 2.0 * delta);
    tail = 2.0 * std::pow(std::abs(fx), p) * std::pow(A, -p * s) / (p * s);
  } else {
    A = far_cut(f, x, delta);
    tail = quad::integrate_tail(integrand, A, opt.rel_tol);
  }
  const auto br = breakpoints(x, delta, f.scale, A, knots_of(f));
  return near + quad::integrate(integrand, delta, A, opt.rel_tol, br) + tail;
}

double qform(const WeightH& hw, const CutoffGamma& gw, FracOrder order, double x,
             const PvOptions& opt) {
  const double s = order.value();
  const double c = constants(1, order).c_ds;
  const double R = gw.radius();
  const double delta = near_radius(std::min(1.0, R), opt);
  const double hx = hw(x);
  const double gx = gw(x);

  const double near =
      2.0 * hw.derivative(x) * gw.derivative(x) * std::pow(delta, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
  auto integrand = [&](double z) {
    return ((hx - hw(x + z)) * (gx - gw(x + z)) + (hx - hw(x - z)) * (gx - gw(x - z))) *
           std::pow(z, -1.0 - 2.0 * s);
  };
  // Beyond A = |x| + 2R the cut-off vanishes at x +- z.
  const double A = std::max(std::abs(x) + 2.0 * R, 2.0 * delta);
  double tail = 0.0;
  if (gx != 0.0) {
    auto far = [&](double z) { return (hw(x + z) + hw(x - z)) * std::pow(z, -1.0 - 2.0 * s); };
    tail = gx * (2.0 * hx * std::pow(A, -2.0 * s) / (2.0 * s) -
                 quad::integrate_tail(far, A, opt.rel_tol));
  }
  const std::vector<double> knots = {-2.0 * R, -R, 0.0, R, 2.0 * R};
  const auto br = breakpoints(x, delta, std::min(1.0, R), A, knots);
  return c * (near + quad::integrate(integrand, delta, A, opt.rel_tol, br) + tail);
}

double qform_l1(const WeightH& h, const CutoffGamma& gamma, FracOrder s, const PvOptions& opt) {
  PvOptions inner = opt;
  inner.rel_tol = std::max(opt.rel_tol, 1e-10);
  auto absq = [&](double x) { return std::abs(qform(h, gamma, s, x, inner)); };
  const double R = gamma.radius();
  const double X = 4.0 * R;
  const std::vector<double> br = {0.5 * R, R, 1.5 * R, 2.0 * R, 3.0 * R};
  const double body = quad::integrate(absq, 0.0, X, 1e-8, br);
  const double tail = quad::integrate_tail(absq, X, 1e-8);
  return 2.0 * (body + tail);
}

double frac_lap_of_h(const WeightH& h, FracOrder s, double x, const PvOptions& opt) {
  return frac_lap_pv(h.as_function(), s, x, opt);
}

void check_holder_exponent(int d, FracOrder s, double p) {
  if (!(p > 1.0)) throw ConfigError("p", "must exceed 1");
  const double pprime = p / (p - 1.0);
  if (!(2.0 * s.value() > d / pprime)) {
    throw ConfigError("p", "requires 2s > d/p' (got p = " + std::to_string(p) + ")");
  }
}

double default_holder_exponent(int d, FracOrder s) {
  // 2s > d/p' holds for all p close enough to 1, so the smallest admissible
  // value is the infimum p = 1.
  const double p = 1.0 + 0.1;
  check_holder_exponent(d, s, p);
  return p;
}

double default_weight_alpha(int d, FracOrder s) { return d + 1.8 * s.value(); }

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw SizeMismatch("loglog_slope: need >= 2 points");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CutoffScan cutoff_scaling_scan(FracOrder s, const std::vector<double>& radii, double p,
                               double alpha, const PvOptions& opt) {
  check_holder_exponent(1, s, p);
  const WeightH h(alpha, 1, s);
  CutoffScan scan;
  scan.s = s.value();
  scan.p = p;
  scan.alpha = alpha;
  std::vector<double> rs, lap, tp, q;
  for (double R : radii) {
    if (!(R >= 1.0)) throw ConfigError("radii", "cut-off scan radii must be >= 1");
    const CutoffGamma gamma(R);
    const SmoothFunction g = gamma.as_function();
    CutoffScanRow row;
    row.radius = R;
    for (int j = 0; j <= 60; ++j) {
      const double x = R * 0.05 * j;
      row.lap_sup = std::max(row.lap_sup, std::abs(frac_lap_pv(g, s, x, opt)));
      row.tp_sup = std::max(row.tp_sup, tp_operator(g, p, s, x, opt));
    }
    row.lap_scaled = row.lap_sup * std::pow(R, 2.0 * s.value());
    row.tp_scaled = row.tp_sup * std::pow(R, p * s.value());
    row.q_l1 = qform_l1(h, gamma, s, opt);
    scan.rows.push_back(row);
    rs.push_back(R);
    lap.push_back(row.lap_sup);
    tp.push_back(row.tp_sup);
    q.push_back(row.q_l1);
  }
  if (rs.size() >= 2) {
    scan.lap_slope = loglog_slope(rs, lap);
    scan.tp_slope = loglog_slope(rs, tp);
    scan.q_slope = loglog_slope(rs, q);
  }
  return scan;
}

}  // namespace fracfilt
