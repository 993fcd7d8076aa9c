#pragma once

#include <functional>
#include <vector>

#include "fracfilt/specfun.hpp"

namespace fracfilt {

/// A function on the real line together with the regularity data the
/// singular quadratures need. Everything in this module is one-dimensional.
struct SmoothFunction {
  std::function<double(double)> value;
  /// Required by frac_lap_pv (near-field Taylor term).
  std::function<double(double)> second_derivative;
  /// Required by tp_operator and qform.
  std::function<double(double)> first_derivative;
  /// Length over which the function varies appreciably.
  double scale = 1.0;
  /// Period if > 0.
  double period = 0.0;
  /// f vanishes outside [-support_radius, support_radius] if > 0.
  double support_radius = 0.0;
  /// |f(x)| <= C |x|^{-decay_exponent} for large |x|, if > 0.
  double decay_exponent = 0.0;
  /// Points where some derivative jumps or the profile changes regime.
  std::vector<double> knots;
};

/// Options for the singular quadratures.
struct PvOptions {
  /// The near field is [0, delta] with delta = near_factor * spacing * scale.
  double spacing = 2.5e-4;
  double near_factor = 4.0;
  double rel_tol = 1e-11;
};

/// (-Laplacian)^s f(x) on R, from the symmetrized singular integral
/// c_{1,s} int_0^inf (2f(x) - f(x+z) - f(x-z)) z^{-1-2s} dz.
double frac_lap_pv(const SmoothFunction& f, FracOrder s, double x, const PvOptions& opt = {});

/// Hurwitz zeta function zeta(sigma, a) for sigma > 1, a > 0.
double hurwitz_zeta(double sigma, double a);

/// gamma_R(x) = xi(|x|/R), xi = 1 on [0,1], 0 on [2,inf), degree-7 smoothstep between.
class CutoffGamma {
public:
  explicit CutoffGamma(double radius);
  double radius() const noexcept { return radius_; }
  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  SmoothFunction as_function() const;

private:
  double radius_;
};

/// h(x) = (1+x^2)^{-alpha/2}, with c1/(1+|x|^alpha) <= h <= c2/(1+|x|^alpha).
class WeightH {
public:
  WeightH(double alpha, int d, FracOrder s);
  double alpha() const noexcept { return alpha_; }
  double c1() const noexcept { return c1_; }
  double c2() const noexcept { return c2_; }
  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  SmoothFunction as_function() const;

private:
  double alpha_;
  double c1_;
  double c2_;
};

/// T_p(f)(x) = int |f(x) - f(y)|^p / |x-y|^{1+ps} dy.
double tp_operator(const SmoothFunction& f, double p, FracOrder s, double x,
                   const PvOptions& opt = {});

/// Q(h, gamma_R)(x) = c_{1,s} int (h(x)-h(y))(gamma_R(x)-gamma_R(y)) / |x-y|^{1+2s} dy.
double qform(const WeightH& h, const CutoffGamma& gamma, FracOrder s, double x,
             const PvOptions& opt = {});

/// int_R |Q(h, gamma_R)(x)| dx.
double qform_l1(const WeightH& h, const CutoffGamma& gamma, FracOrder s, const PvOptions& opt = {});

/// (-Laplacian)^s h(x).
double frac_lap_of_h(const WeightH& h, FracOrder s, double x, const PvOptions& opt = {});

/// Smallest admissible Hoelder exponent p (2s > d/p') plus 0.1. Throws
/// ConfigError when the resulting p is not admissible.
double default_holder_exponent(int d, FracOrder s);

/// Default decay exponent of h, alpha = d + 1.8 s, inside (d, d+2s).
double default_weight_alpha(int d, FracOrder s);

/// Throws ConfigError unless 2s > d/p'.
void check_holder_exponent(int d, FracOrder s, double p);

struct CutoffScanRow {
  double radius = 0.0;
  /// sup_x |(-Laplacian)^s gamma_R|
  double lap_sup = 0.0;
  /// lap_sup * R^{2s}
  double lap_scaled = 0.0;
  /// sup_x T_p(gamma_R)
  double tp_sup = 0.0;
  /// tp_sup * R^{ps}
  double tp_scaled = 0.0;
  /// int |Q(h, gamma_R)|
  double q_l1 = 0.0;
};

struct CutoffScan {
  double s = 0.5;
  double p = 0.0;
  double alpha = 0.0;
  std::vector<CutoffScanRow> rows;
  double lap_slope = 0.0;
  double tp_slope = 0.0;
  double q_slope = 0.0;
};

/// Scans the cut-off estimates over the given radii. The suprema are taken
/// over the points R*t_j with t_j = 0, 0.05, ..., 3.
CutoffScan cutoff_scaling_scan(FracOrder s, const std::vector<double>& radii, double p,
                               double alpha, const PvOptions& opt = {});

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fracfilt
