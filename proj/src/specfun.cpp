#include "fracfilt/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracfilt/errors.hpp"

namespace fracfilt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Taylor coefficients of 1/Gamma(1+x) about x = 0.
constexpr std::array<double, 29> kRecipGammaTaylor = {
    1.00000000000000000e+00,  5.77215664901532866e-01,  -6.55878071520253902e-01,
    -4.20026350340952370e-02, 1.66538611382291479e-01,  -4.21977345555443334e-02,
    -9.62197152787697303e-03, 7.21894324666309990e-03,  -1.16516759185906517e-03,
    -2.15241674114950975e-04, 1.28050282388116196e-04,  -2.01348547807882387e-05,
    -1.25049348214267063e-06, 1.13302723198169593e-06,  -2.05633841697760707e-07,
    6.11609510448141609e-09,  5.00200764446922295e-09,  -1.18127457048702004e-09,
    1.04342671169110054e-10,  7.78226343990507081e-12,  -3.69680561864220598e-12,
    5.10037028745447575e-13,  -2.05832605356650664e-14, -5.34812253942301782e-15,
    1.22677862823826084e-15,  -1.18125930169745883e-16, 1.18669225475160037e-18,
    1.41238065531803186e-18,  -2.29874568443537022e-19,
};

struct RecipGammaParts {
  double gam1;   // (1/G(1-mu) - 1/G(1+mu)) / (2 mu)
  double gam2;   // (1/G(1-mu) + 1/G(1+mu)) / 2
  double gampl;  // 1/G(1+mu)
  double gammi;  // 1/G(1-mu)
};

RecipGammaParts recip_gamma_parts(double mu) {
  // Split the series into even and odd parts; Horner in mu^2.
  const double mu2 = mu * mu;
  double even = 0.0;
  double odd = 0.0;
  for (int i = static_cast<int>(kRecipGammaTaylor.size()) - 1; i >= 0; --i) {
    if (i % 2 == 0) {
      even = even * mu2 + kRecipGammaTaylor[i];
    } else {
      odd = odd * mu2 + kRecipGammaTaylor[i];
    }
  }
  RecipGammaParts parts{};
  parts.gam1 = -odd;
  parts.gam2 = even;
  parts.gampl = even + mu * odd;
  parts.gammi = even - mu * odd;
  return parts;
}

}  // namespace

FracOrder::FracOrder(double s) : s_(s) {
  if (!(s > 0.0 && s < 1.0)) {
    throw DomainError("fractional order must lie in (0,1), got " + std::to_string(s));
  }
}

double gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("gamma: argument must be positive");
  }
  return std::tgamma(x);
}

namespace detail {

std::pair<double, double> bessel_k_pair(double mu, double x, bool scaled) {
  constexpr int kMaxIter = 10000;
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  double kmu = 0.0;
  double k1 = 0.0;

  if (x < 2.0) {
    // Temme's series.
    const double x2 = 0.5 * x;
    const double pimu = kPi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const RecipGammaParts g = recip_gamma_parts(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
      const double di = i;
      ff = (di * ff + p + q) / (di * di - mu2);
      c *= d / di;
      p /= di - mu;
      q /= di + mu;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - di * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > kMaxIter) throw NumericalError("bessel_k: series failed to converge");
    kmu = sum;
    k1 = sum1 * xi2;
    if (scaled) {
      const double ex = std::exp(x);
      kmu *= ex;
      k1 *= ex;
    }
  } else {
    // Steed's continued fraction CF2.
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
      a -= 2 * i;
      c = -a * c / (i + 1.0);
      const double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < kEps) break;
    }
    if (i > kMaxIter) throw NumericalError("bessel_k: continued fraction failed to converge");
    h = a1 * h;
    kmu = std::sqrt(kPi / (2.0 * x)) * (scaled ? 1.0 : std::exp(-x)) / s;
    k1 = kmu * (mu + x + 0.5 - h) * xi;
  }
  return {kmu, k1};
}

double poisson_mass_integral(int d, double s) {
  // x = r(theta) direction, r = tan(theta): the radial integral becomes
  // int_0^{pi/2} sin^{d-1} cos^{2s-1}, singular at pi/2 when s < 1/2.
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto integrand = [d, s](double theta, double complement) {
    const double c = complement > 0.0 ? std::sin(complement) : std::cos(theta);
    return std::pow(std::sin(theta), d - 1) * std::pow(c, 2.0 * s - 1.0);
  };
  double error = 0.0;
  const double radial = integrator.integrate(integrand, 0.0, kPi / 2.0, 1e-15, &error);
  const double sphere = 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
  return sphere * radial;
}

}  // namespace detail

double bessel_k_scaled(double nu, double z) {
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("bessel_k: order must lie in (0,1)");
  if (!(z > 0.0)) throw DomainError("bessel_k: argument must be positive");
  const bool shift = nu > 0.5;
  const auto [kmu, k1] = detail::bessel_k_pair(shift ? nu - 1.0 : nu, z, true);
  return shift ? k1 : kmu;
}

double bessel_k(double nu, double z) {
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("bessel_k: order must lie in (0,1)");
  if (!(z > 0.0)) throw DomainError("bessel_k: argument must be positive");
  const bool shift = nu > 0.5;
  const auto [kmu, k1] = detail::bessel_k_pair(shift ? nu - 1.0 : nu, z, false);
  return shift ? k1 : kmu;
}

FractionalConstants constants(int d, FracOrder order) {
  if (d < 1) throw DomainError("constants: dimension must be >= 1");
  const double s = order.value();
  FractionalConstants k;
  k.d = d;
  k.s = s;
  k.c_ds = std::pow(2.0, 2.0 * s) * s * std::tgamma(0.5 * d + s) /
           (std::pow(kPi, 0.5 * d) * std::tgamma(1.0 - s));
  k.mu_s = std::pow(2.0, 2.0 * s - 1.0) * std::tgamma(s) / std::tgamma(1.0 - s);
  k.c_s = std::pow(2.0, 1.0 - s) / std::tgamma(s);
  k.kappa_ds = 1.0 / detail::poisson_mass_integral(d, s);
  return k;
}

}  // namespace fracfilt
