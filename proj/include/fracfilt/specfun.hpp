#pragma once

#include <utility>

namespace fracfilt {

/// Fractional order s of the operator, strictly inside (0,1).
class FracOrder {
public:
  explicit FracOrder(double s);
  double value() const noexcept { return s_; }
  bool operator==(const FracOrder&) const = default;

private:
  double s_;
};

/// Normalizing constants of the fractional Laplacian and its extensions
/// for a given dimension d and order s.
struct FractionalConstants {
  int d = 1;
  double s = 0.5;
  /// c_{d,s} in front of the singular integral.
  double c_ds = 0.0;
  /// mu_s in the Dirichlet-to-Neumann identity.
  double mu_s = 0.0;
  /// c_s making c_s z^s K_s(z) -> 1 as z -> 0.
  double c_s = 0.0;
  /// Poisson kernel normalizer: reciprocal of the integral of |(x,1)|^{-d-2s}.
  double kappa_ds = 0.0;
};

double gamma(double x);

/// Modified Bessel function of the second kind K_nu(z) for nu in (0,1).
double bessel_k(double nu, double z);

/// e^z K_nu(z); finite for all z > 0.
double bessel_k_scaled(double nu, double z);

FractionalConstants constants(int d, FracOrder s);

namespace detail {

/// K_mu(z) and K_{mu+1}(z) for |mu| <= 1/2, evaluated independently
/// (Temme series below z = 2, Steed continued fraction above).
/// With `scaled` both values carry the factor e^z.
std::pair<double, double> bessel_k_pair(double mu, double z, bool scaled);

/// Integral of |(x,1)|^{-d-2s} over R^d by adaptive quadrature.
double poisson_mass_integral(int d, double s);

}  // namespace detail

}  // namespace fracfilt
