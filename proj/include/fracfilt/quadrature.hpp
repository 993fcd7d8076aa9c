#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fracfilt::quad {

/// Nodes and weights of an interpolatory rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double apply(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

/// Gauss-Jacobi rule on [-1,1] for the weight (1-x)^alpha (1+x)^beta,
/// built by Golub-Welsch.
Rule gauss_jacobi(int n, double alpha, double beta);

/// Gauss rule on [0,L] for the weight y^beta.
Rule gauss_jacobi_left(int n, double beta, double length = 1.0);

/// Gauss-Legendre on [a,b].
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Gauss-Laguerre on [0,inf) for the weight e^{-t}.
Rule gauss_laguerre(int n);

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod on [a,b], split at the given interior breakpoints.
double integrate(const Integrand& f, double a, double b, double rel_tol = 1e-12,
                 std::span<const double> breakpoints = {});

/// Integral over [a, inf) of a function with at least algebraic decay
/// faster than 1/z.
double integrate_tail(const Integrand& f, double a, double rel_tol = 1e-12);

/// Tanh-sinh on [a,b]; tolerant of integrable endpoint singularities.
double integrate_endpoint_singular(const Integrand& f, double a, double b,
                                   double rel_tol = 1e-12);

}  // namespace fracfilt::quad
