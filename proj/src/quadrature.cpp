#include "fracfilt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracfilt/errors.hpp"

namespace fracfilt::quad {

namespace {

Rule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("Golub-Welsch eigensolve failed");
  const auto n = diag.size();
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

Rule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("gauss_jacobi: need at least one node");
  if (!(alpha > -1.0 && beta > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");
  Eigen::VectorXd a(n);
  Eigen::VectorXd b(std::max(n - 1, 0));
  const double ab = alpha + beta;
  a(0) = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    a(k) = (beta * beta - alpha * alpha) / (t * (t + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
    const double den = t * t * (t + 1.0) * (t - 1.0);
    b(k - 1) = std::sqrt(num / den);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  return golub_welsch(a, b, mu0);
}

Rule gauss_jacobi_left(int n, double beta, double length) {
  Rule r = gauss_jacobi(n, 0.0, beta);
  // y = L (1+x)/2 ; y^beta dy = (L/2)^{beta+1} (1+x)^beta dx
  const double scale = std::pow(0.5 * length, beta + 1.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.nodes[i] = 0.5 * length * (1.0 + r.nodes[i]);
    r.weights[i] *= scale;
  }
  return r;
}

Rule gauss_legendre(int n, double a, double b) {
  Rule r = gauss_jacobi(n, 0.0, 0.0);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.nodes[i] = a + half * (1.0 + r.nodes[i]);
    r.weights[i] *= half;
  }
  return r;
}

Rule gauss_laguerre(int n) {
  if (n < 1) throw DomainError("gauss_laguerre: need at least one node");
  Eigen::VectorXd a(n);
  Eigen::VectorXd b(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) a(k) = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) b(k - 1) = k;
  return golub_welsch(a, b, 1.0);
}

double integrate(const Integrand& f, double a, double b, double rel_tol,
                 std::span<const double> breakpoints) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  struct Panel {
    double a, b, value, error, l1;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto eval = [&](double lo, double hi) {
    Panel p{lo, hi, 0.0, 0.0, 0.0};
    p.value = GK::integrate(f, lo, hi, 0, 0.0, &p.error, &p.l1);
    return p;
  };

  std::vector<double> cuts;
  cuts.push_back(a);
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Global adaptive bisection of the panel with the largest error. The
  // rounding floor keeps near-cancelling integrands from refining forever.
  std::priority_queue<Panel> queue;
  double total = 0.0, error = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Panel p = eval(cuts[i], cuts[i + 1]);
    total += p.value;
    error += p.error;
    l1 += p.l1;
    queue.push(p);
  }
  constexpr int kMaxSplits = 4000;
  const double floor = 64.0 * std::numeric_limits<double>::epsilon();
  for (int it = 0; it < kMaxSplits && !queue.empty(); ++it) {
    if (error <= std::max(rel_tol * std::abs(total), floor * l1)) break;
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    const Panel left = eval(worst.a, mid);
    const Panel right = eval(mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    queue.push(left);
    queue.push(right);
  }
  return total;
}

double integrate_tail(const Integrand& f, double a, double rel_tol) {
  if (!(a > 0.0)) throw DomainError("integrate_tail: lower limit must be positive");
  // z = a/u maps [a,inf) to (0,1]; algebraic decay turns into a mild
  // endpoint singularity at u = 0.
  auto mapped = [&](double u) {
    const double z = a / u;
    if (u <= 0.0 || !std::isfinite(z)) return 0.0;
    const double v = f(z) * a / (u * u);
    return std::isfinite(v) ? v : 0.0;
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0;
  return integrator.integrate(mapped, 0.0, 1.0, rel_tol, &err);
}

double integrate_endpoint_singular(const Integrand& f, double a, double b, double rel_tol) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0;
  return integrator.integrate(f, a, b, rel_tol, &err);
}

}  // namespace fracfilt::quad
