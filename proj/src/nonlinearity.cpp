#include "fracfilt/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "fracfilt/errors.hpp"

namespace fracfilt {

struct Nonlinearity::Impl {
  std::string name;
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> psi;
  std::function<double(double, double)> lipschitz;
  bool degenerate = false;
};

namespace {

std::string format_name(const std::string& base, double p) {
  std::ostringstream os;
  os << base << "(" << p << ")";
  return os.str();
}

}  // namespace

Nonlinearity Nonlinearity::linear() {
  auto impl = std::make_shared<Impl>();
  impl->name = "linear";
  impl->phi = [](double u) { return u; };
  impl->dphi = [](double) { return 1.0; };
  impl->psi = [](double u) { return 0.5 * u * u; };
  impl->lipschitz = [](double, double) { return 1.0; };
  return Nonlinearity(impl);
}

Nonlinearity Nonlinearity::porous_medium(double m) {
  if (!(m >= 1.0) || !std::isfinite(m)) throw DomainError("porous_medium: need m >= 1");
  if (m == 1.0) return linear();
  auto impl = std::make_shared<Impl>();
  impl->name = format_name("pme", m);
  impl->phi = [m](double u) { return std::copysign(std::pow(std::abs(u), m), u); };
  impl->dphi = [m](double u) { return m * std::pow(std::abs(u), m - 1.0); };
  impl->psi = [m](double u) { return std::pow(std::abs(u), m + 1.0) / (m + 1.0); };
  impl->lipschitz = [m](double a, double b) {
    return m * std::pow(std::max(std::abs(a), std::abs(b)), m - 1.0);
  };
  impl->degenerate = true;
  return Nonlinearity(impl);
}

Nonlinearity Nonlinearity::stefan() {
  auto impl = std::make_shared<Impl>();
  impl->name = "stefan";
  impl->phi = [](double u) { return std::max(u - 1.0, 0.0); };
  impl->dphi = [](double u) { return u >= 1.0 ? 1.0 : 0.0; };
  impl->psi = [](double u) {
    const double p = std::max(u - 1.0, 0.0);
    return 0.5 * p * p;
  };
  impl->lipschitz = [](double, double b) { return b >= 1.0 ? 1.0 : 0.0; };
  impl->degenerate = true;
  return Nonlinearity(impl);
}

Nonlinearity Nonlinearity::table(std::vector<double> u, std::vector<double> phi) {
  if (u.size() != phi.size()) throw SizeMismatch("table: u and phi differ in length");
  if (u.size() < 2) throw DomainError("table: need at least two points");
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    if (!(u[i + 1] > u[i])) throw DomainError("table: u must be strictly increasing");
    if (phi[i + 1] < phi[i]) throw DomainError("table: phi must be nondecreasing");
  }
  const std::size_t n = u.size();
  std::vector<double> slope(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) slope[i] = (phi[i + 1] - phi[i]) / (u[i + 1] - u[i]);

  auto segment = [u, n](double x) {
    const auto it = std::upper_bound(u.begin(), u.end(), x);
    std::size_t i = it == u.begin() ? 0 : static_cast<std::size_t>(it - u.begin()) - 1;
    return std::min(i, n - 2);
  };
  auto value = [u, phi, slope, segment](double x) {
    const std::size_t i = segment(x);
    return phi[i] + slope[i] * (x - u[i]);
  };
  // Psi(x) = int_0^x Phi, summed segment by segment between 0 and x.
  auto integral = [u, value, n](double a, double b) {
    double lo = std::min(a, b), hi = std::max(a, b);
    double total = 0.0;
    double cur = lo;
    while (cur < hi) {
      double next = hi;
      for (std::size_t i = 1; i + 1 < n; ++i) {
        if (u[i] > cur && u[i] < next) next = u[i];
      }
      total += 0.5 * (value(cur) + value(next)) * (next - cur);
      cur = next;
    }
    return b >= a ? total : -total;
  };

  auto impl = std::make_shared<Impl>();
  impl->name = "table";
  impl->phi = value;
  impl->dphi = [slope, segment](double x) { return slope[segment(x)]; };
  impl->psi = [integral](double x) { return integral(0.0, x); };
  impl->lipschitz = [slope, segment](double a, double b) {
    double best = 0.0;
    for (std::size_t i = segment(a); i <= segment(b); ++i) best = std::max(best, slope[i]);
    return best;
  };
  impl->degenerate = slope[segment(0.0)] == 0.0;
  return Nonlinearity(impl);
}

Nonlinearity Nonlinearity::shifted(double c) const {
  auto base = impl_;
  const double phic = base->phi(c);
  const double psic = base->psi(c);
  auto impl = std::make_shared<Impl>();
  impl->name = base->name + "-shifted";
  impl->phi = [base, c, phic](double v) { return base->phi(v + c) - phic; };
  impl->dphi = [base, c](double v) { return base->dphi(v + c); };
  impl->psi = [base, c, phic, psic](double v) { return base->psi(v + c) - psic - phic * v; };
  impl->lipschitz = [base, c](double a, double b) { return base->lipschitz(a + c, b + c); };
  impl->degenerate = base->dphi(c) == 0.0;
  return Nonlinearity(impl);
}

Nonlinearity Nonlinearity::minus_constant(double v) const {
  auto base = impl_;
  auto impl = std::make_shared<Impl>(*base);
  impl->name = base->name + "-offset";
  impl->phi = [base, v](double u) { return base->phi(u) - v; };
  impl->psi = [base, v](double u) { return base->psi(u) - v * u; };
  return Nonlinearity(impl);
}

double Nonlinearity::phi(double u) const { return impl_->phi(u); }
double Nonlinearity::dphi(double u) const { return impl_->dphi(u); }
double Nonlinearity::psi(double u) const { return impl_->psi(u); }

double Nonlinearity::lipschitz_on(double a, double b) const {
  if (a > b) std::swap(a, b);
  return impl_->lipschitz(a, b);
}

bool Nonlinearity::phi0_zero() const { return impl_->phi(0.0) == 0.0; }
bool Nonlinearity::degenerate() const { return impl_->degenerate; }
const std::string& Nonlinearity::name() const { return impl_->name; }

}  // namespace fracfilt
