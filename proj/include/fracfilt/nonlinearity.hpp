#pragma once

#include <memory>
#include <string>
#include <vector>

namespace fracfilt {

/// A nondecreasing, locally Lipschitz Phi together with its potential
/// Psi(u) = int_0^u Phi(v) dv. Cheap to copy.
class Nonlinearity {
public:
  struct Impl;

  static Nonlinearity linear();
  /// Phi(u) = u |u|^{m-1}, m >= 1.
  static Nonlinearity porous_medium(double m);
  /// Phi(u) = (u - 1)_+.
  static Nonlinearity stefan();
  /// Piecewise linear through (u_i, phi_i), extended by the end slopes.
  /// The u_i must be strictly increasing and the phi_i nondecreasing.
  static Nonlinearity table(std::vector<double> u, std::vector<double> phi);

  /// v -> Phi(v + c) - Phi(c).
  Nonlinearity shifted(double c) const;
  /// u -> Phi(u) - v.
  Nonlinearity minus_constant(double v) const;

  double phi(double u) const;
  /// Right derivative where Phi has a kink.
  double dphi(double u) const;
  double psi(double u) const;
  /// sup |Phi'| on [a, b].
  double lipschitz_on(double a, double b) const;
  bool phi0_zero() const;
  /// Phi'(0) = 0, so the resolvent needs regularization near zero.
  bool degenerate() const;
  const std::string& name() const;

private:
  explicit Nonlinearity(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace fracfilt
