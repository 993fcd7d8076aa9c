#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fracfilt/basis.hpp"
#include "fracfilt/singular.hpp"
#include "fracfilt/specfun.hpp"

namespace fracfilt {

/// psi_k(y) = c_s (sqrt(lambda) y)^s K_s(sqrt(lambda) y); psi_k(0) = 1.
double profile_psi(double lambda, FracOrder s, double y);

/// d/dy psi_k(y) = -c_s sqrt(lambda) (sqrt(lambda) y)^s K_{1-s}(sqrt(lambda) y).
double profile_psi_derivative(double lambda, FracOrder s, double y);

/// y^{1-2s} psi_k'(y), which stays bounded as y -> 0.
double profile_flux(double lambda, FracOrder s, double y);

/// n points spaced geometrically from lo to hi.
std::vector<double> log_spaced(double lo, double hi, int n);

/// A function on the cylinder B_R x (0, inf), sampled on an x-grid times a
/// y-grid. Extensions built from a Field keep that Field as their datum.
class ExtensionField {
public:
  ExtensionField(FracOrder s, std::vector<double> x, std::vector<double> y,
                 std::vector<double> values, std::optional<Field> datum = std::nullopt);

  FracOrder order() const noexcept { return s_; }
  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> y() const noexcept { return y_; }
  double at(std::size_t iy, std::size_t ix) const { return values_.at(iy * x_.size() + ix); }
  std::span<const double> row(std::size_t iy) const;
  /// Row belonging to the smallest y.
  std::span<const double> trace() const;
  const std::optional<Field>& datum() const noexcept { return datum_; }

private:
  FracOrder s_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> values_;
  std::optional<Field> datum_;
};

/// E_R(f)(x,y) = sum_k fhat_k phi_k(x) psi_k(y) on the basis nodes.
ExtensionField extend_cylinder(const Field& f, FracOrder s, std::span<const double> y);

/// -mu_s y^{1-2s} d/dy E_R(f)(., y), as a Field.
Field dtn_flux(const Field& f, FracOrder s, double y);

struct EnergyReport {
  /// sqrt(mu_s int int |grad u|^2 y^{1-2s})
  double energy = 0.0;
  /// Part of the squared energy coming from the exponential tail.
  double tail = 0.0;
  /// Relative change of the tail between n and n/2 Laguerre nodes.
  double tail_change = 0.0;
  bool tail_converged = true;
};

/// Weighted Dirichlet energy of a cylinder extension. Per mode the y-integral
/// is split at y = 1/sqrt(lambda_k): Gauss-Jacobi with weights y^{1-2s} and
/// y^{2s-1} below, Gauss-Laguerre above.
EnergyReport weighted_energy(const ExtensionField& u, int nodes = 64);

/// The weight rho_alpha: 1 on [0,1], exp(-alpha g(y)) beyond, with
/// g = (y-1)^2/2 on [1,2] and g = y - 3/2 after. |rho'| <= alpha rho.
class EnergyWeight {
public:
  explicit EnergyWeight(double alpha);
  double alpha() const noexcept { return alpha_; }
  double operator()(double y) const;
  double derivative(double y) const;
  /// int_0^inf rho(y) y^{1-2s} dy
  double weighted_mass(FracOrder s) const;

private:
  double alpha_;
};

/// Squared weighted energy int_{Omega_r} |grad E_R(f)|^2 y^{1-2s} over the
/// half-disc {x^2 + y^2 < r^2, y > 0}, for each field. All fields must share
/// one basis with r <= R.
std::vector<double> local_weighted_energy(std::span<const Field> fields, FracOrder s, double r,
                                          int ny = 48, int nx = 64);

// ---------------------------------------------------------------------------
// Half-space Poisson extension.

/// P_s(x,y) = kappa y^{2s} / (x^2 + y^2)^{(1+2s)/2} in d = 1.
double poisson_kernel(double x, double y, FracOrder s);

/// Piecewise-constant data on the line: cell j is [x0 + j h, x0 + (j+1) h];
/// the value `exterior` is assumed outside the window.
struct LineData {
  double x0 = 0.0;
  double h = 1.0;
  std::vector<double> values;
  double exterior = 0.0;

  double x_begin() const noexcept { return x0; }
  double x_end() const noexcept { return x0 + h * static_cast<double>(values.size()); }
  double center(std::size_t j) const noexcept { return x0 + (static_cast<double>(j) + 0.5) * h; }
};

/// Samples f at the cell midpoints of `cells` cells covering [-half_width, half_width].
LineData sample_line(const std::function<double(double)>& f, double half_width, int cells);

/// Window half-width used for data supported in [-support, support].
double default_window(double support);

struct PoissonResult {
  std::vector<double> values;
  /// d/dy of the extension at the same points.
  std::vector<double> dy;
  /// Kernel mass outside the window times the largest edge value.
  double truncation_estimate = 0.0;
  bool truncation_warning = false;
};

/// E(v)(x, y) = (P_s(., y) * v)(x), integrating the kernel exactly over
/// each cell.
PoissonResult poisson_extend(const LineData& v, FracOrder s, double y, std::span<const double> x,
                             double tol = 1e-8);

/// Same, evaluated at the cell centers; the kernel cell masses depend only
/// on index differences there, so this costs O(n) special-function calls.
PoissonResult poisson_extend_at_centers(const LineData& v, FracOrder s, double y,
                                        double tol = 1e-8);

struct PairingReport {
  /// int v (-Laplacian)^s phi over R
  double lhs = 0.0;
  /// mu_s int_{C_R} <grad E(v), grad E_R(phi)> y^{1-2s}
  double rhs = 0.0;
  double residual = 0.0;
};

/// Checks int v (-Laplacian)^s phi = mu_s int_{C_R} <grad E(v), grad E_R(phi)> y^{1-2s}
/// with phi the projection of v on the basis. v must be supported inside B_R;
/// E(v) uses `cells` cells over [-R, R].
PairingReport check_pairing_identity(const SmoothFunction& v, const BasisPtr& basis, FracOrder s,
                                     int cells);

}  // namespace fracfilt
