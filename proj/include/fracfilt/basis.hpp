#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fracfilt/specfun.hpp"

namespace fracfilt {

/// Dirichlet eigenpairs of -Laplacian on B_R = (-R,R), sampled on the
/// uniform interior grid x_j = -R + j h, h = 2R/(N+1), j = 1..N.
///
/// phi_k(x) = sin(k pi (x+R) / (2R)) / sqrt(R),  lambda_k = (k pi / (2R))^2.
/// Analysis and synthesis are an exact DST-I pair on this grid, so the
/// sampled eigenfunctions are orthonormal under the weights h.
///
/// Immutable after construction; share through BasisPtr.
class DirichletBasis {
public:
  DirichletBasis(double radius, int dim, int modes);
  ~DirichletBasis();
  DirichletBasis(const DirichletBasis&) = delete;
  DirichletBasis& operator=(const DirichletBasis&) = delete;

  double radius() const noexcept { return radius_; }
  int dim() const noexcept { return dim_; }
  int size() const noexcept { return modes_; }
  double spacing() const noexcept { return spacing_; }

  std::span<const double> eigenvalues() const noexcept { return lambdas_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Eigenvalue of mode k (1-based).
  double eigenvalue(int k) const { return lambdas_.at(k - 1); }
  double eigenfunction(int k, double x) const;
  double eigenfunction_derivative(int k, double x) const;

  std::vector<double> analyze(std::span<const double> values) const;
  std::vector<double> synthesize(std::span<const double> coeffs) const;
  void analyze(std::span<const double> values, std::span<double> coeffs) const;
  void synthesize(std::span<const double> coeffs, std::span<double> values) const;

  /// Grid-space application of the p-th power of the Dirichlet Laplacian.
  void apply_power(std::span<const double> values, double p, std::span<double> out) const;

private:
  void dst(std::span<const double> in, std::span<double> out) const;

  double radius_;
  int dim_;
  int modes_;
  double spacing_;
  std::vector<double> lambdas_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  void* plan_ = nullptr;
};

using BasisPtr = std::shared_ptr<const DirichletBasis>;

/// Builds the basis on B_R with N modes. Only d = 1 is implemented.
BasisPtr build_basis(double radius, int dim, int modes);

/// Basis on B_R whose grid spacing is exactly `spacing`, so that grids of
/// different radii sharing the spacing are nested. 2R/spacing must be an integer.
BasisPtr build_basis_with_spacing(double radius, double spacing);

/// Grid function on a DirichletBasis, held both as spectral coefficients and
/// as grid values. The two views are kept consistent by construction.
class Field {
public:
  static Field from_values(BasisPtr basis, std::vector<double> values);
  static Field from_coeffs(BasisPtr basis, std::vector<double> coeffs);
  static Field from_function(BasisPtr basis, const std::function<double(double)>& f);
  static Field mode(BasisPtr basis, int k);
  static Field zero(BasisPtr basis);

  const DirichletBasis& basis() const noexcept { return *basis_; }
  const BasisPtr& basis_ptr() const noexcept { return basis_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Spectral interpolant at an arbitrary point of [-R,R].
  double evaluate(double x) const;

  double l2_norm() const;
  double inner(const Field& other) const;
  double max_value() const;
  double min_value() const;

  Field operator+(const Field& o) const;
  Field operator-(const Field& o) const;
  Field operator*(double a) const;

private:
  Field(BasisPtr basis, std::vector<double> coeffs, std::vector<double> values);
  void check_same_basis(const Field& o) const;

  BasisPtr basis_;
  std::vector<double> coeffs_;
  std::vector<double> values_;
};

/// Coefficients lambda_k^p fhat_k; p may be any nonnegative real.
Field apply_power(const Field& f, double p);

/// (-Laplacian)^s_R on B_R.
Field spectral_frac_laplacian(const Field& f, FracOrder s);

/// ||f||_{H^s_0(B_R)} = sqrt(sum lambda_k^s fhat_k^2).
double hs_norm(const Field& f, FracOrder s);

/// ||f||_{Dom} = sqrt(sum lambda_k^{2s} fhat_k^2).
double dom_norm(const Field& f, FracOrder s);

}  // namespace fracfilt
