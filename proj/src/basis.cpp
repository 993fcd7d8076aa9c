#include "fracfilt/basis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "fracfilt/errors.hpp"

namespace fracfilt {

namespace {

// FFTW's planner is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

DirichletBasis::DirichletBasis(double radius, int dim, int modes)
    : radius_(radius), dim_(dim), modes_(modes) {
  if (dim != 1) {
    throw FeatureError("DirichletBasis: only d = 1 is implemented (got d = " +
                       std::to_string(dim) + ")");
  }
  if (!(radius > 0.0)) throw DomainError("DirichletBasis: radius must be positive");
  if (modes < 1) throw DomainError("DirichletBasis: need at least one mode");

  spacing_ = 2.0 * radius / (modes + 1);
  lambdas_.resize(modes);
  nodes_.resize(modes);
  weights_.assign(modes, spacing_);
  for (int k = 1; k <= modes; ++k) {
    const double root = k * std::numbers::pi / (2.0 * radius);
    lambdas_[k - 1] = root * root;
    nodes_[k - 1] = -radius + k * spacing_;
  }

  std::vector<double> in(modes), out(modes);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_ = fftw_plan_r2r_1d(modes, in.data(), out.data(), FFTW_RODFT00,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan_ == nullptr) throw NumericalError("DirichletBasis: FFTW planning failed");
}

DirichletBasis::~DirichletBasis() {
  if (plan_ != nullptr) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

double DirichletBasis::eigenfunction(int k, double x) const {
  return std::sin(k * std::numbers::pi * (x + radius_) / (2.0 * radius_)) / std::sqrt(radius_);
}

double DirichletBasis::eigenfunction_derivative(int k, double x) const {
  const double root = k * std::numbers::pi / (2.0 * radius_);
  return root * std::cos(root * (x + radius_)) / std::sqrt(radius_);
}

void DirichletBasis::dst(std::span<const double> in, std::span<double> out) const {
  // RODFT00 with distinct input/output arrays, matching the plan.
  std::vector<double> scratch(in.begin(), in.end());
  fftw_execute_r2r(static_cast<fftw_plan>(plan_), scratch.data(), out.data());
}

void DirichletBasis::analyze(std::span<const double> values, std::span<double> coeffs) const {
  if (values.size() != static_cast<std::size_t>(modes_) || coeffs.size() != values.size()) {
    throw SizeMismatch("analyze: expected " + std::to_string(modes_) + " samples");
  }
  dst(values, coeffs);
  const double scale = spacing_ / (2.0 * std::sqrt(radius_));
  for (double& c : coeffs) c *= scale;
}

void DirichletBasis::synthesize(std::span<const double> coeffs, std::span<double> values) const {
  if (coeffs.size() != static_cast<std::size_t>(modes_) || values.size() != coeffs.size()) {
    throw SizeMismatch("synthesize: expected " + std::to_string(modes_) + " coefficients");
  }
  dst(coeffs, values);
  const double scale = 1.0 / (2.0 * std::sqrt(radius_));
  for (double& v : values) v *= scale;
}

std::vector<double> DirichletBasis::analyze(std::span<const double> values) const {
  std::vector<double> out(values.size());
  analyze(values, out);
  return out;
}

std::vector<double> DirichletBasis::synthesize(std::span<const double> coeffs) const {
  std::vector<double> out(coeffs.size());
  synthesize(coeffs, out);
  return out;
}

void DirichletBasis::apply_power(std::span<const double> values, double p,
                                 std::span<double> out) const {
  std::vector<double> c(values.size());
  analyze(values, c);
  for (int k = 0; k < modes_; ++k) c[k] *= std::pow(lambdas_[k], p);
  synthesize(c, out);
}

BasisPtr build_basis(double radius, int dim, int modes) {
  return std::make_shared<const DirichletBasis>(radius, dim, modes);
}

BasisPtr build_basis_with_spacing(double radius, double spacing) {
  if (!(spacing > 0.0)) throw DomainError("build_basis_with_spacing: spacing must be positive");
  const double cells = 2.0 * radius / spacing;
  const long n = std::lround(cells);
  if (std::abs(cells - static_cast<double>(n)) > 1e-9 * cells || n < 2) {
    throw DomainError("build_basis_with_spacing: 2R/spacing must be an integer >= 2");
  }
  return build_basis(radius, 1, static_cast<int>(n - 1));
}

// ---------------------------------------------------------------------------

Field::Field(BasisPtr basis, std::vector<double> coeffs, std::vector<double> values)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)), values_(std::move(values)) {}

Field Field::from_values(BasisPtr basis, std::vector<double> values) {
  auto coeffs = basis->analyze(values);
  return Field(std::move(basis), std::move(coeffs), std::move(values));
}

Field Field::from_coeffs(BasisPtr basis, std::vector<double> coeffs) {
  auto values = basis->synthesize(coeffs);
  return Field(std::move(basis), std::move(coeffs), std::move(values));
}

Field Field::from_function(BasisPtr basis, const std::function<double(double)>& f) {
  std::vector<double> values(basis->size());
  const auto x = basis->nodes();
  std::transform(x.begin(), x.end(), values.begin(), f);
  return from_values(std::move(basis), std::move(values));
}

Field Field::mode(BasisPtr basis, int k) {
  if (k < 1 || k > basis->size()) throw DomainError("Field::mode: index out of range");
  std::vector<double> c(basis->size(), 0.0);
  c[k - 1] = 1.0;
  return from_coeffs(std::move(basis), std::move(c));
}

Field Field::zero(BasisPtr basis) {
  const auto n = static_cast<std::size_t>(basis->size());
  return Field(std::move(basis), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

double Field::evaluate(double x) const {
  double acc = 0.0;
  for (int k = 1; k <= basis_->size(); ++k) acc += coeffs_[k - 1] * basis_->eigenfunction(k, x);
  return acc;
}

double Field::l2_norm() const {
  double acc = 0.0;
  for (double c : coeffs_) acc += c * c;
  return std::sqrt(acc);
}

double Field::inner(const Field& other) const {
  check_same_basis(other);
  double acc = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) acc += coeffs_[k] * other.coeffs_[k];
  return acc;
}

double Field::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
double Field::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

void Field::check_same_basis(const Field& o) const {
  if (basis_ != o.basis_ && (basis_->size() != o.basis_->size() ||
                             basis_->radius() != o.basis_->radius())) {
    throw SizeMismatch("Field: operands live on different bases");
  }
}

Field Field::operator+(const Field& o) const {
  check_same_basis(o);
  auto c = coeffs_;
  auto v = values_;
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] += o.coeffs_[i];
    v[i] += o.values_[i];
  }
  return Field(basis_, std::move(c), std::move(v));
}

Field Field::operator-(const Field& o) const { return *this + o * -1.0; }

Field Field::operator*(double a) const {
  auto c = coeffs_;
  auto v = values_;
  for (double& x : c) x *= a;
  for (double& x : v) x *= a;
  return Field(basis_, std::move(c), std::move(v));
}

Field apply_power(const Field& f, double p) {
  if (!(p >= 0.0)) throw DomainError("apply_power: exponent must be nonnegative");
  std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
  const auto lambda = f.basis().eigenvalues();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::pow(lambda[k], p);
  return Field::from_coeffs(f.basis_ptr(), std::move(c));
}

Field spectral_frac_laplacian(const Field& f, FracOrder s) { return apply_power(f, s.value()); }

double hs_norm(const Field& f, FracOrder s) { return apply_power(f, 0.5 * s.value()).l2_norm(); }

double dom_norm(const Field& f, FracOrder s) { return apply_power(f, s.value()).l2_norm(); }

}  // namespace fracfilt
