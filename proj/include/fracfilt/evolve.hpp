#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fracfilt/basis.hpp"
#include "fracfilt/nonlinearity.hpp"
#include "fracfilt/specfun.hpp"

namespace fracfilt {

struct SolverConfig {
  double tau = 1.0 / 64.0;
  /// Regularization Phi_eps(u) = Phi(u) + eps u. Negative means automatic:
  /// 1e-8 ||u0||_inf for degenerate Phi, 0 otherwise.
  double eps = -1.0;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  /// Maximum number of step halvings in the Newton line search.
  int damping = 8;
  double cg_tol = 1e-14;
  int cg_max_iter = 5000;
};

/// Throws ConfigError on out-of-range fields.
void validate(const SolverConfig& cfg);

/// eps actually used for the data u0.
double effective_eps(const SolverConfig& cfg, const Nonlinearity& phi, const Field& u0);

struct StepDiagnostics {
  int newton_iterations = 0;
  int cg_iterations = 0;
  int halvings = 0;
  double residual = 0.0;
};

struct StepResult {
  Field u;
  StepDiagnostics diagnostics;
};

/// Solves u + tau S Phi_eps(u) = u_n on the grid, S = (-Laplacian)^s_R.
/// cfg.eps must already be resolved (>= 0). Throws NumericalError when
/// Newton does not converge.
StepResult resolvent_step(const Field& un, const SolverConfig& cfg, const Nonlinearity& phi,
                          FracOrder s);

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> fields;
  /// One entry per step; empty for derived trajectories.
  std::vector<StepDiagnostics> diagnostics;
  double eps = 0.0;

  const Field& initial() const { return fields.front(); }
  const Field& final() const { return fields.back(); }
  std::vector<double> sup_norms() const;
  /// Linear interpolation in time.
  Field at(double t) const;
};

/// Implicit Euler with ceil(T/tau) equal steps ending exactly at T.
Trajectory evolve(const Field& u0, double T, const SolverConfig& cfg, const Nonlinearity& phi,
                  FracOrder s);

struct ComparisonReport {
  /// min over nodes and times of w - u.
  double min_gap = 0.0;
  /// Range of all iterates of both trajectories.
  double min_value = 0.0;
  double max_value = 0.0;
  double max_initial = 0.0;
  Trajectory lower;
  Trajectory upper;
};

/// Evolves both data with identical settings. Requires u0 <= w0 on the grid.
ComparisonReport compare(const Field& u0, const Field& w0, double T, const SolverConfig& cfg,
                         const Nonlinearity& phi, FracOrder s);

struct MinimalEntry {
  double truncation = 0.0;
  double radius = 0.0;
  Trajectory trajectory;
};

struct MinimalReport {
  std::vector<MinimalEntry> solutions;
  /// max of u_{k,R1} - u_{k,R2} on B_{R1} over all times, R1 < R2.
  double domain_violation = 0.0;
  /// max of u_{k1,R} - u_{k2,R} over all times, k1 < k2.
  double truncation_violation = 0.0;
  /// Radius of the ball on which successive differences are measured.
  double window = 0.0;
  /// sup over B_window and times of |u_{R_{i+1}} - u_{R_i}| at the largest k.
  std::vector<double> successive_differences;
  /// Final field at the largest R and k.
  std::optional<Field> limit;
  double cauchy_estimate = 0.0;
  bool monotone = true;
};

struct MinimalSetup {
  std::vector<double> radii;
  std::vector<double> truncations;
  /// Common grid spacing; 2R/spacing must be an integer for every R.
  double spacing = 1.0 / 32.0;
  double T = 0.5;
  double window = 2.0;
  double tolerance = 1e-8;
};

/// Solves with data u0 chi_{B_k} on the nested balls B_R and checks both
/// monotonicities.
MinimalReport minimal_solution(const std::function<double(double)>& u0, const MinimalSetup& setup,
                               const SolverConfig& cfg, const Nonlinearity& phi, FracOrder s);

struct ShiftReduction {
  Field data;
  Nonlinearity phi;
  double c = 0.0;
};

/// c = min u0, data = u0 - c, phi(v) -> Phi(v + c) - Phi(c).
ShiftReduction shift_reduce(const Field& u0, const Nonlinearity& phi);

/// Adds c back to every snapshot.
Trajectory unshift(const Trajectory& traj, double c);

/// f_h(t_i) = (1/h) int_{t_i}^{t_i+h} f, for the stored times with t_i + h <= T,
/// integrating the piecewise linear interpolant exactly.
Trajectory steklov_average(const Trajectory& traj, double h);

struct LocalEnergyReport {
  double radius = 0.0;
  /// int_0^T int_{Omega_r} |grad E_R(Phi(u))|^2 y^{1-2s}
  double lhs = 0.0;
  /// (2/mu_s) int_{B_2r} Psi(u0)
  double potential_term = 0.0;
  /// ||Phi(u0)||_inf^2 int_{Omega_2r} y^{1-2s}
  double volume_term = 0.0;
  double constant = 10.0;
  double rhs = 0.0;
  /// Smallest constant for which lhs <= rhs.
  double measured_constant = 0.0;
  bool holds = true;
};

/// Local energy estimate over the half-disc Omega_r; requires 1/4 < r < R/2.
LocalEnergyReport local_energy_check(const Trajectory& traj, double r, const Nonlinearity& phi,
                                     FracOrder s, double constant = 10.0);

}  // namespace fracfilt
