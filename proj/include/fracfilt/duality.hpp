#pragma once

#include <vector>

#include "fracfilt/basis.hpp"
#include "fracfilt/evolve.hpp"
#include "fracfilt/nonlinearity.hpp"
#include "fracfilt/specfun.hpp"

namespace fracfilt {

/// a = (Phi(u) - Phi(w)) / (u - w) at the snapshots of two trajectories.
/// Snapshot i (i >= 1) is taken to hold on (t_{i-1}, t_i].
struct BackwardCoefficient {
  BasisPtr basis;
  std::vector<double> times;
  std::vector<std::vector<double>> a;
  /// Lipschitz bound of Phi on the joint range of u and w.
  double lipschitz = 0.0;
  double sup() const;
};

/// Requires equal bases and times.
BackwardCoefficient build_coefficient(const Trajectory& u, const Trajectory& w, const Nonlinearity& phi);

/// a_{n,k}: piecewise constant in time on T_h = h T / n.
struct SmoothedCoefficient {
  BasisPtr basis;
  int k = 1;
  int n = 1;
  std::vector<double> partition;
  std::vector<std::vector<double>> pieces;
  /// ||(a_k - a)/sqrt(a_k)||_{L^2(B_R x (0,T))}
  double approx_error = 0.0;
  /// ||(a - a_{n,k})/sqrt(a_{n,k})||_{L^2}
  double partition_error = 0.0;
  /// ||a_{n,k} - a_k||_{L^2}
  double time_average_error = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;

  /// beta identically equal to `value` on every piece.
  static SmoothedCoefficient constant(BasisPtr basis, double T, int n, double value);
  double horizon() const { return partition.back(); }
  /// Index of the piece containing t.
  std::size_t piece_at(double t) const;
};

/// a_k = Gaussian mollification of a (width 1/k, cut at 4 widths) + 1/k,
/// then averaged in time over n equal pieces.
SmoothedCoefficient smooth_coefficient(const BackwardCoefficient& a, int k, int n);

/// psi_t = beta (-Laplacian)^s_R psi on (0,T), psi(T) = chi, solved forward in
/// sigma = T - t by implicit Euler on each piece. Pieces where beta is
/// constant are propagated exactly in the eigenbasis. The result is stored
/// in increasing t.
Trajectory backward_solve(const SmoothedCoefficient& beta, const Field& chi, FracOrder s,
                          int inner_steps, double cg_tol = 1e-13);

struct EnergyIdentity {
  /// int int beta [(-Laplacian)^s psi]^2 + 1/2 ||(-Laplacian)^{s/2} psi(0)||^2
  double lhs = 0.0;
  /// 1/2 ||(-Laplacian)^{s/2} chi||^2
  double rhs = 0.0;
  double residual = 0.0;
};

/// The time integral uses the value at the end of each reversed-time step.
EnergyIdentity energy_identity_check(const Trajectory& psi, const SmoothedCoefficient& beta,
                                     const Field& chi, FracOrder s);

struct WitnessReport {
  /// int (u(T) - w(T)) chi
  double witness = 0.0;
  /// (||u||_inf + ||w||_inf) ||(a - a_nk)/sqrt(a_nk)|| C_R
  double bound = 0.0;
  /// int int |u - w| |a - a_nk| |(-Laplacian)^s psi|, the quantity the bound controls.
  double controlled = 0.0;
  double c_r = 0.0;
  double partition_error = 0.0;
  double psi_min = 0.0;
  double psi_max = 0.0;
};

/// w is resampled at the times of u by linear interpolation.
WitnessReport uniqueness_witness(const Trajectory& u, const Trajectory& w, const Field& chi, int k,
                                 int n, const Nonlinearity& phi, FracOrder s, int inner_steps = 256);

}  // namespace fracfilt
