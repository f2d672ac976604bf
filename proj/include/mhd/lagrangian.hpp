#pragma once

// Flow maps of Eulerian velocity fields, Euler <-> Lagrange transport, and
// residual checks of the Lagrangian form of the equations.
//
// Matrix fields use the layout [i*dim + j] = M_ij. For the flow map,
// DX_ij = dX_i/dy_j, A = DX^{-1} and adj = J A. The matrix divergence is
// taken over the first index: (Div M)_i = sum_j d_j M_ji.

#include <array>
#include <vector>

#include "mhd/mhd_system.hpp"

namespace mhd {

struct FlowMap {
  Grid grid;
  double t = 0.0;
  /// Displacement X(t, y) - y (periodic).
  RealField X;
  RealField DX;
  RealField J;
  RealField A;
  RealField adj;

  /// Particle positions y + X(t, y), dim interleaved coordinates per point.
  std::vector<double> positions() const;
};

FlowMap identity_flow_map(const Grid& grid, double t = 0.0);

/// DX by spectral differentiation of the displacement, then J, A, adj
/// pointwise. Throws FoldError where J <= 0.
FlowMap flow_map_from_displacement(const RealField& displacement, double t);

struct FlowMapConfig {
  /// RK4 steps per snapshot interval. The cubic-in-time velocity
  /// interpolant limits accuracy long before the RK4 step does.
  int substeps = 1;
};

/// Integrates dX/dt = u(t, X) for every grid particle from the first
/// snapshot time to t (RK4; velocity by trigonometric interpolation in space
/// and cubic Lagrange interpolation in time between snapshots).
FlowMap compute_flow_map(const Trajectory& traj, double t, const FlowMapConfig& cfg = {});
/// Flow maps at every snapshot time, from a single integration pass.
std::vector<FlowMap> compute_flow_maps(const Trajectory& traj, const FlowMapConfig& cfg = {});

/// f(X(t, y)) on the lattice y.
RealField pull_back(const RealField& f, const FlowMap& fm);

/// Solves y + d(y) = x for every lattice point x by fixed-point iteration
/// (tolerance 1e-10, at most 50 sweeps). Returns interleaved y coordinates.
/// Throws NonConvergence when the iteration stalls.
std::vector<double> inverse_map_points(const FlowMap& fm);
/// Eulerian field f(x) = f_lag(X^{-1}(x)).
RealField push_forward(const RealField& f_lag, const FlowMap& fm);

/// (Div M)_i = sum_j d_j M_ji for a dim x dim matrix field.
RealField matrix_divergence(const RealField& M);
/// Pointwise M v for a matrix field and a vector field.
RealField mat_vec(const RealField& M, const RealField& v);
/// Pointwise M^T v.
RealField mat_t_vec(const RealField& M, const RealField& v);
/// Pointwise M N.
RealField mat_mul(const RealField& M, const RealField& N);
/// Pointwise outer product a b^T.
RealField outer(const RealField& a, const RealField& b);
/// Pointwise transpose.
RealField transpose(const RealField& M);
/// Identity matrix field.
RealField identity_matrix(const Grid& grid);

struct TransformResiduals {
  static constexpr int kCount = 5;
  /// Relative L2 residual of each identity (pulled-back Eulerian side vs
  /// Lagrangian side, normalized by the Eulerian side).
  std::array<double, kCount> relative{};
  /// Unnormalized L2 residual.
  std::array<double, kCount> absolute{};
  static const char* name(int i);
};

/// The five identities, for the state at the flow map's time:
///   grad|B|^2          = J^{-1} Div(adj |B|^2)
///   B.grad B           = J^{-1} Div(adj B B^T)
///   (div u) B          = J^{-1} div(adj u) B
///   (div u) B + u.grad B = J^{-1} Div(adj u B^T)
///   B.grad u           = J^{-1} Div(adj B u^T)
/// with tildes (composition with X) on every right-hand field.
TransformResiduals transform_residuals(const State& s, const FlowMap& fm, const PhysParams& params);

/// max_i ||sum_j d_j adj_ji||_2.
double piola_residual(const FlowMap& fm);
/// max pointwise |DX A - Id| and |adj - J A| / max(1, |adj|).
double det_adj_residual(const FlowMap& fm);

/// ||d_t (J rho~)||_2 at the snapshot nearest t, by the three-point
/// derivative over its neighbours.
double mass_residual(const Trajectory& traj, double t, const FlowMapConfig& cfg = {});
double mass_residual(const Trajectory& traj, const std::vector<FlowMap>& maps, std::size_t n);

/// Relative L2 mismatch of d_t J and J (div u)~ at interior snapshot n.
double liouville_residual(const Trajectory& traj, const std::vector<FlowMap>& maps, std::size_t n);

/// rho0 / J in Lagrangian coordinates.
RealField recover_density_lagrangian(const RealField& rho0, const FlowMap& fm);
/// Eulerian density (rho0 / J) o X^{-1}.
RealField recover_density(const RealField& rho0, const FlowMap& fm);

/// Weights w with f'(x) ~ sum_i w_i f(x_i) from the quadratic through three
/// distinct nodes.
std::array<double, 3> quadratic_derivative_weights(const std::array<double, 3>& nodes, double x);

}  // namespace mhd
