#pragma once

// Eulerian isentropic compressible MHD: pressure law, right-hand sides,
// exact heat / Lame propagators, the ETDRK2 stepper, the total energy and
// dissipation, and the effective viscous flux with its elliptic identities.

#include <functional>
#include <vector>

#include "mhd/littlewood_paley.hpp"
#include "mhd/spectral_core.hpp"

namespace mhd {

struct State {
  double t = 0.0;
  RealField rho;
  RealField u;
  RealField B;

  const Grid& grid() const { return rho.grid(); }
  int dim() const { return rho.grid().dim(); }
  /// Constant density rho_bar, u = 0, B = 0.
  static State equilibrium(const Grid& grid, const PhysParams& params);
};

/// Checks component counts, shared grid and finiteness.
void validate_state(const State& s);

struct Trajectory {
  std::vector<State> snapshots;
  PhysParams params;

  std::vector<double> times() const;
  const Grid& grid() const { return snapshots.front().grid(); }
};

enum class StateField { Rho, U, B };
/// Time series of one of the state fields.
FieldSeries field_series(const Trajectory& traj, StateField which);

/// P, P' or P'' of the gamma law evaluated pointwise. Throws InvalidArgument
/// on nonpositive density.
RealField pressure_eval(const RealField& rho, const PhysParams& params, int derivative_order);
double pressure_value(double rho, const PhysParams& params, int derivative_order);

struct PressureBounds {
  double P_plus = 0.0;
  double P_minus = 0.0;
};

/// P_plus = max_{k<=k_max} sup |P^(k)|, P_minus = inf |P'| over [c0/4, 4/c0],
/// sampled at 10^4 points.
PressureBounds range_bounds(const PhysParams& params, int k_max = 2);

struct StateRate {
  RealField drho;
  RealField du;
  RealField dB;
};

/// u . grad f with the two-thirds rule (f scalar or vector).
RealField advection(const RealField& u, const RealField& f);

/// Pressure P(rho) in spectral form, truncated to the dealias ball. Every
/// consumer of grad P uses this so the structural identities hold exactly.
SpectralField pressure_spectral(const RealField& rho, const PhysParams& params);

/// Momentum forcing M = -grad P + B.grad B - grad |B|^2/2 + mu lap u + (lambda+mu) grad div u.
SpectralField momentum_forcing(const State& s, const PhysParams& params);
/// B.grad B with the two-thirds rule.
RealField magnetic_tension(const RealField& B);

/// drho = -div(rho u), du = -u.grad u + M/rho, dB = -(div u)B - u.grad B + B.grad u + nu lap B.
/// M/rho is formed pointwise. Throws DensityFloor when min rho < c0/4.
StateRate mhd_rhs(const State& s, const PhysParams& params);

double etd_phi1(double z);
double etd_phi2(double z);

/// Applies g(h * lambda) on each eigenspace of the heat symbol -nu |k|^2.
SpectralField heat_function(const SpectralField& f, double nu, double h, double (*g)(double));
/// Applies g(h * lambda) on the transverse (-mu |k|^2) and longitudinal
/// (-(lambda + 2 mu)|k|^2) eigenspaces of the Lame symbol.
SpectralField lame_function(const SpectralField& f, double mu, double lambda, double h,
                            double (*g)(double));

/// e^{t nu lap} f.
SpectralField heat_propagator(const SpectralField& f, double dt, double nu);
/// e^{t (mu lap + (lambda+mu) grad div)} f; f needs dim components.
SpectralField lame_propagator(const SpectralField& f, double dt, double mu, double lambda);

struct StepperConfig {
  double cfl_factor = 0.4;
};

/// Largest dt allowed by the CFL bound for this state.
double cfl_limit(const State& s, const PhysParams& params, double cfl_factor);

/// One ETDRK2 step. Linear parts: (mu lap + (lambda+mu) grad div)/rho_bar on u,
/// nu lap on B; density has none (the scheme reduces to Heun there).
/// Throws CFLViolation or DensityFloor.
State step_etdrk2(const State& s, double dt, const PhysParams& params,
                  const StepperConfig& cfg = {});

struct IntegrateConfig {
  double dt = 1e-3;
  double t_end = 0.0;
  /// Store a snapshot every this many steps (and always the final state).
  int snapshot_every = 1;
  StepperConfig stepper;
};

/// Steps from s0 to t_end with fixed dt (the last step is shortened to land
/// on t_end). The optional observer sees every accepted state.
Trajectory integrate(const State& s0, const PhysParams& params, const IntegrateConfig& cfg,
                     const std::function<void(const State&)>& observer = {});

/// int (rho |u|^2/2 + |B|^2/2 + Pi(rho)) with the pressure potential Pi
/// normalized so Pi(rho_bar) = Pi'(rho_bar) = 0.
double total_energy(const State& s, const PhysParams& params);
double pressure_potential(double rho, const PhysParams& params);
/// int (mu |grad u|^2 + (lambda+mu) |div u|^2 + nu |grad B|^2).
double dissipation(const State& s, const PhysParams& params);

double div_b_norm(const State& s);

struct FluxFields {
  RealField F;
  /// omega^{jk} = d_k u^j - d_j u^k stored at component j*dim + k.
  RealField omega;
  RealField g;
};

enum class DerivativeSource { Supplied, PdeRhs, CenteredDifference };

struct MaterialDerivative {
  RealField value;
  DerivativeSource source = DerivativeSource::Supplied;
};

/// f_t + u.grad f, the product dealiased exactly as in mhd_rhs.
MaterialDerivative material_derivative(const RealField& f, const RealField& f_t, const RealField& u,
                                       DerivativeSource source = DerivativeSource::Supplied);

/// F = (lambda + 2 mu) div u - P(rho) + P(rho_bar), omega, and
/// g^j = rho udot^j + d_j(|B|^2/2) - div(B^j B) with udot from the PDE.
FluxFields flux_and_vorticity(const State& s, const PhysParams& params);

struct EllipticResiduals {
  double rF = 0.0;
  double rOmega = 0.0;
};

/// rF = ||lap F - div g|| / max(||div g||, eps); rOmega the same for
/// mu lap omega^{jk} against its right side, summed over j < k.
EllipticResiduals elliptic_residuals(const State& s, const PhysParams& params);

}  // namespace mhd
