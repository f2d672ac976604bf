#pragma once

// Trajectory diagnostics: the time weight sigma, the initial size C0, the
// Hoff functionals A1, A2, E, H, the L2 energy balance and the blow-up
// indicator.

#include <optional>
#include <vector>

#include "mhd/mhd_system.hpp"

namespace mhd {

/// min(1, t).
double sigma(double t);

/// ||f||_{H^s}^2 = volume sum_k (1 + |k|^2)^s |coef(k)|^2 over every component.
double hs_squared(const RealField& f, double s);

/// ||rho0 - rho_bar||_{L2}^2 + ||u0||_{H2}^2 + ||B0||_{H1}^2.
double c0(const State& initial, const PhysParams& params);

struct HoffFunctionals {
  double A1 = 0.0;
  double A2 = 0.0;
  /// sigma(T) int (|grad B|^2 |B|^2 + |grad B|^2 |u|^2 + |grad u|^2 |B|^2) at the last snapshot.
  double E_at_T = 0.0;
  /// Running supremum of the same integrand over snapshots up to T.
  double E_sup = 0.0;
  double H = 0.0;
};

/// Uses the snapshots with t <= T (at least three). u-dot and B_t come from
/// the PDE right-hand side; time integrals use the trapezoid rule.
HoffFunctionals hoff_functionals(const Trajectory& traj, double T, const PhysParams& params);

struct EnergyBalance {
  /// max_n |E(t_{n+1}) - E(t_n) + int_{t_n}^{t_{n+1}} D|.
  double max_step_residual = 0.0;
  /// E(T) - E(0) + int_0^T D (signed).
  double accumulated_residual = 0.0;
  /// sup_t int (|rho - rho_bar|^2 + rho |u|^2 + |B|^2) + int int (|grad u|^2 + |grad B|^2).
  double estimate_lhs = 0.0;
  /// estimate_lhs / C0; empty when C0 = 0 (reported as "undefined").
  std::optional<double> ratio_to_c0;
};

/// Energy E = total_energy, dissipation D = dissipation. The step integrals
/// of D use the quadratic through the three nearest snapshots (the trapezoid
/// rule when only two exist).
EnergyBalance energy_balance(const Trajectory& traj, const PhysParams& params);

/// ||rho||_inf + ||u||_{L^q} + ||B||_{L^q}; q >= 6.
double blowup_indicator(const State& s, double q);

struct EnergyReport {
  double C0 = 0.0;
  HoffFunctionals hoff;
  std::vector<double> times;
  std::vector<double> sigma_series;
  std::vector<double> energy_series;
  std::vector<double> dissipation_series;
  EnergyBalance balance;
  std::vector<double> blowup_series;
  double eps0 = 0.0;
  /// C0 <= eps0 and A1 + A2 <= eps0^{1/2}.
  bool smallness_flag = false;
};

EnergyReport energy_report(const Trajectory& traj, const PhysParams& params, double eps0, double q = 6.0);

}  // namespace mhd
