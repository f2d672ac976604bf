#pragma once

// Initial-condition library: equilibrium, single modes, the circularly
// polarized heat mode, band-limited random fields and divergence-free random
// magnetic fields. Random draws use std::mt19937_64 seeded explicitly.

#include <cstdint>
#include <random>
#include <string>

#include "mhd/mhd_system.hpp"

namespace mhd {

struct InitialSpec {
  /// equilibrium | single_mode | heat_mode | random | checkpoint
  std::string kind = "equilibrium";
  /// single_mode: perturbed field (rho | u | B), integer frequency, amplitude.
  std::string field = "u";
  IVec mode{1, 0, 0};
  double amplitude = 1e-2;
  /// random: sup-norm amplitudes of rho - rho_bar, u and B.
  double rho_amplitude = 1e-2;
  double u_amplitude = 1e-2;
  double B_amplitude = 1e-2;
  /// random: integer band lo <= max_i |k_i| <= hi.
  int band_lo = 1;
  int band_hi = 2;
  std::uint64_t seed = 1;
  std::string checkpoint_path;
};

/// Real field whose spectrum is supported on lo <= max_i |k_i| <= hi, drawn
/// from filtered uniform noise and scaled to sup norm `amplitude`.
RealField random_band_limited(const Grid& grid, int components, int lo, int hi, double amplitude,
                              std::mt19937_64& rng);

/// Divergence-free field: curl of a random potential in 3D, the rotated
/// gradient of a random stream function in 2D. Sup norm `amplitude`.
RealField random_divergence_free(const Grid& grid, int lo, int hi, double amplitude, std::mt19937_64& rng);

/// Equilibrium plus a cos(k.x) perturbation of one field. For u and B the
/// perturbation points along the first axis orthogonal to k (B stays
/// divergence free); rho is perturbed by amplitude * cos(k.x).
State single_mode_state(const Grid& grid, const PhysParams& params, const std::string& field,
                        const IVec& mode, double amplitude);

/// u = 0, rho = rho_bar, B = a (0, cos x1, sin x1) (3D, period 2 pi): an exact
/// solution with B(t) = e^{-nu t} B(0).
State heat_mode_state(const Grid& grid, const PhysParams& params, double amplitude);

/// rho_bar + random rho, random u, divergence-free random B.
State random_small_state(const Grid& grid, const PhysParams& params, const InitialSpec& spec);

/// Dispatches on spec.kind; checkpoint states are read from spec.checkpoint_path
/// and must match the grid.
State make_initial_state(const Grid& grid, const PhysParams& params, const InitialSpec& spec);

}  // namespace mhd
