#pragma once

// Shared pieces of the right-hand side used by the stepper and the flux
// diagnostics; not part of the public interface.

#include "mhd/mhd_system.hpp"

namespace mhd::detail {

struct RhsParts {
  SpectralField drho;   // -div(rho u), truncated
  SpectralField adv_u;  // u.grad u, truncated
  SpectralField M;      // momentum forcing
  SpectralField visc;   // mu lap u + (lambda+mu) grad div u
  SpectralField dB_nl;  // -(div u)B - u.grad B + B.grad u, truncated
  SpectralField dB_lin; // nu lap B
};

void check_density_floor(const RealField& rho, const PhysParams& params);
RealField dealiased(const RealField& f);
/// sum_j ut_j d_j f_i with grad_f laid out [i*dim + j].
RealField advect_pointwise(const RealField& ut, const RealField& grad_f);
/// Forward transform followed by two-thirds truncation.
SpectralField project(const RealField& f);
RhsParts rhs_parts(const State& s, const PhysParams& p);

}  // namespace mhd::detail
