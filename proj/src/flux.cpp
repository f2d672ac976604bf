#include <algorithm>
#include <cmath>

#include "mhd/mhd_system.hpp"
#include "mhd_internal.hpp"

namespace mhd {

namespace {

// Residual denominators below this are treated as zero signal.
constexpr double kResidualFloor = 1e-12;

// [j*dim + k] = d_k (B^j B^k), both factors dealiased.
SpectralField magnetic_stress_divergence(const RealField& B) {
  const int dim = B.grid().dim();
  const RealField Bt = detail::dealiased(B);
  SpectralField out(B.grid(), dim);
  for (int j = 0; j < dim; ++j) {
    RealField row(B.grid(), dim);
    for (int k = 0; k < dim; ++k) {
      kernels::multiply(Bt.component(j), Bt.component(k), row.component(k));
    }
    const SpectralField d = differentiate(detail::project(row), DiffKind::Divergence);
    std::copy(d.component(0).begin(), d.component(0).end(), out.component(j).begin());
  }
  return out;
}

SpectralField half_b_squared(const RealField& B) {
  const RealField Bt = detail::dealiased(B);
  RealField b2(B.grid(), 1);
  for (int c = 0; c < B.components(); ++c) {
    const RealField bc = take_components(Bt, c, 1);
    b2 += pointwise_product(bc, bc);
  }
  return 0.5 * detail::project(b2);
}

}  // namespace

MaterialDerivative material_derivative(const RealField& f, const RealField& f_t, const RealField& u,
                                       DerivativeSource source) {
  require_same_grid(f.grid(), f_t.grid(), "material_derivative");
  require_same_grid(f.grid(), u.grid(), "material_derivative");
  require(f.components() == f_t.components(), ErrorCode::InvalidArgument,
          "material_derivative: f and f_t differ in components");
  return {f_t + advection(u, f), source};
}

FluxFields flux_and_vorticity(const State& s, const PhysParams& p) {
  validate_state(s);
  detail::check_density_floor(s.rho, p);
  const int dim = s.dim();
  FluxFields out;

  const RealField divu = divergence(s.u);
  const RealField P = to_physical(pressure_spectral(s.rho, p));
  const double Pbar = pressure_value(p.rho_bar, p, 0);
  out.F = RealField(s.grid(), 1);
  {
    auto F = out.F.component(0);
    auto d = divu.component(0);
    auto pr = P.component(0);
    for (std::size_t i = 0; i < F.size(); ++i) F[i] = (p.lambda + 2.0 * p.mu) * d[i] - pr[i] + Pbar;
  }

  const RealField G = gradient(s.u);
  out.omega = RealField(s.grid(), dim * dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      auto o = out.omega.component(j * dim + k);
      auto a = G.component(j * dim + k);
      auto b = G.component(k * dim + j);
      for (std::size_t i = 0; i < o.size(); ++i) o[i] = a[i] - b[i];
    }
  }

  const StateRate rate = mhd_rhs(s, p);
  const RealField udot = material_derivative(s.u, rate.du, s.u, DerivativeSource::PdeRhs).value;
  const RealField rho_udot = pointwise_product(s.rho, udot);
  const SpectralField g_hat = to_spectral(rho_udot) +
                              differentiate(half_b_squared(s.B), DiffKind::Gradient) -
                              magnetic_stress_divergence(s.B);
  out.g = to_physical(g_hat);
  return out;
}

EllipticResiduals elliptic_residuals(const State& s, const PhysParams& p) {
  const FluxFields ff = flux_and_vorticity(s, p);
  const int dim = s.dim();
  EllipticResiduals r;

  const SpectralField lapF = differentiate(to_spectral(ff.F), DiffKind::Laplacian);
  const SpectralField divg = differentiate(to_spectral(ff.g), DiffKind::Divergence);
  const double nF = lp_norm(to_physical(divg), 2.0);
  r.rF = lp_norm(to_physical(lapF - divg), 2.0) / std::max(nF, kResidualFloor);

  if (dim < 2) return r;
  const StateRate rate = mhd_rhs(s, p);
  const RealField udot = material_derivative(s.u, rate.du, s.u, DerivativeSource::PdeRhs).value;
  const SpectralField rho_udot = to_spectral(pointwise_product(s.rho, udot));
  const SpectralField tension = to_spectral(magnetic_tension(s.B));
  const SpectralField w = to_spectral(ff.omega);
  double num = 0.0, den = 0.0;
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      const SpectralField lhs =
          p.mu * differentiate(take_components(w, j * dim + k, 1), DiffKind::Laplacian);
      const SpectralField rhs =
          differentiate(take_components(rho_udot, j, 1), DiffKind::Partial, k) -
          differentiate(take_components(rho_udot, k, 1), DiffKind::Partial, j) -
          differentiate(take_components(tension, j, 1), DiffKind::Partial, k) +
          differentiate(take_components(tension, k, 1), DiffKind::Partial, j);
      num += lp_norm(to_physical(lhs - rhs), 2.0);
      den += lp_norm(to_physical(rhs), 2.0);
    }
  }
  r.rOmega = num / std::max(den, kResidualFloor);
  return r;
}

}  // namespace mhd
