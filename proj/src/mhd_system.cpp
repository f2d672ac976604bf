#include "mhd/mhd_system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mhd_internal.hpp"

namespace mhd {

State State::equilibrium(const Grid& grid, const PhysParams& params) {
  State s;
  s.rho = RealField::constant(grid, 1, params.rho_bar);
  s.u = RealField(grid, grid.dim());
  s.B = RealField(grid, grid.dim());
  return s;
}

void validate_state(const State& s) {
  const int dim = s.rho.grid().dim();
  require(s.rho.components() == 1, ErrorCode::InvalidArgument, "state: rho must be scalar");
  require(s.u.components() == dim && s.B.components() == dim, ErrorCode::InvalidArgument,
          "state: u and B need dim components");
  require_same_grid(s.rho.grid(), s.u.grid(), "state");
  require_same_grid(s.rho.grid(), s.B.grid(), "state");
  require(s.rho.all_finite() && s.u.all_finite() && s.B.all_finite(), ErrorCode::NonFinite,
          "state has NaN or Inf samples");
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(snapshots.size());
  for (const auto& s : snapshots) t.push_back(s.t);
  return t;
}

FieldSeries field_series(const Trajectory& traj, StateField which) {
  FieldSeries out;
  for (const auto& s : traj.snapshots) {
    out.times.push_back(s.t);
    out.fields.push_back(which == StateField::Rho ? s.rho : which == StateField::U ? s.u : s.B);
  }
  return out;
}

double pressure_value(double rho, const PhysParams& p, int order) {
  const double A = p.pressure_A, g = p.pressure_gamma;
  require(rho > 0.0, ErrorCode::InvalidArgument, "pressure: density must be positive");
  switch (order) {
    case 0: return A * std::pow(rho, g);
    case 1: return A * g * std::pow(rho, g - 1.0);
    case 2: return A * g * (g - 1.0) * std::pow(rho, g - 2.0);
    default: throw Error(ErrorCode::InvalidArgument, "pressure derivative order must be 0, 1 or 2");
  }
}

RealField pressure_eval(const RealField& rho, const PhysParams& params, int order) {
  require(order >= 0 && order <= 2, ErrorCode::InvalidArgument,
          "pressure derivative order must be 0, 1 or 2");
  require(kernels::min_value(rho.component(0)) > 0.0, ErrorCode::InvalidArgument,
          "pressure_eval: density must be positive");
  RealField out(rho.grid(), 1);
  auto in = rho.component(0);
  auto o = out.component(0);
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = pressure_value(in[i], params, order);
  return out;
}

PressureBounds range_bounds(const PhysParams& params, int k_max) {
  require(k_max >= 0 && k_max <= 2, ErrorCode::InvalidArgument, "range_bounds: k_max must be 0..2");
  constexpr int kSamples = 10000;
  const double lo = params.c0_floor / 4.0, hi = 4.0 / params.c0_floor;
  PressureBounds b;
  b.P_minus = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kSamples; ++i) {
    const double r = lo + (hi - lo) * i / (kSamples - 1);
    for (int k = 0; k <= k_max; ++k) b.P_plus = std::max(b.P_plus, std::fabs(pressure_value(r, params, k)));
    b.P_minus = std::min(b.P_minus, std::fabs(pressure_value(r, params, 1)));
  }
  return b;
}

namespace detail {

void check_density_floor(const RealField& rho, const PhysParams& params) {
  const double m = kernels::min_value(rho.component(0));
  const double floor = params.c0_floor / 4.0;
  if (!(m >= floor)) {
    std::ostringstream msg;
    msg << "min rho = " << m << " below floor c0/4 = " << floor;
    throw Error(ErrorCode::DensityFloor, msg.str());
  }
}

RealField dealiased(const RealField& f) { return to_physical(truncated_two_thirds(to_spectral(f))); }

RealField advect_pointwise(const RealField& ut, const RealField& grad_f) {
  const int dim = ut.grid().dim();
  const int fc = grad_f.components() / dim;
  RealField out(ut.grid(), fc);
  const std::size_t M = ut.points();
  for (int i = 0; i < fc; ++i) {
    auto o = out.component(i);
    for (int j = 0; j < dim; ++j) {
      auto a = ut.component(j);
      auto b = grad_f.component(i * dim + j);
      for (std::size_t x = 0; x < M; ++x) o[x] += a[x] * b[x];
    }
  }
  return out;
}

SpectralField project(const RealField& f) { return truncated_two_thirds(to_spectral(f)); }

RhsParts rhs_parts(const State& s, const PhysParams& p) {
  validate_state(s);
  check_density_floor(s.rho, p);
  const int dim = s.dim();
  RhsParts r;
  const SpectralField uh = to_spectral(s.u), Bh = to_spectral(s.B);
  const SpectralField uht = truncated_two_thirds(uh), Bht = truncated_two_thirds(Bh);
  const RealField rt = dealiased(s.rho);
  const RealField ut = to_physical(uht), Bt = to_physical(Bht);
  const RealField gu = to_physical(differentiate(uht, DiffKind::Gradient));
  const RealField gB = to_physical(differentiate(Bht, DiffKind::Gradient));

  r.drho = -1.0 * differentiate(project(pointwise_product(rt, ut)), DiffKind::Divergence);
  r.adv_u = project(advect_pointwise(ut, gu));

  const SpectralField Ph = pressure_spectral(s.rho, p);
  const SpectralField tension = project(advect_pointwise(Bt, gB));
  RealField B2(s.grid(), 1);
  for (int c = 0; c < dim; ++c) {
    const RealField bc = take_components(Bt, c, 1);
    B2 += pointwise_product(bc, bc);
  }
  const SpectralField B2h = project(B2);
  r.visc = p.mu * differentiate(uh, DiffKind::Laplacian) +
           p.mu_prime() * differentiate(differentiate(uh, DiffKind::Divergence), DiffKind::Gradient);
  r.M = tension - differentiate(Ph, DiffKind::Gradient) - 0.5 * differentiate(B2h, DiffKind::Gradient) +
        r.visc;

  // -(div u) B - u.grad B + B.grad u
  RealField divu(s.grid(), 1);
  for (int j = 0; j < dim; ++j) divu += take_components(gu, j * dim + j, 1);
  RealField ind = advect_pointwise(Bt, gu);
  ind -= advect_pointwise(ut, gB);
  ind -= pointwise_product(divu, Bt);
  r.dB_nl = project(ind);
  r.dB_lin = p.nu * differentiate(Bh, DiffKind::Laplacian);
  return r;
}

}  // namespace detail

RealField advection(const RealField& u, const RealField& f) {
  require_same_grid(u.grid(), f.grid(), "advection");
  require(u.components() == u.grid().dim(), ErrorCode::InvalidArgument, "advection: u needs dim components");
  const RealField ut = to_physical(truncated_two_thirds(to_spectral(u)));
  const RealField gf = to_physical(differentiate(truncated_two_thirds(to_spectral(f)), DiffKind::Gradient));
  return to_physical(detail::project(detail::advect_pointwise(ut, gf)));
}

SpectralField pressure_spectral(const RealField& rho, const PhysParams& params) {
  return detail::project(pressure_eval(rho, params, 0));
}

SpectralField momentum_forcing(const State& s, const PhysParams& params) {
  return detail::rhs_parts(s, params).M;
}

RealField magnetic_tension(const RealField& B) {
  const RealField Bt = to_physical(truncated_two_thirds(to_spectral(B)));
  const RealField gB = to_physical(differentiate(truncated_two_thirds(to_spectral(B)), DiffKind::Gradient));
  return to_physical(detail::project(detail::advect_pointwise(Bt, gB)));
}

StateRate mhd_rhs(const State& s, const PhysParams& params) {
  const detail::RhsParts r = detail::rhs_parts(s, params);
  StateRate out;
  out.drho = to_physical(r.drho);
  RealField Mp = to_physical(r.M);
  const std::size_t N = s.rho.points();
  auto rho = s.rho.component(0);
  for (int c = 0; c < s.dim(); ++c) {
    auto m = Mp.component(c);
    for (std::size_t i = 0; i < N; ++i) m[i] /= rho[i];
  }
  out.du = Mp - to_physical(r.adv_u);
  out.dB = to_physical(r.dB_nl + r.dB_lin);
  return out;
}

double pressure_potential(double rho, const PhysParams& p) {
  const double A = p.pressure_A, g = p.pressure_gamma, rb = p.rho_bar;
  if (g == 1.0) return A * (rho * std::log(rho / rb) - rho + rb);
  return A / (g - 1.0) * (std::pow(rho, g) - std::pow(rb, g) - g * std::pow(rb, g - 1.0) * (rho - rb));
}

double total_energy(const State& s, const PhysParams& params) {
  validate_state(s);
  const std::size_t N = s.rho.points();
  std::vector<double> e(N);
  auto rho = s.rho.component(0);
  for (std::size_t i = 0; i < N; ++i) {
    double u2 = 0.0, b2 = 0.0;
    for (int c = 0; c < s.dim(); ++c) {
      u2 += s.u(c, i) * s.u(c, i);
      b2 += s.B(c, i) * s.B(c, i);
    }
    e[i] = 0.5 * rho[i] * u2 + 0.5 * b2 + pressure_potential(rho[i], params);
  }
  return kernels::sum(e) * s.grid().volume() / static_cast<double>(N);
}

double dissipation(const State& s, const PhysParams& params) {
  validate_state(s);
  const SpectralField uh = to_spectral(s.u), Bh = to_spectral(s.B);
  const double gu = parseval_energy(differentiate(uh, DiffKind::Gradient));
  const double du = parseval_energy(differentiate(uh, DiffKind::Divergence));
  const double gB = parseval_energy(differentiate(Bh, DiffKind::Gradient));
  return params.mu * gu + params.mu_prime() * du + params.nu * gB;
}

double div_b_norm(const State& s) { return lp_norm(divergence(s.B), 2.0); }

}  // namespace mhd
