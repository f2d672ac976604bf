#include <algorithm>
#include <cmath>
#include <sstream>

#include "mhd/mhd_system.hpp"
#include "mhd_internal.hpp"

namespace mhd {

namespace {

double exp_fn(double z) { return std::exp(z); }

// Horner evaluation of sum_{i>=0} z^i / (i + offset)!.
double exp_tail(double z, int offset) {
  constexpr int kTerms = 14;
  double fact = 1.0;
  for (int i = 2; i <= offset; ++i) fact *= i;
  double c[kTerms];
  double f = fact;
  for (int i = 0; i < kTerms; ++i) {
    c[i] = 1.0 / f;
    f *= (i + offset + 1);
  }
  double r = c[kTerms - 1];
  for (int i = kTerms - 2; i >= 0; --i) r = r * z + c[i];
  return r;
}

}  // namespace

double etd_phi1(double z) {
  if (std::fabs(z) < 0.2) return exp_tail(z, 1);
  return std::expm1(z) / z;
}

double etd_phi2(double z) {
  if (std::fabs(z) < 0.2) return exp_tail(z, 2);
  return (std::expm1(z) - z) / (z * z);
}

SpectralField heat_function(const SpectralField& f, double nu, double h, double (*g)(double)) {
  const Grid& grid = f.grid();
  const std::size_t M = grid.num_modes();
  std::vector<double> mult(M);
  for (std::size_t m = 0; m < M; ++m) mult[m] = g(-h * nu * grid.k_squared(m));
  SpectralField out(grid, f.components());
  for (int c = 0; c < f.components(); ++c) {
    auto in = f.component(c);
    auto o = out.component(c);
    for (std::size_t m = 0; m < M; ++m) o[m] = mult[m] * in[m];
  }
  return out;
}

SpectralField lame_function(const SpectralField& f, double mu, double lambda, double h,
                            double (*g)(double)) {
  const Grid& grid = f.grid();
  const int dim = grid.dim();
  require(f.components() == dim, ErrorCode::InvalidArgument, "lame operator needs dim components");
  SpectralField out(grid, dim);
  const double g0 = g(0.0);
  for (std::size_t m = 0; m < grid.num_modes(); ++m) {
    const double k2 = grid.k_squared(m);
    if (k2 == 0.0) {
      for (int c = 0; c < dim; ++c) out(c, m) = g0 * f(c, m);
      continue;
    }
    const Vec3 k = grid.wavevector(m);
    Complex kf(0.0, 0.0);
    for (int c = 0; c < dim; ++c) kf += k[c] * f(c, m);
    const double gl = g(-h * (lambda + 2.0 * mu) * k2);
    const double gt = g(-h * mu * k2);
    for (int c = 0; c < dim; ++c) {
      const Complex lon = k[c] * kf / k2;
      out(c, m) = gl * lon + gt * (f(c, m) - lon);
    }
  }
  return out;
}

SpectralField heat_propagator(const SpectralField& f, double dt, double nu) {
  require(dt >= 0.0, ErrorCode::InvalidArgument, "propagator: dt must be nonnegative");
  return heat_function(f, nu, dt, exp_fn);
}

SpectralField lame_propagator(const SpectralField& f, double dt, double mu, double lambda) {
  require(dt >= 0.0, ErrorCode::InvalidArgument, "propagator: dt must be nonnegative");
  return lame_function(f, mu, lambda, dt, exp_fn);
}

double cfl_limit(const State& s, const PhysParams& params, double cfl_factor) {
  const std::size_t N = s.rho.points();
  std::vector<double> speed(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = s.rho(0, i);
    double u2 = 0.0, b2 = 0.0;
    for (int c = 0; c < s.dim(); ++c) {
      u2 += s.u(c, i) * s.u(c, i);
      b2 += s.B(c, i) * s.B(c, i);
    }
    speed[i] = std::sqrt(u2) + std::sqrt(std::max(0.0, pressure_value(r, params, 1))) + std::sqrt(b2 / r);
  }
  const double vmax = kernels::max_abs(speed);
  return cfl_factor * s.grid().spacing() / vmax;
}

namespace {

struct Nonlinear {
  SpectralField rho, u, B;
};

Nonlinear nonlinear_terms(const State& s, const PhysParams& p) {
  const detail::RhsParts r = detail::rhs_parts(s, p);
  RealField q = to_physical(r.M);
  const RealField visc = to_physical(r.visc);
  const std::size_t N = s.rho.points();
  auto rho = s.rho.component(0);
  for (int c = 0; c < s.dim(); ++c) {
    auto qc = q.component(c);
    auto vc = visc.component(c);
    for (std::size_t i = 0; i < N; ++i) qc[i] = qc[i] / rho[i] - vc[i] / p.rho_bar;
  }
  return {r.drho, detail::project(q) - r.adv_u, r.dB_nl};
}

RealField physical(const SpectralField& f) { return to_physical(f); }

}  // namespace

State step_etdrk2(const State& s, double dt, const PhysParams& p, const StepperConfig& cfg) {
  require(dt > 0.0, ErrorCode::InvalidArgument, "step_etdrk2: dt must be positive");
  validate_state(s);
  detail::check_density_floor(s.rho, p);
  const double limit = cfl_limit(s, p, cfg.cfl_factor);
  if (dt > limit) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "dt = " << dt << " exceeds the CFL bound cfl*h/max(|u| + sqrt(P'(rho)) + |B|/sqrt(rho)) = "
        << limit;
    throw Error(ErrorCode::CFLViolation, msg.str());
  }
  const double mu = p.mu / p.rho_bar, lam = p.lambda / p.rho_bar;
  const SpectralField rh = to_spectral(s.rho), uh = to_spectral(s.u), Bh = to_spectral(s.B);
  const Nonlinear n0 = nonlinear_terms(s, p);

  State a;
  a.t = s.t + dt;
  a.rho = physical(rh + dt * n0.rho);
  const SpectralField au = lame_function(uh, mu, lam, dt, exp_fn) + dt * lame_function(n0.u, mu, lam, dt, etd_phi1);
  const SpectralField aB = heat_function(Bh, p.nu, dt, exp_fn) + dt * heat_function(n0.B, p.nu, dt, etd_phi1);
  a.u = physical(au);
  a.B = physical(aB);
  const Nonlinear n1 = nonlinear_terms(a, p);

  State out;
  out.t = a.t;
  out.rho = physical(rh + dt * n0.rho + (0.5 * dt) * (n1.rho - n0.rho));
  out.u = physical(au + dt * lame_function(n1.u - n0.u, mu, lam, dt, etd_phi2));
  out.B = physical(aB + dt * heat_function(n1.B - n0.B, p.nu, dt, etd_phi2));
  detail::check_density_floor(out.rho, p);
  return out;
}

Trajectory integrate(const State& s0, const PhysParams& params, const IntegrateConfig& cfg,
                     const std::function<void(const State&)>& observer) {
  require(cfg.dt > 0.0, ErrorCode::InvalidArgument, "integrate: dt must be positive");
  require(cfg.snapshot_every >= 1, ErrorCode::InvalidArgument, "integrate: snapshot_every must be >= 1");
  params.validate();
  Trajectory traj;
  traj.params = params;
  traj.snapshots.push_back(s0);
  if (observer) observer(s0);
  State s = s0;
  const double t0 = s0.t;
  for (long k = 1;; ++k) {
    const double target = std::min(cfg.t_end, t0 + static_cast<double>(k) * cfg.dt);
    const double h = target - s.t;
    if (h <= 1e-12 * cfg.dt) break;
    s = step_etdrk2(s, h, params, cfg.stepper);
    s.t = target;
    if (observer) observer(s);
    const bool last = target >= cfg.t_end;
    if (last || k % cfg.snapshot_every == 0) traj.snapshots.push_back(s);
    if (last) break;
  }
  return traj;
}

}  // namespace mhd
