#include "mhd/energy_monitor.hpp"

#include <algorithm>
#include <cmath>

namespace mhd {

namespace {

// int f dx over the box for a scalar field.
double integral(const RealField& f) {
  return f.grid().volume() * kernels::sum(f.component(0)) / static_cast<double>(f.points());
}

RealField squared(const RealField& v) {
  RealField out(v.grid(), 1);
  auto o = out.component(0);
  for (int c = 0; c < v.components(); ++c) {
    auto a = v.component(c);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += a[i] * a[i];
  }
  return out;
}

RealField power(const RealField& f, double p) {
  RealField out = f;
  for (auto& x : out.component(0)) x = std::pow(x, p);
  return out;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) s += 0.5 * (t[k + 1] - t[k]) * (f[k] + f[k + 1]);
  return s;
}

// int_{t_n}^{t_{n+1}} f from the quadratic through three snapshots around the step.
double step_integral(const std::vector<double>& t, const std::vector<double>& f, std::size_t n) {
  const double h = t[n + 1] - t[n];
  if (t.size() < 3) return 0.5 * h * (f[n] + f[n + 1]);
  const std::size_t a = std::min(n, t.size() - 3);
  const double x0 = t[a], x1 = t[a + 1], x2 = t[a + 2];
  // Exact integral of the Lagrange basis polynomials over [t_n, t_{n+1}].
  auto basis_integral = [&](double xi, double xj, double xk) {
    auto F = [&](double x) {
      return (x * x * x / 3.0 - 0.5 * (xj + xk) * x * x + xj * xk * x) / ((xi - xj) * (xi - xk));
    };
    return F(t[n + 1]) - F(t[n]);
  };
  return f[a] * basis_integral(x0, x1, x2) + f[a + 1] * basis_integral(x1, x0, x2) +
         f[a + 2] * basis_integral(x2, x0, x1);
}

std::vector<const State*> snapshots_up_to(const Trajectory& traj, double T) {
  std::vector<const State*> out;
  const double slack = 1e-12 * std::max(1.0, std::fabs(T));
  for (const State& s : traj.snapshots) {
    if (s.t <= T + slack) out.push_back(&s);
  }
  return out;
}

}  // namespace

double sigma(double t) { return std::min(1.0, t); }

double hs_squared(const RealField& f, double s) {
  const SpectralField fh = to_spectral(f);
  const Grid& g = f.grid();
  double total = 0.0;
  for (int c = 0; c < fh.components(); ++c) {
    auto v = fh.component(c);
    for (std::size_t m = 0; m < g.num_modes(); ++m) {
      total += g.mode_weight(m) * std::pow(1.0 + g.k_squared(m), s) * std::norm(v[m]);
    }
  }
  return g.volume() * total;
}

double c0(const State& initial, const PhysParams& params) {
  validate_state(initial);
  RealField a = initial.rho;
  for (auto& x : a.component(0)) x -= params.rho_bar;
  return hs_squared(a, 0.0) + hs_squared(initial.u, 2.0) + hs_squared(initial.B, 1.0);
}

HoffFunctionals hoff_functionals(const Trajectory& traj, double T, const PhysParams& params) {
  const auto snaps = snapshots_up_to(traj, T);
  require(snaps.size() >= 3, ErrorCode::InvalidArgument, "hoff_functionals: need at least three snapshots up to T");
  const std::size_t n = snaps.size();
  std::vector<double> t(n), grad2(n), kin(n), kin_s(n), grad_dot(n), h3(n), h4(n), e(n);
  for (std::size_t k = 0; k < n; ++k) {
    const State& s = *snaps[k];
    t[k] = s.t;
    const double sg = sigma(s.t);
    const StateRate r = mhd_rhs(s, params);
    const RealField udot = material_derivative(s.u, r.du, s.u, DerivativeSource::PdeRhs).value;
    const RealField gu = gradient(s.u), gB = gradient(s.B);
    const RealField gu2 = squared(gu), gB2 = squared(gB);
    const RealField u2 = squared(s.u), B2 = squared(s.B);

    grad2[k] = integral(gu2) + integral(gB2);
    kin[k] = integral(pointwise_product(s.rho, squared(udot))) + integral(squared(r.dB));
    kin_s[k] = sg * kin[k];
    grad_dot[k] = sg * (integral(squared(gradient(udot))) + integral(squared(gradient(r.dB))));
    h3[k] = integral(power(gB2, 1.5)) + integral(power(gu2, 1.5));
    h4[k] = sg * (integral(pointwise_product(gB2, gB2)) + integral(pointwise_product(gu2, gu2)));
    e[k] = sg * integral(pointwise_product(gB2, B2) + pointwise_product(gB2, u2) + pointwise_product(gu2, B2));
  }
  HoffFunctionals h;
  h.A1 = *std::max_element(grad2.begin(), grad2.end()) + trapezoid(t, kin);
  h.A2 = *std::max_element(kin_s.begin(), kin_s.end()) + trapezoid(t, grad_dot);
  h.E_at_T = e.back();
  h.E_sup = *std::max_element(e.begin(), e.end());
  h.H = trapezoid(t, h3) + trapezoid(t, h4);
  return h;
}

EnergyBalance energy_balance(const Trajectory& traj, const PhysParams& params) {
  const std::size_t n = traj.snapshots.size();
  require(n >= 2, ErrorCode::InvalidArgument, "energy_balance: need at least two snapshots");
  std::vector<double> t(n), E(n), D(n), mass(n), grads(n);
  for (std::size_t k = 0; k < n; ++k) {
    const State& s = traj.snapshots[k];
    t[k] = s.t;
    E[k] = total_energy(s, params);
    D[k] = dissipation(s, params);
    RealField a = s.rho;
    for (auto& x : a.component(0)) x -= params.rho_bar;
    mass[k] = integral(squared(a)) + integral(pointwise_product(s.rho, squared(s.u))) + integral(squared(s.B));
    grads[k] = integral(squared(gradient(s.u))) + integral(squared(gradient(s.B)));
  }
  EnergyBalance b;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double r = E[k + 1] - E[k] + step_integral(t, D, k);
    b.max_step_residual = std::max(b.max_step_residual, std::fabs(r));
    b.accumulated_residual += r;
  }
  b.estimate_lhs = *std::max_element(mass.begin(), mass.end()) + trapezoid(t, grads);
  const double C0 = c0(traj.snapshots.front(), params);
  if (C0 > 0.0) b.ratio_to_c0 = b.estimate_lhs / C0;
  return b;
}

double blowup_indicator(const State& s, double q) {
  require(q >= 6.0, ErrorCode::InvalidArgument, "blowup_indicator: q must be >= 6");
  return lp_norm(s.rho, kInfinity) + lp_norm(s.u, q) + lp_norm(s.B, q);
}

EnergyReport energy_report(const Trajectory& traj, const PhysParams& params, double eps0, double q) {
  require(!traj.snapshots.empty(), ErrorCode::InvalidArgument, "energy_report: empty trajectory");
  EnergyReport r;
  r.eps0 = eps0;
  r.C0 = c0(traj.snapshots.front(), params);
  for (const State& s : traj.snapshots) {
    r.times.push_back(s.t);
    r.sigma_series.push_back(sigma(s.t));
    r.energy_series.push_back(total_energy(s, params));
    r.dissipation_series.push_back(dissipation(s, params));
    r.blowup_series.push_back(blowup_indicator(s, q));
  }
  if (traj.snapshots.size() >= 2) r.balance = energy_balance(traj, params);
  if (traj.snapshots.size() >= 3) r.hoff = hoff_functionals(traj, traj.snapshots.back().t, params);
  r.smallness_flag = r.C0 <= eps0 && r.hoff.A1 + r.hoff.A2 <= std::sqrt(eps0);
  return r;
}

}  // namespace mhd
