#include <gtest/gtest.h>

#include <cmath>

#include "mhd/initial_conditions.hpp"
#include "mhd/mhd_system.hpp"
#include "oracles.hpp"

using namespace mhd;

namespace {

Complex coef_at(const RealField& f, int comp, const IVec& k) { return to_spectral(f).coefficient(comp, k); }

}  // namespace

TEST(Pressure, GammaLawAndDerivatives) {
  PhysParams p;
  p.pressure_A = 2.0;
  p.pressure_gamma = 1.4;
  EXPECT_NEAR(pressure_value(1.5, p, 0), 2.0 * std::pow(1.5, 1.4), 1e-14);
  EXPECT_NEAR(pressure_value(1.5, p, 1), 2.0 * 1.4 * std::pow(1.5, 0.4), 1e-14);
  EXPECT_NEAR(pressure_value(1.5, p, 2), 2.0 * 1.4 * 0.4 * std::pow(1.5, -0.6), 1e-14);
  EXPECT_THROW(pressure_value(-1.0, p, 0), Error);
  EXPECT_NEAR(pressure_potential(1.0, p), 0.0, 1e-15);
  // Pi'' = P'/rho, so a small offset gives Pi ~ P'(1) d^2 / 2.
  EXPECT_NEAR(pressure_potential(1.0 + 1e-4, p), 0.5 * pressure_value(1.0, p, 1) * 1e-8, 1e-12);
}

TEST(Pressure, RangeBounds) {
  PhysParams p;
  p.pressure_gamma = 2.0;
  p.c0_floor = 0.5;
  const PressureBounds b = range_bounds(p);
  // On [1/8, 8]: P = rho^2 gives sup P = 64, inf P' = 1/4.
  EXPECT_NEAR(b.P_plus, 64.0, 1e-9);
  EXPECT_NEAR(b.P_minus, 0.25, 1e-9);
}

TEST(Params, Validation) {
  PhysParams p;
  EXPECT_NO_THROW(p.validate());
  p.mu = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p.mu = 0.1;
  p.lambda = -0.3;
  EXPECT_THROW(p.validate(), Error);
}

TEST(Propagators, PhiFunctions) {
  EXPECT_DOUBLE_EQ(etd_phi1(0.0), 1.0);
  EXPECT_DOUBLE_EQ(etd_phi2(0.0), 0.5);
  for (double z : {-1e-9, -1e-3, -0.5, -20.0}) {
    EXPECT_NEAR(etd_phi1(z), std::expm1(z) / z, 1e-15);
    // Direct formula cancels badly near zero; use the series there.
    const double ref = std::fabs(z) < 1e-2 ? 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0
                                           : (std::expm1(z) - z) / (z * z);
    EXPECT_NEAR(etd_phi2(z), ref, 1e-12);
  }
}

TEST(Propagators, HeatAndLameModeDecay) {
  const Grid g = make_grid(3, 16);
  const double nu = 0.3, mu = 0.2, lambda = 0.15, t = 0.7;
  const IVec k{2, -1, 3};
  const double k2 = 14.0;
  const auto mode = [&](const Vec3& x) { return std::cos(k[0] * x[0] + k[1] * x[1] + k[2] * x[2]); };
  const RealField heat = RealField::sample(g, 3, [&](const Vec3& x, int c) { return (c + 1) * mode(x); });
  const RealField h = to_physical(heat_propagator(to_spectral(heat), t, nu));
  const Complex c0 = coef_at(heat, 1, k), c1 = coef_at(h, 1, k);
  EXPECT_NEAR(std::abs(c1 / c0 - std::exp(-nu * k2 * t)), 0.0, 1e-12 * std::exp(-nu * k2 * t));

  // Longitudinal: along k. Transverse: (1, 2, 0) is orthogonal to k.
  const RealField lon = RealField::sample(g, 3, [&](const Vec3& x, int c) { return k[c] * mode(x); });
  const RealField tra = RealField::sample(g, 3, [&](const Vec3& x, int c) { return (c == 0 ? 1.0 : c == 1 ? 2.0 : 0.0) * mode(x); });
  const RealField l = to_physical(lame_propagator(to_spectral(lon), t, mu, lambda));
  const RealField r = to_physical(lame_propagator(to_spectral(tra), t, mu, lambda));
  const double el = std::exp(-(lambda + 2 * mu) * k2 * t), et = std::exp(-mu * k2 * t);
  for (int c = 0; c < 3; ++c) {
    if (k[c] != 0) EXPECT_NEAR(std::abs(coef_at(l, c, k) / coef_at(lon, c, k) - el), 0.0, 1e-12 * el);
  }
  EXPECT_NEAR(std::abs(coef_at(r, 0, k) / coef_at(tra, 0, k) - et), 0.0, 1e-12 * et);
  EXPECT_NEAR(std::abs(coef_at(r, 1, k) / coef_at(tra, 1, k) - et), 0.0, 1e-12 * et);
}

TEST(Rhs, EquilibriumIsStationary) {
  const Grid g = make_grid(3, 8);
  PhysParams p;
  const State s = State::equilibrium(g, p);
  const StateRate r = mhd_rhs(s, p);
  EXPECT_EQ(lp_norm(r.drho, kInfinity), 0.0);
  EXPECT_EQ(lp_norm(r.du, kInfinity), 0.0);
  EXPECT_EQ(lp_norm(r.dB, kInfinity), 0.0);
  const State n = step_etdrk2(s, 0.01, p);
  EXPECT_LT(lp_norm(n.rho - s.rho, kInfinity), 1e-15);
}

TEST(Rhs, IsothermalDensityPerturbation) {
  const Grid g = make_grid(1, 32);
  PhysParams p;
  p.pressure_gamma = 1.0;
  p.pressure_A = 1.3;
  const double a = 0.2;
  const State s = single_mode_state(g, p, "rho", {1, 0, 0}, a);
  const StateRate r = mhd_rhs(s, p);
  double e = 0.0;
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    const double x = g.coordinate(i)[0];
    e = std::max(e, std::fabs(r.du(0, i) - 1.3 * a * std::sin(x) / (1.0 + a * std::cos(x))));
  }
  EXPECT_LT(e, 1e-13);
  EXPECT_LT(lp_norm(r.drho, kInfinity), 1e-15);
}

TEST(Rhs, DensityFloorIsEnforced) {
  const Grid g = make_grid(2, 16);
  PhysParams p;
  const State s = single_mode_state(g, p, "rho", {1, 0, 0}, 0.95);
  try {
    mhd_rhs(s, p);
    FAIL() << "expected DensityFloor";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DensityFloor);
  }
}

TEST(Stepper, CflViolationNamesTheBound) {
  const Grid g = make_grid(2, 32);
  PhysParams p;
  const State s = single_mode_state(g, p, "u", {1, 1, 0}, 0.5);
  const double lim = cfl_limit(s, p, 0.4);
  const double speed = 0.5 + std::sqrt(1.4);
  EXPECT_NEAR(lim, 0.4 * g.spacing() / speed, 1e-12);
  try {
    step_etdrk2(s, 10 * lim, p);
    FAIL() << "expected CFLViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CFLViolation);
    EXPECT_NE(std::string(e.what()).find("CFL bound"), std::string::npos);
  }
}

TEST(Stepper, AcousticModeMatchesLinearOde) {
  // Small density wave: rho_k'' + (lambda + 2 mu) k^2 rho_k' + c^2 k^2 rho_k = 0.
  const Grid g = make_grid(1, 16);
  PhysParams p;
  p.mu = 0.05;
  p.lambda = 0.02;
  p.pressure_gamma = 1.0;
  const double eps = 1e-7, T = 1.0;
  const State s0 = single_mode_state(g, p, "rho", {1, 0, 0}, eps);
  IntegrateConfig ic;
  ic.dt = 1e-3;
  ic.t_end = T;
  const Trajectory tr = integrate(s0, p, ic);
  const double got = coef_at(tr.snapshots.back().rho, 0, {1, 0, 0}).real();
  const double damp = p.lambda + 2 * p.mu, c2 = p.pressure_A;
  const auto y = oracle::fine_ode(
      [&](double, const std::vector<double>& v) { return std::vector<double>{v[1], -damp * v[1] - c2 * v[0]}; },
      {0.5 * eps, 0.0}, 0.0, T, 20000);
  EXPECT_NEAR(got, y[0], 1e-4 * 0.5 * eps);
}

TEST(Stepper, SecondOrderInTime) {
  const Grid g = make_grid(2, 16);
  PhysParams p;
  InitialSpec spec;
  spec.rho_amplitude = spec.u_amplitude = spec.B_amplitude = 0.1;
  spec.band_hi = 2;
  const State s0 = random_small_state(g, p, spec);
  auto run = [&](double dt) {
    IntegrateConfig ic;
    ic.dt = dt;
    ic.t_end = 0.2;
    ic.snapshot_every = 1000000;
    return integrate(s0, p, ic).snapshots.back();
  };
  const State ref = run(0.2 / 512);
  const double e1 = lp_norm(run(0.02).u - ref.u, 2.0), e2 = lp_norm(run(0.01).u - ref.u, 2.0);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.2);
}

TEST(Stepper, HeatModeIsExact) {
  const Grid g = make_grid(3, 8);
  PhysParams p;
  const State s0 = heat_mode_state(g, p, 0.3);
  IntegrateConfig ic;
  ic.dt = 0.05;
  ic.t_end = 0.5;
  const State s = integrate(s0, p, ic).snapshots.back();
  EXPECT_LT(lp_norm(s.B - std::exp(-p.nu * 0.5) * s0.B, kInfinity), 1e-14);
  EXPECT_LT(lp_norm(s.u, kInfinity), 1e-14);
}

TEST(Integrate, LastStepLandsOnEnd) {
  const Grid g = make_grid(2, 8);
  PhysParams p;
  IntegrateConfig ic;
  ic.dt = 0.03;
  ic.t_end = 0.1;
  ic.snapshot_every = 2;
  const Trajectory tr = integrate(State::equilibrium(g, p), p, ic);
  const auto t = tr.times();
  EXPECT_DOUBLE_EQ(t.front(), 0.0);
  EXPECT_NEAR(t.back(), 0.1, 1e-15);
  // Four steps (the last one shortened); snapshots after steps 2 and 4.
  ASSERT_EQ(t.size(), 3u);
  EXPECT_NEAR(t[1], 0.06, 1e-15);
}

TEST(Energy, ClosedFormsForSingleModes) {
  const Grid g = make_grid(2, 16);
  PhysParams p;
  const double a = 0.1;
  const State sB = single_mode_state(g, p, "B", {1, 0, 0}, a);
  EXPECT_NEAR(total_energy(sB, p), 0.25 * a * a * g.volume(), 1e-14);
  EXPECT_NEAR(dissipation(sB, p), p.nu * 0.5 * a * a * g.volume(), 1e-14);
  const State su = single_mode_state(g, p, "u", {0, 2, 0}, a);
  EXPECT_NEAR(dissipation(su, p), p.mu * 4.0 * 0.5 * a * a * g.volume(), 1e-14);
  EXPECT_EQ(total_energy(State::equilibrium(g, p), p), 0.0);
  EXPECT_LT(div_b_norm(sB), 1e-14);
}

TEST(Flux, EllipticIdentitiesOnRandomStates) {
  PhysParams p;
  p.lambda = 0.05;
  for (int dim : {2, 3}) {
    const Grid g = make_grid(dim, 24);
    InitialSpec spec;
    spec.band_hi = g.points_per_axis() / 6;
    spec.rho_amplitude = spec.u_amplitude = spec.B_amplitude = 0.05;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      spec.seed = seed;
      const EllipticResiduals r = elliptic_residuals(random_small_state(g, p, spec), p);
      EXPECT_LT(r.rF, 1e-8);
      EXPECT_LT(r.rOmega, 1e-8);
    }
  }
}

TEST(Flux, EffectiveViscousFluxOfLongitudinalMode) {
  const Grid g = make_grid(1, 16);
  PhysParams p;
  p.lambda = 0.1;
  const State s = single_mode_state(g, p, "u", {1, 0, 0}, 0.01);
  const FluxFields f = flux_and_vorticity(s, p);
  double e = 0.0;
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    e = std::max(e, std::fabs(f.F(0, i) + (p.lambda + 2 * p.mu) * 0.01 * std::sin(g.coordinate(i)[0])));
  }
  EXPECT_LT(e, 1e-15);
}

TEST(Flux, MaterialDerivativeOfAdvectedProfile) {
  const Grid g = make_grid(1, 32);
  const RealField u = RealField::constant(g, 1, 0.7);
  const RealField f = RealField::sample(g, 1, [](const Vec3& x, int) { return std::sin(2 * x[0]); });
  const RealField ft = RealField::sample(g, 1, [](const Vec3& x, int) { return -1.4 * std::cos(2 * x[0]); });
  EXPECT_LT(lp_norm(material_derivative(f, ft, u).value, kInfinity), 1e-13);
}
