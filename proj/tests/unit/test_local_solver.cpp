#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mhd/initial_conditions.hpp"
#include "mhd/local_solver.hpp"

using namespace mhd;

namespace {

PicardConfig small_config() {
  PicardConfig c;
  c.p = 2.0;
  c.T = 8e-7;
  c.R = 9e-4;
  c.dt = c.T / 16;
  return c;
}

State small_state(const Grid& g, const PhysParams& p, double amp, std::uint64_t seed) {
  InitialSpec spec;
  spec.band_hi = 2;
  spec.rho_amplitude = spec.u_amplitude = spec.B_amplitude = amp;
  spec.seed = seed;
  return random_small_state(g, p, spec);
}

}  // namespace

TEST(PicardConfig, Validation) {
  PicardConfig c;
  EXPECT_NO_THROW(c.validate(3));
  EXPECT_THROW(c.validate(2), Error);  // p = 4 needs p < 2 dim
  c.p = 2.0;
  EXPECT_NO_THROW(c.validate(2));
  c.dt = 2 * c.T;
  EXPECT_THROW(c.validate(2), Error);
  c.dt = c.T / 16;
  EXPECT_EQ(c.steps(), 16);
  c.dt = c.T / 2.9999999;
  EXPECT_EQ(c.steps(), 3);
}

TEST(Picard, ExistenceTimeFormula) {
  EXPECT_DOUBLE_EQ(existence_time(0.0, 0.01), 0.01);
  EXPECT_NEAR(existence_time(1.0, 0.32), 0.02, 1e-16);
  EXPECT_THROW(existence_time(-1.0, 0.01), Error);
}

TEST(Picard, FreeSolutionsAreThePropagators) {
  const Grid g = make_grid(2, 16);
  PhysParams p;
  p.rho_bar = 2.0;
  const State s = small_state(g, p, 0.1, 3);
  const FreeSolutions f = free_solutions(s.u, s.B, p, {0.0, 0.5});
  EXPECT_LT(lp_norm(f.u.fields[0] - s.u, kInfinity), 1e-15);
  const RealField u1 = to_physical(lame_propagator(to_spectral(s.u), 0.5, p.mu / 2.0, p.lambda / 2.0));
  const RealField b1 = to_physical(heat_propagator(to_spectral(s.B), 0.5, p.nu));
  EXPECT_LT(lp_norm(f.u.fields[1] - u1, kInfinity), 1e-15);
  EXPECT_LT(lp_norm(f.B.fields[1] - b1, kInfinity), 1e-15);
}

TEST(Picard, FlowMapsOfConstantVelocity) {
  const Grid g = make_grid(2, 8);
  const RealField v = RealField::constant(g, 2, 0.25);
  const auto maps = lagrangian_flow_maps({{0.0, 0.1, 0.3}, {v, v, v}});
  ASSERT_EQ(maps.size(), 3u);
  EXPECT_LT(lp_norm(maps[2].X - RealField::constant(g, 2, 0.075), kInfinity), 1e-16);
  EXPECT_LT(lp_norm(maps[2].J - RealField::constant(g, 1, 1.0), kInfinity), 1e-15);
}

TEST(Picard, TimeDerivativeExactOnQuadratics) {
  const Grid g = make_grid(1, 8);
  const RealField a = RealField::constant(g, 1, 1.0);
  FieldSeries f;
  for (double t : {0.0, 0.1, 0.25, 0.4, 0.7}) {
    f.times.push_back(t);
    f.fields.push_back((2.0 * t * t - t + 3.0) * a);
  }
  const FieldSeries d = time_derivative(f);
  for (std::size_t k = 0; k < f.times.size(); ++k) {
    EXPECT_NEAR(d.fields[k](0, 0), 4.0 * f.times[k] - 1.0, 1e-13);
  }
}

TEST(Picard, SourceTermsAtIdentityMap) {
  const Grid g = make_grid(2, 16);
  PhysParams p;
  const State s = small_state(g, p, 0.1, 5);
  const FlowMap id = identity_flow_map(g);
  const RealField zero(g, 2);
  const SourceTerms st = source_terms(s.u, s.B, zero, zero, s.rho, id, p);
  for (const RealField* f : {&st.I1, &st.I2, &st.I3, &st.I7, &st.I8, &st.I9}) {
    EXPECT_LT(lp_norm(*f, kInfinity), 1e-15);
  }
  EXPECT_LT(lp_norm(st.I5 - outer(s.B, s.B), kInfinity), 1e-15);
  EXPECT_LT(lp_norm(st.I10 - outer(s.B, s.u), kInfinity), 1e-15);
  EXPECT_LT(lp_norm(st.I11 + pointwise_product(divergence(s.u), s.B), kInfinity), 1e-13);
  const RealField P = pressure_eval(s.rho, p, 0);
  for (std::size_t i = 0; i < g.num_points(); i += 17) {
    EXPECT_NEAR(st.I4(0, i), P(0, i), 1e-14);
    EXPECT_NEAR(st.I4(1, i), 0.0, 1e-15);
    const double b2 = s.B(0, i) * s.B(0, i) + s.B(1, i) * s.B(1, i);
    EXPECT_NEAR(st.I6(3, i), 0.5 * b2, 1e-15);
  }
}

TEST(Picard, NormIsHomogeneous) {
  const Grid g = make_grid(2, 16);
  const DyadicFamily fam = build_dyadic_family(g);
  PhysParams p;
  const State s = small_state(g, p, 0.1, 6);
  FieldSeries w{{0.0, 0.1, 0.2}, {s.u, 0.9 * s.u, 0.8 * s.u}};
  FieldSeries w2 = w;
  for (auto& f : w2.fields) f *= 3.0;
  const double n = ep_norm(w, fam, 2.0);
  EXPECT_GT(n, 0.0);
  EXPECT_NEAR(ep_norm(w2, fam, 2.0), 3.0 * n, 1e-12 * n);
  FieldSeries z{{0.0, 0.1, 0.2}, {RealField(g, 2), RealField(g, 2), RealField(g, 2)}};
  EXPECT_EQ(ep_norm(z, fam, 2.0), 0.0);
}

TEST(Picard, EquilibriumConvergesInOneIteration) {
  const Grid g = make_grid(2, 16);
  PhysParams p;
  const State s = State::equilibrium(g, p);
  const PicardResult r = picard_run(s.rho, s.u, s.B, p, small_config());
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 1);
  const State e = push_forward_final(r, s.rho);
  EXPECT_LT(lp_norm(e.rho - s.rho, kInfinity), 1e-15);
  EXPECT_LT(lp_norm(e.u, kInfinity), 1e-15);
}

TEST(Picard, SmallDataContracts) {
  const Grid g = make_grid(2, 32);
  PhysParams p;
  const State s = small_state(g, p, 0.01, 7);
  const PicardResult r = picard_run(s.rho, s.u, s.B, p, small_config());
  const PicardReport& rep = r.report;
  EXPECT_TRUE(rep.converged);
  EXPECT_TRUE(rep.conditions.all_pass);
  EXPECT_LE(rep.iterations, 25);
  for (double q : rep.ratios) EXPECT_LE(q, 0.6);
  EXPECT_LT(rep.momentum_residual, 1e-6);
  EXPECT_LT(rep.induction_residual, 1e-6);
  EXPECT_LT(rep.gauge_adj, 1e-12);
  EXPECT_EQ(rep.delta_norms.size(), static_cast<std::size_t>(rep.iterations));
  EXPECT_NEAR(rep.existence_time, existence_time(rep.conditions.a0_norm, 1e-2), 1e-18);
  // The returned pair solves the Lagrangian system it was built from.
  const LagrangianResiduals lr = lagrangian_residuals(r.solution, s.rho, p);
  EXPECT_NEAR(lr.momentum, rep.momentum_residual, 1e-12);
}

TEST(Picard, SmallnessFlagsFailForLargeTime) {
  const Grid g = make_grid(2, 16);
  PhysParams p;
  const State s = small_state(g, p, 0.01, 8);
  PicardConfig c = small_config();
  c.T = 1e-3;
  c.dt = c.T / 8;
  const PicardResult r = picard_run(s.rho, s.u, s.B, p, c);
  EXPECT_GT(r.report.conditions.T_over_R2, 1.0);
  EXPECT_FALSE(r.report.conditions.all_pass);
}
