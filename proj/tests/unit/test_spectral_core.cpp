#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mhd/initial_conditions.hpp"
#include "mhd/spectral_core.hpp"
#include "oracles.hpp"

using namespace mhd;

namespace {

RealField random_field(const Grid& g, int comps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  RealField f(g, comps);
  for (auto& v : f.values()) v = d(rng);
  return f;
}

double max_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::fabs(a.values()[i] - b.values()[i]));
  return m;
}

}  // namespace

TEST(Grid, Geometry) {
  const Grid g = make_grid(3, 16);
  EXPECT_EQ(g.num_points(), 16u * 16u * 16u);
  EXPECT_EQ(g.num_modes(), 16u * 16u * 9u);
  EXPECT_EQ(g.cutoff(), 7);
  EXPECT_EQ(g.dealias_bound(), 5);
  EXPECT_NEAR(g.volume(), std::pow(2.0 * std::numbers::pi, 3), 1e-12);
  EXPECT_NEAR(g.spacing(), 2.0 * std::numbers::pi / 16.0, 1e-15);
  EXPECT_DOUBLE_EQ(g.wavenumber_unit(), 1.0);
}

TEST(Grid, NyquistIsUnresolved) {
  const Grid g = make_grid(2, 8);
  std::size_t slot = 0;
  bool conj = false;
  EXPECT_FALSE(g.slot_of({4, 1, 0}, slot, conj));
  // Row k_y = 1 of the halved 8 x 5 layout; column 4 holds the Nyquist frequency.
  const std::size_t nyquist = 1 * 5 + 4;
  EXPECT_FALSE(g.resolved(nyquist));
  EXPECT_EQ(g.mode_weight(nyquist), 0.0);
  ASSERT_TRUE(g.slot_of({-3, 2, 0}, slot, conj));
  EXPECT_TRUE(conj);
  EXPECT_TRUE(g.resolved(slot));
}

TEST(Transform, MatchesDirectSum) {
  for (int dim : {1, 2, 3}) {
    const Grid g = make_grid(dim, 8, 3.0);
    const RealField f = random_field(g, 2, 11 + dim);
    const SpectralField fh = to_spectral(f);
    for (std::size_t m = 0; m < g.num_modes(); ++m) {
      if (!g.resolved(m)) continue;
      for (int c = 0; c < 2; ++c) {
        const Complex ref = oracle::dft_coefficient(f, c, g.mode(m));
        EXPECT_LT(std::abs(fh(c, m) - ref), 1e-14) << "dim " << dim << " slot " << m;
      }
    }
  }
}

TEST(Transform, RoundTripOfResolvedField) {
  const Grid g = make_grid(3, 12);
  std::mt19937_64 rng(5);
  const RealField f = random_band_limited(g, 3, 0, g.cutoff(), 1.0, rng);
  EXPECT_LT(max_diff(to_physical(to_spectral(f)), f), 1e-14);
}

TEST(Transform, RejectsNonFinite) {
  const Grid g = make_grid(1, 8);
  RealField f(g, 1);
  f(0, 3) = std::nan("");
  try {
    to_spectral(f);
    FAIL() << "expected NonFinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
}

TEST(Derivatives, ExactOnTrigonometricPolynomials) {
  const Grid g = make_grid(2, 16, 4.0);
  const double w = g.wavenumber_unit();
  const RealField f = RealField::sample(g, 1, [&](const Vec3& x, int) {
    return std::sin(w * (2 * x[0] + 3 * x[1])) + std::cos(w * x[1]);
  });
  const RealField gf = gradient(f);
  const RealField lf = laplacian(f);
  double e = 0.0;
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    const Vec3 x = g.coordinate(i);
    const double ph = w * (2 * x[0] + 3 * x[1]);
    e = std::max(e, std::fabs(gf(0, i) - 2 * w * std::cos(ph)));
    e = std::max(e, std::fabs(gf(1, i) - (3 * w * std::cos(ph) - w * std::sin(w * x[1]))));
    e = std::max(e, std::fabs(lf(0, i) + 13 * w * w * std::sin(ph) + w * w * std::cos(w * x[1])));
  }
  EXPECT_LT(e, 1e-12);
}

TEST(Derivatives, VectorIdentities) {
  const Grid g = make_grid(3, 12);
  std::mt19937_64 rng(9);
  const RealField a = random_band_limited(g, 3, 1, 4, 1.0, rng);
  EXPECT_LT(lp_norm(divergence(curl(a)), kInfinity), 1e-12);
  const RealField phi = random_band_limited(g, 1, 1, 4, 1.0, rng);
  EXPECT_LT(lp_norm(curl(gradient(phi)), kInfinity), 1e-12);
  EXPECT_LT(max_diff(divergence(gradient(phi)), laplacian(phi)), 1e-11);
}

TEST(Norms, ConstantAndSingleMode) {
  const Grid g = make_grid(2, 16);
  const RealField c = RealField::constant(g, 1, 2.0);
  EXPECT_NEAR(lp_norm(c, 2.0), 2.0 * std::sqrt(g.volume()), 1e-12);
  EXPECT_NEAR(lp_norm(c, kInfinity), 2.0, 0.0);
  const RealField s = RealField::sample(g, 1, [](const Vec3& x, int) { return std::cos(x[0]); });
  EXPECT_NEAR(lp_norm(s, 2.0), std::sqrt(g.volume() / 2.0), 1e-12);
  EXPECT_NEAR(parseval_energy(to_spectral(s)), g.volume() / 2.0, 1e-12);
}

TEST(Norms, VectorMagnitude) {
  const Grid g = make_grid(1, 8);
  RealField v = RealField::constant(g, 2, 0.0);
  for (auto& x : v.component(0)) x = 3.0;
  for (auto& x : v.component(1)) x = 4.0;
  EXPECT_NEAR(lp_norm(v, kInfinity), 5.0, 1e-15);
}

TEST(Dealias, ProductMatchesDirectConvolution) {
  const Grid g = make_grid(2, 24);
  std::mt19937_64 rng(21);
  const int b = g.dealias_bound() / 2;
  const RealField u = random_band_limited(g, 1, 0, b, 1.0, rng);
  const RealField v = random_band_limited(g, 1, 0, b, 1.0, rng);
  const oracle::Spectrum su = oracle::spectrum(u, 0), sv = oracle::spectrum(v, 0);
  const oracle::Spectrum prod = oracle::convolve(su, sv);
  const RealField p = product(u, v);
  double e = 0.0;
  for (std::size_t i = 0; i < g.num_points(); i += 7) {
    e = std::max(e, std::fabs(p(0, i) - oracle::evaluate(prod, g.coordinate(i), 1.0, 2)));
  }
  EXPECT_LT(e, 1e-12);
}

TEST(Dealias, TruncationRemovesAliasedModes) {
  const Grid g = make_grid(1, 16);
  const int K = g.dealias_bound();
  const RealField f = RealField::sample(g, 1, [&](const Vec3& x, int) { return std::cos(K * x[0]) + std::cos((K + 1) * x[0]); });
  const RealField t = to_physical(truncated_two_thirds(to_spectral(f)));
  double e = 0.0;
  for (std::size_t i = 0; i < g.num_points(); ++i) e = std::max(e, std::fabs(t(0, i) - std::cos(K * g.coordinate(i)[0])));
  EXPECT_LT(e, 1e-14);
}

TEST(Series, EvaluatesOffGrid) {
  const Grid g = make_grid(3, 10);
  std::mt19937_64 rng(4);
  const RealField f = random_band_limited(g, 2, 0, 3, 1.0, rng);
  const kernels::TrigSeries s = make_series(to_spectral(f));
  const oracle::Spectrum s0 = oracle::spectrum(f, 0), s1 = oracle::spectrum(f, 1);
  std::uniform_real_distribution<double> d(0.0, 2.0 * std::numbers::pi);
  std::vector<double> pts(3 * 50);
  for (auto& p : pts) p = d(rng);
  std::vector<double> out(2 * 50);
  kernels::evaluate_series(s, pts, out);
  for (int i = 0; i < 50; ++i) {
    const Vec3 x{pts[3 * i], pts[3 * i + 1], pts[3 * i + 2]};
    EXPECT_NEAR(out[i], oracle::evaluate(s0, x, 1.0, 3), 1e-12);
    EXPECT_NEAR(out[50 + i], oracle::evaluate(s1, x, 1.0, 3), 1e-12);
  }
}

TEST(Series, BoundIgnoresTinyCoefficients) {
  const Grid g = make_grid(2, 16);
  SpectralField f(g, 1);
  std::size_t slot = 0;
  bool conj = false;
  ASSERT_TRUE(g.slot_of({1, 0, 0}, slot, conj));
  f(0, slot) = 0.5;
  ASSERT_TRUE(g.slot_of({0, 6, 0}, slot, conj));
  f(0, slot) = 1e-20;
  const IVec all = series_bound(f);
  const IVec cut = series_bound(f, 1e-16);
  EXPECT_EQ(all[1], 6);
  EXPECT_EQ(cut[0], 1);
  EXPECT_EQ(cut[1], 0);
}

TEST(Fields, GridMismatchIsRejected) {
  RealField a(make_grid(2, 8), 1), b(make_grid(2, 16), 1);
  try {
    a += b;
    FAIL() << "expected GridMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}
