#include "mhd/initial_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mhd/checkpoint.hpp"

namespace mhd {

namespace {

int inf_norm(const IVec& k) { return std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])}); }

RealField rescale_sup(RealField f, double amplitude) {
  const double m = lp_norm(f, kInfinity);
  if (m > 0.0) f *= amplitude / m;
  return f;
}

SpectralField band_filtered_noise(const Grid& grid, int components, int lo, int hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  RealField noise(grid, components);
  for (auto& x : noise.values()) x = unif(rng);
  SpectralField h = to_spectral(noise);
  for (int c = 0; c < components; ++c) {
    auto v = h.component(c);
    for (std::size_t m = 0; m < grid.num_modes(); ++m) {
      const int k = inf_norm(grid.mode(m));
      if (k < lo || k > hi || !grid.resolved(m)) v[m] = 0.0;
    }
  }
  return h;
}

}  // namespace

RealField random_band_limited(const Grid& grid, int components, int lo, int hi, double amplitude,
                              std::mt19937_64& rng) {
  require(lo >= 0 && hi >= lo && hi <= grid.cutoff(), ErrorCode::InvalidArgument,
          "random_band_limited: band must satisfy 0 <= lo <= hi <= cutoff");
  return rescale_sup(to_physical(band_filtered_noise(grid, components, lo, hi, rng)), amplitude);
}

RealField random_divergence_free(const Grid& grid, int lo, int hi, double amplitude, std::mt19937_64& rng) {
  const int dim = grid.dim();
  require(dim == 2 || dim == 3, ErrorCode::InvalidArgument, "random_divergence_free: dim must be 2 or 3");
  require(lo >= 1 && hi >= lo && hi <= grid.cutoff(), ErrorCode::InvalidArgument,
          "random_divergence_free: band must satisfy 1 <= lo <= hi <= cutoff");
  if (dim == 3) {
    const SpectralField A = band_filtered_noise(grid, 3, lo, hi, rng);
    return rescale_sup(to_physical(differentiate(A, DiffKind::Curl)), amplitude);
  }
  const SpectralField psi = band_filtered_noise(grid, 1, lo, hi, rng);
  SpectralField B(grid, 2);
  const SpectralField d1 = differentiate(psi, DiffKind::Partial, 0);
  const SpectralField d2 = differentiate(psi, DiffKind::Partial, 1);
  for (std::size_t m = 0; m < grid.num_modes(); ++m) {
    B(0, m) = d2(0, m);
    B(1, m) = -d1(0, m);
  }
  return rescale_sup(to_physical(B), amplitude);
}

State single_mode_state(const Grid& grid, const PhysParams& params, const std::string& field,
                        const IVec& mode, double amplitude) {
  const int dim = grid.dim();
  State s = State::equilibrium(grid, params);
  const double unit = grid.wavenumber_unit();
  auto phase = [&](const Vec3& x) {
    double a = 0.0;
    for (int d = 0; d < dim; ++d) a += unit * mode[d] * x[d];
    return std::cos(a);
  };
  if (field == "rho") {
    s.rho = RealField::sample(grid, 1, [&](const Vec3& x, int) { return params.rho_bar + amplitude * phase(x); });
    return s;
  }
  require(field == "u" || field == "B", ErrorCode::InvalidArgument,
          "single_mode_state: field must be rho, u or B");
  require(dim >= 2 || field == "u", ErrorCode::InvalidArgument, "single_mode_state: a 1D B mode cannot be divergence free");
  int axis = -1;
  for (int d = 0; d < dim && axis < 0; ++d) {
    if (mode[d] == 0) axis = d;
  }
  // Every axis carries frequency: use e = (k2, -k1, 0), orthogonal to k.
  if (axis < 0) axis = dim == 1 ? 0 : dim;
  auto direction = [&](int c) -> double {
    if (axis < dim) return c == axis ? 1.0 : 0.0;
    const double n = std::hypot(mode[0], mode[1]);
    if (c == 0) return mode[1] / n;
    if (c == 1) return -mode[0] / n;
    return 0.0;
  };
  RealField f = RealField::sample(grid, dim, [&](const Vec3& x, int c) { return amplitude * direction(c) * phase(x); });
  if (field == "u") {
    s.u = std::move(f);
  } else {
    s.B = std::move(f);
  }
  return s;
}

State heat_mode_state(const Grid& grid, const PhysParams& params, double amplitude) {
  require(grid.dim() == 3, ErrorCode::InvalidArgument, "heat_mode_state: needs a 3D grid");
  State s = State::equilibrium(grid, params);
  const double unit = grid.wavenumber_unit();
  s.B = RealField::sample(grid, 3, [&](const Vec3& x, int c) {
    if (c == 1) return amplitude * std::cos(unit * x[0]);
    if (c == 2) return amplitude * std::sin(unit * x[0]);
    return 0.0;
  });
  return s;
}

State random_small_state(const Grid& grid, const PhysParams& params, const InitialSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  State s = State::equilibrium(grid, params);
  s.rho = random_band_limited(grid, 1, spec.band_lo, spec.band_hi, spec.rho_amplitude, rng);
  for (auto& x : s.rho.component(0)) x += params.rho_bar;
  s.u = random_band_limited(grid, grid.dim(), spec.band_lo, spec.band_hi, spec.u_amplitude, rng);
  if (grid.dim() >= 2) {
    s.B = random_divergence_free(grid, std::max(1, spec.band_lo), spec.band_hi, spec.B_amplitude, rng);
  }
  return s;
}

State make_initial_state(const Grid& grid, const PhysParams& params, const InitialSpec& spec) {
  if (spec.kind == "equilibrium") return State::equilibrium(grid, params);
  if (spec.kind == "single_mode") return single_mode_state(grid, params, spec.field, spec.mode, spec.amplitude);
  if (spec.kind == "heat_mode") return heat_mode_state(grid, params, spec.amplitude);
  if (spec.kind == "random") return random_small_state(grid, params, spec);
  if (spec.kind == "checkpoint") {
    Checkpoint cp = read_checkpoint(spec.checkpoint_path);
    require(cp.state.grid() == grid, ErrorCode::GridMismatch, "checkpoint grid differs from the configured grid");
    return cp.state;
  }
  throw Error(ErrorCode::ConfigError, "unknown initial condition kind '" + spec.kind + "'");
}

}  // namespace mhd
