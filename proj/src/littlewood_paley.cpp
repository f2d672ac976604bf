#include "mhd/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>

namespace mhd {

namespace {

double h(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double psi(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = h(s), b = h(1.0 - s);
  return a / (a + b);
}

// Trapezoid integral of y over t.
double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

double lr_sum(const std::vector<double>& terms, double r) {
  if (std::isinf(r)) {
    double m = 0.0;
    for (double v : terms) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  for (double v : terms) s += std::pow(v, r);
  return r == 1.0 ? s : std::pow(s, 1.0 / r);
}

void check_family(const Grid& g, const DyadicFamily& fam) {
  require_same_grid(g, fam.grid, "dyadic block");
}

}  // namespace

double lp_chi(double r) { return psi((4.0 / 3.0 - r) / (4.0 / 3.0 - 0.75)); }

double lp_phi(double r) { return lp_chi(0.5 * r) - lp_chi(r); }

double DyadicFamily::phi(int j, std::size_t slot) const {
  if (j < j_min || j > j_max) return 0.0;
  return table[static_cast<std::size_t>(j - j_min) * grid.num_modes() + slot];
}

DyadicFamily build_dyadic_family(const Grid& grid) {
  require(grid.cutoff() >= 3, ErrorCode::InvalidArgument, "dyadic family needs cutoff >= 3");
  DyadicFamily fam;
  fam.grid = grid;
  const double kmin = grid.wavenumber_unit();
  const double kmax = std::sqrt(static_cast<double>(grid.dim())) * grid.cutoff() * kmin;
  fam.j_min = std::min(-1, static_cast<int>(std::floor(std::log2(kmin))) - 1);
  fam.j_max = static_cast<int>(std::ceil(std::log2(kmax))) + 1;
  const std::size_t M = grid.num_modes();
  fam.table.assign(static_cast<std::size_t>(fam.count()) * M, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    if (!grid.resolved(m) || grid.k_squared(m) == 0.0) continue;
    const double r = std::sqrt(grid.k_squared(m));
    for (int j = fam.j_min; j <= fam.j_max; ++j) {
      const double x = std::ldexp(r, -j);
      double v = lp_phi(x);
      if (j == fam.j_min) v = lp_chi(0.5 * x);
      if (j == fam.j_max) v = 1.0 - lp_chi(x);
      fam.table[static_cast<std::size_t>(j - fam.j_min) * M + m] = v;
    }
  }
  return fam;
}

SpectralField dyadic_block(const SpectralField& f, const DyadicFamily& fam, int j, BlockKind which) {
  check_family(f.grid(), fam);
  const std::size_t M = f.modes();
  std::vector<double> mult(M, 0.0);
  if (which == BlockKind::Delta) {
    for (std::size_t m = 0; m < M; ++m) mult[m] = fam.phi(j, m);
  } else {
    for (int k = fam.j_min; k <= std::min(j - 1, fam.j_max); ++k) {
      for (std::size_t m = 0; m < M; ++m) mult[m] += fam.phi(k, m);
    }
    for (std::size_t m = 0; m < M; ++m) {
      if (f.grid().k_squared(m) == 0.0) mult[m] = 1.0;
    }
  }
  SpectralField out(f.grid(), f.components());
  for (int c = 0; c < f.components(); ++c) {
    auto in = f.component(c);
    auto o = out.component(c);
    for (std::size_t m = 0; m < M; ++m) o[m] = mult[m] * in[m];
  }
  return out;
}

RealField dyadic_block(const RealField& f, const DyadicFamily& fam, int j, BlockKind which) {
  return to_physical(dyadic_block(to_spectral(f), fam, j, which));
}

std::vector<double> block_norms(const RealField& f, const DyadicFamily& fam, double p) {
  const SpectralField fh = to_spectral(f);
  std::vector<double> out;
  out.reserve(fam.count());
  for (int j = fam.j_min; j <= fam.j_max; ++j) {
    out.push_back(lp_norm(to_physical(dyadic_block(fh, fam, j, BlockKind::Delta)), p));
  }
  return out;
}

double besov_norm(const RealField& f, const DyadicFamily& fam, const BesovSpec& spec) {
  require(spec.p >= 1.0 && spec.r >= 1.0, ErrorCode::InvalidArgument, "besov_norm: exponents must be >= 1");
  if (spec.weights) {
    require(static_cast<int>(spec.weights->size()) == fam.count(), ErrorCode::InvalidArgument,
            "besov_norm: need one weight per dyadic block");
  }
  const auto norms = block_norms(f, fam, spec.p);
  std::vector<double> terms(norms.size());
  for (int i = 0; i < fam.count(); ++i) {
    const double w = spec.weights ? (*spec.weights)[i] : 1.0;
    terms[i] = w * std::exp2(spec.s * (fam.j_min + i)) * norms[i];
  }
  return lr_sum(terms, spec.r);
}

double hybrid_besov_norm(const RealField& f, const DyadicFamily& fam, double s, double t, double q,
                         double p, int R0) {
  const auto nq = block_norms(f, fam, q);
  const auto np = p == q ? nq : block_norms(f, fam, p);
  double sum = 0.0;
  for (int i = 0; i < fam.count(); ++i) {
    const int j = fam.j_min + i;
    sum += j <= R0 ? std::exp2(s * j) * nq[i] : std::exp2(t * j) * np[i];
  }
  return sum;
}

double weight_omega(int k, double t, double c) {
  require(c > 0.0 && t >= 0.0, ErrorCode::InvalidArgument, "weight_omega: need c > 0, t >= 0");
  if (t == 0.0) return 0.0;
  if (std::isinf(t)) return 2.0;
  const int L = k + 45;
  auto bracket = [&](int l) { return std::sqrt(-std::expm1(-c * std::exp2(2.0 * l) * t)); };
  double s = 0.0;
  for (int l = k; l <= L; ++l) s += std::exp2(k - l) * bracket(l);
  return s + std::exp2(k - L) * bracket(L);
}

std::vector<double> omega_weights(const DyadicFamily& fam, double t, double c) {
  std::vector<double> w;
  for (int j = fam.j_min; j <= fam.j_max; ++j) w.push_back(weight_omega(j, t, c));
  return w;
}

namespace {

// ||Delta_j f(t_n)||_p for every snapshot n (outer) and block j (inner).
std::vector<std::vector<double>> series_block_norms(const FieldSeries& traj, const DyadicFamily& fam,
                                                    double p) {
  std::vector<std::vector<double>> out;
  out.reserve(traj.fields.size());
  for (const auto& f : traj.fields) out.push_back(block_norms(f, fam, p));
  return out;
}

void check_series(const FieldSeries& traj, double rho_time) {
  require(traj.times.size() == traj.fields.size(), ErrorCode::InvalidArgument,
          "field series: times and fields differ in length");
  require(!traj.fields.empty(), ErrorCode::InvalidArgument, "field series is empty");
  require(std::isinf(rho_time) || traj.times.size() >= 2, ErrorCode::InvalidArgument,
          "time integral needs at least 2 snapshots");
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    require(traj.times[i] > traj.times[i - 1], ErrorCode::InvalidArgument,
            "field series: times must increase");
  }
}

}  // namespace

CheminLernerValue chemin_lerner_norm(const FieldSeries& traj, const DyadicFamily& fam, double s,
                                     double p, double rho_time,
                                     const std::optional<std::vector<double>>& weights) {
  check_series(traj, rho_time);
  require(rho_time >= 1.0, ErrorCode::InvalidArgument, "chemin_lerner_norm: time exponent must be >= 1");
  const auto norms = series_block_norms(traj, fam, p);
  CheminLernerValue out;
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    out.quadrature_step = std::max(out.quadrature_step, traj.times[i] - traj.times[i - 1]);
  }
  const std::size_t N = traj.times.size();
  std::vector<double> y(N);
  for (int b = 0; b < fam.count(); ++b) {
    double tb = 0.0;
    if (std::isinf(rho_time)) {
      for (std::size_t n = 0; n < N; ++n) tb = std::max(tb, norms[n][b]);
    } else {
      for (std::size_t n = 0; n < N; ++n) y[n] = std::pow(norms[n][b], rho_time);
      tb = std::pow(trapezoid(traj.times, y), 1.0 / rho_time);
    }
    const double w = weights ? (*weights)[b] : 1.0;
    out.value += w * std::exp2(s * (fam.j_min + b)) * tb;
  }
  return out;
}

double time_integrated_besov(const FieldSeries& traj, const DyadicFamily& fam, double s, double p,
                             double rho_time) {
  check_series(traj, rho_time);
  const auto norms = series_block_norms(traj, fam, p);
  std::vector<double> y(traj.times.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    double b = 0.0;
    for (int i = 0; i < fam.count(); ++i) b += std::exp2(s * (fam.j_min + i)) * norms[n][i];
    y[n] = b;
  }
  if (std::isinf(rho_time)) return *std::max_element(y.begin(), y.end());
  for (auto& v : y) v = std::pow(v, rho_time);
  return std::pow(trapezoid(traj.times, y), 1.0 / rho_time);
}

BonyParts bony_decompose(const RealField& u, const RealField& v, const DyadicFamily& fam) {
  require_same_grid(u.grid(), v.grid(), "bony_decompose");
  require(u.components() == 1 && v.components() == 1, ErrorCode::InvalidArgument,
          "bony_decompose: scalar fields only");
  const SpectralField uh = to_spectral(u), vh = to_spectral(v);
  const int J = fam.count();
  std::vector<RealField> du, dv, su, sv;
  for (int j = fam.j_min; j <= fam.j_max; ++j) {
    du.push_back(to_physical(dyadic_block(uh, fam, j, BlockKind::Delta)));
    dv.push_back(to_physical(dyadic_block(vh, fam, j, BlockKind::Delta)));
    su.push_back(to_physical(dyadic_block(uh, fam, j - 1, BlockKind::SLow)));
    sv.push_back(to_physical(dyadic_block(vh, fam, j - 1, BlockKind::SLow)));
  }
  BonyParts out{RealField(u.grid(), 1), RealField(u.grid(), 1), RealField(u.grid(), 1)};
  for (int i = 0; i < J; ++i) {
    out.Tuv += pointwise_product(su[i], dv[i]);
    out.Tvu += pointwise_product(sv[i], du[i]);
    RealField near = dv[i];
    if (i > 0) near += dv[i - 1];
    if (i + 1 < J) near += dv[i + 1];
    out.R += pointwise_product(du[i], near);
  }
  return out;
}

double hs_norm(const RealField& f, double sigma) {
  const SpectralField fh = to_spectral(f);
  const Grid& g = f.grid();
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    auto v = fh.component(c);
    for (std::size_t m = 0; m < g.num_modes(); ++m) {
      const double k2 = g.k_squared(m);
      if (k2 == 0.0) continue;
      s += g.mode_weight(m) * std::pow(k2, sigma) * std::norm(v[m]);
    }
  }
  return std::sqrt(g.volume() * s);
}

}  // namespace mhd
