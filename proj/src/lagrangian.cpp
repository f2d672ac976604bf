#include "mhd/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mhd {

namespace {

// Pointwise determinant and inverse of a dim x dim matrix stored row-major.
double det(const double* m, int dim) {
  switch (dim) {
    case 1: return m[0];
    case 2: return m[0] * m[3] - m[1] * m[2];
    default:
      return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
             m[2] * (m[3] * m[7] - m[4] * m[6]);
  }
}

// Adjugate (transposed cofactor matrix).
void adjugate(const double* m, int dim, double* a) {
  switch (dim) {
    case 1: a[0] = 1.0; return;
    case 2:
      a[0] = m[3];
      a[1] = -m[1];
      a[2] = -m[2];
      a[3] = m[0];
      return;
    default:
      a[0] = m[4] * m[8] - m[5] * m[7];
      a[1] = m[2] * m[7] - m[1] * m[8];
      a[2] = m[1] * m[5] - m[2] * m[4];
      a[3] = m[5] * m[6] - m[3] * m[8];
      a[4] = m[0] * m[8] - m[2] * m[6];
      a[5] = m[2] * m[3] - m[0] * m[5];
      a[6] = m[3] * m[7] - m[4] * m[6];
      a[7] = m[1] * m[6] - m[0] * m[7];
      a[8] = m[0] * m[4] - m[1] * m[3];
  }
}

std::vector<double> to_interleaved(const RealField& f) {
  const int c = f.components();
  const std::size_t M = f.points();
  std::vector<double> out(M * c);
  for (int k = 0; k < c; ++k) {
    auto v = f.component(k);
    for (std::size_t i = 0; i < M; ++i) out[i * c + k] = v[i];
  }
  return out;
}

// Grid coordinates, interleaved.
std::vector<double> lattice_points(const Grid& g) {
  const int dim = g.dim();
  std::vector<double> p(g.num_points() * dim);
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    const Vec3 x = g.coordinate(i);
    for (int d = 0; d < dim; ++d) p[i * dim + d] = x[d];
  }
  return p;
}

RealField evaluate_interleaved(const kernels::TrigSeries& s, const Grid& g, const std::vector<double>& pts) {
  return evaluate_at(s, g, pts);
}

// Lagrange interpolation weights at x for the given nodes.
std::vector<double> lagrange_weights(const std::vector<double>& nodes, double x) {
  std::vector<double> w(nodes.size(), 1.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (j != i) w[i] *= (x - nodes[j]) / (nodes[i] - nodes[j]);
    }
  }
  return w;
}

// Coefficients this far below the peak do not change particle paths at
// round-off level; dropping them keeps the evaluation box small.
constexpr double kSeriesTolerance = 1e-16;

// Velocity series of every snapshot on a common coefficient box.
class VelocityInterpolant {
 public:
  explicit VelocityInterpolant(const Trajectory& traj) : times_(traj.times()) {
    std::vector<SpectralField> uh;
    IVec bound = {0, 0, 0};
    for (const auto& s : traj.snapshots) {
      uh.push_back(to_spectral(s.u));
      const IVec b = series_bound(uh.back(), kSeriesTolerance);
      for (int d = 0; d < 3; ++d) bound[d] = std::max(bound[d], b[d]);
    }
    for (const auto& f : uh) series_.push_back(make_series(f, bound));
  }

  // Series at time tau, using the (up to) four snapshots around interval n.
  kernels::TrigSeries at(double tau, std::size_t n) const {
    const std::size_t N = times_.size();
    if (N == 1) return series_[0];
    const std::size_t width = std::min<std::size_t>(4, N);
    std::size_t i0 = n > 0 ? n - 1 : 0;
    i0 = std::min(i0, N - width);
    std::vector<double> nodes(times_.begin() + i0, times_.begin() + i0 + width);
    const auto w = lagrange_weights(nodes, tau);
    kernels::TrigSeries out = series_[i0];
    for (auto& c : out.coef) c *= w[0];
    for (std::size_t k = 1; k < width; ++k) {
      const auto& src = series_[i0 + k].coef;
      for (std::size_t m = 0; m < out.coef.size(); ++m) out.coef[m] += w[k] * src[m];
    }
    return out;
  }

  const std::vector<double>& times() const { return times_; }

 private:
  std::vector<double> times_;
  std::vector<kernels::TrigSeries> series_;
};

class ParticleIntegrator {
 public:
  ParticleIntegrator(const Trajectory& traj, int substeps)
      : grid_(traj.grid()), vel_(traj), substeps_(substeps), y_(lattice_points(grid_)), pos_(y_) {
    require(substeps >= 1, ErrorCode::InvalidArgument, "flow map: substeps must be >= 1");
  }

  // Advances the particles from vel_.times()[n] to t_target (inside interval n).
  void advance(std::size_t n, double t_target) {
    const double t0 = vel_.times()[n];
    if (t_target <= t0) return;
    const double h = (t_target - t0) / substeps_;
    const std::size_t L = pos_.size();
    std::vector<double> tmp(L);
    auto velocity = [&](double tau, const std::vector<double>& p) {
      return to_interleaved(evaluate_interleaved(vel_.at(tau, n), grid_, p));
    };
    for (int k = 0; k < substeps_; ++k) {
      const double tau = t0 + k * h;
      const auto k1 = velocity(tau, pos_);
      for (std::size_t i = 0; i < L; ++i) tmp[i] = pos_[i] + 0.5 * h * k1[i];
      const auto k2 = velocity(tau + 0.5 * h, tmp);
      for (std::size_t i = 0; i < L; ++i) tmp[i] = pos_[i] + 0.5 * h * k2[i];
      const auto k3 = velocity(tau + 0.5 * h, tmp);
      for (std::size_t i = 0; i < L; ++i) tmp[i] = pos_[i] + h * k3[i];
      const auto k4 = velocity(tau + h, tmp);
      for (std::size_t i = 0; i < L; ++i) pos_[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }

  FlowMap map(double t) const {
    const int dim = grid_.dim();
    RealField disp(grid_, dim);
    for (std::size_t i = 0; i < grid_.num_points(); ++i) {
      for (int d = 0; d < dim; ++d) disp(d, i) = pos_[i * dim + d] - y_[i * dim + d];
    }
    return flow_map_from_displacement(disp, t);
  }

 private:
  Grid grid_;
  VelocityInterpolant vel_;
  int substeps_;
  std::vector<double> y_;
  std::vector<double> pos_;
};

RealField scale_by_inverse(const RealField& f, const RealField& J) {
  RealField out = f;
  auto j = J.component(0);
  for (int c = 0; c < f.components(); ++c) {
    auto v = out.component(c);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] /= j[i];
  }
  return out;
}

// Pointwise sum_k a_k d_k b_i with spectral derivatives of b.
RealField directional(const RealField& a, const RealField& b) {
  const int dim = a.grid().dim();
  const RealField gb = gradient(b);
  RealField out(a.grid(), b.components());
  for (int i = 0; i < b.components(); ++i) {
    auto o = out.component(i);
    for (int k = 0; k < dim; ++k) {
      auto ak = a.component(k);
      auto g = gb.component(i * dim + k);
      for (std::size_t x = 0; x < o.size(); ++x) o[x] += ak[x] * g[x];
    }
  }
  return out;
}

}  // namespace

std::vector<double> FlowMap::positions() const {
  auto p = lattice_points(grid);
  const int dim = grid.dim();
  for (std::size_t i = 0; i < grid.num_points(); ++i) {
    for (int d = 0; d < dim; ++d) p[i * dim + d] += X(d, i);
  }
  return p;
}

RealField identity_matrix(const Grid& grid) {
  const int dim = grid.dim();
  RealField I(grid, dim * dim);
  for (int d = 0; d < dim; ++d) {
    for (auto& v : I.component(d * dim + d)) v = 1.0;
  }
  return I;
}

FlowMap identity_flow_map(const Grid& grid, double t) {
  return flow_map_from_displacement(RealField(grid, grid.dim()), t);
}

FlowMap flow_map_from_displacement(const RealField& displacement, double t) {
  const Grid& g = displacement.grid();
  const int dim = g.dim();
  require(displacement.components() == dim, ErrorCode::InvalidArgument,
          "flow map: displacement needs dim components");
  FlowMap fm;
  fm.grid = g;
  fm.t = t;
  fm.X = displacement;
  fm.DX = identity_matrix(g) + gradient(displacement);
  fm.J = RealField(g, 1);
  fm.A = RealField(g, dim * dim);
  fm.adj = RealField(g, dim * dim);
  const int d2 = dim * dim;
  double m[9], a[9];
  double jmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    for (int k = 0; k < d2; ++k) m[k] = fm.DX(k, i);
    const double J = det(m, dim);
    adjugate(m, dim, a);
    fm.J(0, i) = J;
    jmin = std::min(jmin, J);
    for (int k = 0; k < d2; ++k) {
      fm.adj(k, i) = a[k];
      fm.A(k, i) = a[k] / J;
    }
  }
  if (!(jmin > 0.0)) {
    std::ostringstream msg;
    msg << "flow map folds over at t = " << t << " (min J = " << jmin << ")";
    throw Error(ErrorCode::FoldError, msg.str());
  }
  return fm;
}

std::vector<FlowMap> compute_flow_maps(const Trajectory& traj, const FlowMapConfig& cfg) {
  require(!traj.snapshots.empty(), ErrorCode::InvalidArgument, "flow map: empty trajectory");
  ParticleIntegrator pi(traj, cfg.substeps);
  const auto times = traj.times();
  std::vector<FlowMap> maps;
  maps.push_back(pi.map(times[0]));
  for (std::size_t n = 0; n + 1 < times.size(); ++n) {
    pi.advance(n, times[n + 1]);
    maps.push_back(pi.map(times[n + 1]));
  }
  return maps;
}

FlowMap compute_flow_map(const Trajectory& traj, double t, const FlowMapConfig& cfg) {
  require(!traj.snapshots.empty(), ErrorCode::InvalidArgument, "flow map: empty trajectory");
  const auto times = traj.times();
  const double span = times.back() - times.front();
  require(t >= times.front() - 1e-12 * span && t <= times.back() + 1e-12 * span, ErrorCode::InvalidArgument,
          "flow map: t outside the trajectory time range");
  ParticleIntegrator pi(traj, cfg.substeps);
  for (std::size_t n = 0; n + 1 < times.size() && times[n] < t; ++n) {
    pi.advance(n, std::min(t, times[n + 1]));
  }
  return pi.map(t);
}

RealField pull_back(const RealField& f, const FlowMap& fm) {
  require_same_grid(f.grid(), fm.grid, "pull_back");
  return evaluate_at(make_series(to_spectral(f)), fm.grid, fm.positions());
}

std::vector<double> inverse_map_points(const FlowMap& fm) {
  const auto x = lattice_points(fm.grid);
  const auto d = make_series(to_spectral(fm.X));
  std::vector<double> y = x;
  const int dim = fm.grid.dim();
  for (int it = 0; it < 50; ++it) {
    const RealField dy = evaluate_at(d, fm.grid, y);
    double change = 0.0;
    for (std::size_t i = 0; i < fm.grid.num_points(); ++i) {
      for (int k = 0; k < dim; ++k) {
        const double nv = x[i * dim + k] - dy(k, i);
        change = std::max(change, std::fabs(nv - y[i * dim + k]));
        y[i * dim + k] = nv;
      }
    }
    if (change < 1e-10) return y;
  }
  throw Error(ErrorCode::NonConvergence, "inverse flow map: fixed-point iteration did not converge");
}

RealField push_forward(const RealField& f_lag, const FlowMap& fm) {
  require_same_grid(f_lag.grid(), fm.grid, "push_forward");
  return evaluate_at(make_series(to_spectral(f_lag)), fm.grid, inverse_map_points(fm));
}

RealField matrix_divergence(const RealField& M) {
  const Grid& g = M.grid();
  const int dim = g.dim();
  require(M.components() == dim * dim, ErrorCode::InvalidArgument, "matrix_divergence: need dim*dim components");
  const SpectralField Mh = to_spectral(M);
  SpectralField out(g, dim);
  for (std::size_t m = 0; m < g.num_modes(); ++m) {
    const Vec3 k = g.wavevector(m);
    for (int i = 0; i < dim; ++i) {
      Complex s(0.0, 0.0);
      for (int j = 0; j < dim; ++j) s += k[j] * Mh(j * dim + i, m);
      out(i, m) = Complex(0.0, 1.0) * s;
    }
  }
  return to_physical(out);
}

RealField mat_vec(const RealField& M, const RealField& v) {
  const int dim = v.components();
  RealField out(v.grid(), dim);
  for (int i = 0; i < dim; ++i) {
    auto o = out.component(i);
    for (int j = 0; j < dim; ++j) {
      auto a = M.component(i * dim + j);
      auto b = v.component(j);
      for (std::size_t x = 0; x < o.size(); ++x) o[x] += a[x] * b[x];
    }
  }
  return out;
}

RealField mat_t_vec(const RealField& M, const RealField& v) { return mat_vec(transpose(M), v); }

RealField mat_mul(const RealField& M, const RealField& N) {
  const int dim = M.grid().dim();
  RealField out(M.grid(), dim * dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      auto o = out.component(i * dim + j);
      for (int k = 0; k < dim; ++k) {
        auto a = M.component(i * dim + k);
        auto b = N.component(k * dim + j);
        for (std::size_t x = 0; x < o.size(); ++x) o[x] += a[x] * b[x];
      }
    }
  }
  return out;
}

RealField outer(const RealField& a, const RealField& b) {
  const int dim = a.components();
  RealField out(a.grid(), dim * dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) kernels::multiply(a.component(i), b.component(j), out.component(i * dim + j));
  }
  return out;
}

RealField transpose(const RealField& M) {
  const int dim = M.grid().dim();
  RealField out(M.grid(), dim * dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      auto s = M.component(j * dim + i);
      std::copy(s.begin(), s.end(), out.component(i * dim + j).begin());
    }
  }
  return out;
}

const char* TransformResiduals::name(int i) {
  static const char* names[kCount] = {"grad_B2", "B_grad_B", "divu_B", "divu_B_plus_u_grad_B", "B_grad_u"};
  return names[i];
}

TransformResiduals transform_residuals(const State& s, const FlowMap& fm, const PhysParams&) {
  validate_state(s);
  require_same_grid(s.grid(), fm.grid, "transform_residuals");
  const Grid& g = s.grid();
  const int dim = g.dim();

  RealField b2(g, 1);
  for (int c = 0; c < dim; ++c) {
    const RealField bc = take_components(s.B, c, 1);
    b2 += pointwise_product(bc, bc);
  }
  const RealField divu = divergence(s.u);
  const RealField eul[TransformResiduals::kCount] = {
      gradient(b2),
      directional(s.B, s.B),
      pointwise_product(divu, s.B),
      pointwise_product(divu, s.B) + directional(s.u, s.B),
      directional(s.B, s.u),
  };

  const RealField Bt = pull_back(s.B, fm), ut = pull_back(s.u, fm);
  RealField bt2(g, 1);
  for (int c = 0; c < dim; ++c) {
    const RealField bc = take_components(Bt, c, 1);
    bt2 += pointwise_product(bc, bc);
  }
  const RealField adjB = mat_vec(fm.adj, Bt), adju = mat_vec(fm.adj, ut);
  const RealField lag[TransformResiduals::kCount] = {
      scale_by_inverse(matrix_divergence(pointwise_product(fm.adj, bt2)), fm.J),
      scale_by_inverse(matrix_divergence(outer(adjB, Bt)), fm.J),
      scale_by_inverse(pointwise_product(divergence(adju), Bt), fm.J),
      scale_by_inverse(matrix_divergence(outer(adju, Bt)), fm.J),
      scale_by_inverse(matrix_divergence(outer(adjB, ut)), fm.J),
  };

  TransformResiduals r;
  for (int i = 0; i < TransformResiduals::kCount; ++i) {
    const RealField lhs = pull_back(eul[i], fm);
    const double scale = lp_norm(lhs, 2.0);
    r.absolute[i] = lp_norm(lhs - lag[i], 2.0);
    r.relative[i] = scale > 0.0 ? r.absolute[i] / scale : r.absolute[i];
  }
  return r;
}

double piola_residual(const FlowMap& fm) {
  const RealField d = matrix_divergence(fm.adj);
  double r = 0.0;
  for (int i = 0; i < d.components(); ++i) r = std::max(r, lp_norm(take_components(d, i, 1), 2.0));
  return r;
}

double det_adj_residual(const FlowMap& fm) {
  const int dim = fm.grid.dim();
  const RealField P = mat_mul(fm.DX, fm.A);
  double r = 0.0;
  for (std::size_t x = 0; x < fm.grid.num_points(); ++x) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        const int k = i * dim + j;
        r = std::max(r, std::fabs(P(k, x) - (i == j ? 1.0 : 0.0)));
        const double a = fm.adj(k, x);
        r = std::max(r, std::fabs(a - fm.J(0, x) * fm.A(k, x)) / std::max(1.0, std::fabs(a)));
      }
    }
  }
  return r;
}

std::array<double, 3> quadratic_derivative_weights(const std::array<double, 3>& t, double x) {
  std::array<double, 3> w{};
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    w[i] = ((x - t[j]) + (x - t[k])) / ((t[i] - t[j]) * (t[i] - t[k]));
  }
  return w;
}

namespace {

// Three consecutive snapshot indices around n, clamped to the ends.
std::array<std::size_t, 3> window(std::size_t n, std::size_t N) {
  require(N >= 3, ErrorCode::InvalidArgument, "time derivative needs at least 3 snapshots");
  const std::size_t c = std::clamp<std::size_t>(n, 1, N - 2);
  return {c - 1, c, c + 1};
}

}  // namespace

double mass_residual(const Trajectory& traj, const std::vector<FlowMap>& maps, std::size_t n) {
  const auto times = traj.times();
  const auto w = window(n, times.size());
  const auto wt = quadratic_derivative_weights({times[w[0]], times[w[1]], times[w[2]]}, times[n]);
  RealField d(traj.grid(), 1);
  for (int i = 0; i < 3; ++i) {
    const std::size_t k = w[i];
    d += wt[i] * pointwise_product(maps[k].J, pull_back(traj.snapshots[k].rho, maps[k]));
  }
  return lp_norm(d, 2.0);
}

double mass_residual(const Trajectory& traj, double t, const FlowMapConfig& cfg) {
  const auto times = traj.times();
  require(times.size() >= 3, ErrorCode::InvalidArgument, "mass_residual needs at least 3 snapshots");
  std::size_t n = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::fabs(times[i] - t) < std::fabs(times[n] - t)) n = i;
  }
  return mass_residual(traj, compute_flow_maps(traj, cfg), n);
}

double liouville_residual(const Trajectory& traj, const std::vector<FlowMap>& maps, std::size_t n) {
  const auto times = traj.times();
  const auto w = window(n, times.size());
  const auto wt = quadratic_derivative_weights({times[w[0]], times[w[1]], times[w[2]]}, times[n]);
  RealField dJ(traj.grid(), 1);
  for (int i = 0; i < 3; ++i) dJ += wt[i] * maps[w[i]].J;
  const RealField rhs = pointwise_product(maps[n].J, pull_back(divergence(traj.snapshots[n].u), maps[n]));
  const double scale = lp_norm(rhs, 2.0);
  const double r = lp_norm(dJ - rhs, 2.0);
  return scale > 0.0 ? r / scale : r;
}

RealField recover_density_lagrangian(const RealField& rho0, const FlowMap& fm) {
  require_same_grid(rho0.grid(), fm.grid, "recover_density");
  return scale_by_inverse(rho0, fm.J);
}

RealField recover_density(const RealField& rho0, const FlowMap& fm) {
  return push_forward(recover_density_lagrangian(rho0, fm), fm);
}

}  // namespace mhd
