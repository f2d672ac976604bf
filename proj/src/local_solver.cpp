#include "mhd/local_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mhd {

namespace {

constexpr double kResidualFloor = 1e-300;

double exp_fn(double z) { return std::exp(z); }

RealField scalar_map(const RealField& f, double (*op)(double, const PhysParams&), const PhysParams& p) {
  RealField out(f.grid(), 1);
  auto in = f.component(0);
  auto o = out.component(0);
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = op(in[i], p);
  return out;
}

RealField one_minus(const RealField& J) {
  RealField out(J.grid(), 1);
  auto j = J.component(0);
  auto o = out.component(0);
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = 1.0 - j[i];
  return out;
}

RealField trace(const RealField& M) {
  const int dim = M.grid().dim();
  RealField out(M.grid(), 1);
  for (int d = 0; d < dim; ++d) out += take_components(M, d * dim + d, 1);
  return out;
}

RealField squared_magnitude(const RealField& v) {
  RealField out(v.grid(), 1);
  auto o = out.component(0);
  for (int c = 0; c < v.components(); ++c) {
    auto a = v.component(c);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += a[i] * a[i];
  }
  return out;
}

// mu (DwA + (DwA)^T) + lambda tr(DwA) Id.
RealField stress(const RealField& Dw, const RealField& A, const PhysParams& p) {
  const RealField G = mat_mul(Dw, A);
  return p.mu * (G + transpose(G)) + p.lambda * pointwise_product(trace(G), identity_matrix(G.grid()));
}

// mu lap w + (lambda + mu) grad div w, spectrally.
SpectralField lame_apply(const SpectralField& w, const PhysParams& p) {
  const Grid& g = w.grid();
  const int dim = g.dim();
  SpectralField out(g, dim);
  for (std::size_t m = 0; m < g.num_modes(); ++m) {
    const Vec3 k = g.wavevector(m);
    const double k2 = g.k_squared(m);
    Complex kw(0.0, 0.0);
    for (int c = 0; c < dim; ++c) kw += k[c] * w(c, m);
    for (int c = 0; c < dim; ++c) out(c, m) = -p.mu * k2 * w(c, m) - p.mu_prime() * k[c] * kw;
  }
  return out;
}

FieldSeries series_minus(const FieldSeries& a, const FieldSeries& b) {
  FieldSeries out{a.times, {}};
  out.fields.reserve(a.fields.size());
  for (std::size_t k = 0; k < a.fields.size(); ++k) out.fields.push_back(a.fields[k] - b.fields[k]);
  return out;
}

FieldSeries series_map(const FieldSeries& a, RealField (*op)(const RealField&)) {
  FieldSeries out{a.times, {}};
  out.fields.reserve(a.fields.size());
  for (const auto& f : a.fields) out.fields.push_back(op(f));
  return out;
}

RealField hessian(const RealField& w) { return gradient(gradient(w)); }

double pair_norm(const PicardIterate& it, const DyadicFamily& fam, double p) {
  return ep_norm(it.v, fam, p) + ep_norm(it.b, fam, p);
}

double relative(double num, double den) {
  if (num == 0.0) return 0.0;
  return num / std::max(den, kResidualFloor);
}

}  // namespace

void PicardConfig::validate(int dim) const {
  require(R > 0.0 && T > 0.0, ErrorCode::InvalidArgument, "picard: R and T must be positive");
  require(dt > 0.0 && dt <= T, ErrorCode::InvalidArgument, "picard: dt must lie in (0, T]");
  require(n_max >= 1, ErrorCode::InvalidArgument, "picard: n_max must be >= 1");
  require(p >= 2.0 && p < 2.0 * dim, ErrorCode::InvalidArgument, "picard: p must lie in [2, 2 dim)");
  require(tol > 0.0 && eta > 0.0 && small_c > 0.0 && c_bar > 0.0, ErrorCode::InvalidArgument,
          "picard: tolerances and thresholds must be positive");
}

int PicardConfig::steps() const { return std::max(1, static_cast<int>(std::lround(T / dt))); }

FreeSolutions free_solutions(const RealField& u0, const RealField& B0, const PhysParams& params,
                             const std::vector<double>& times) {
  require_same_grid(u0.grid(), B0.grid(), "free_solutions");
  const SpectralField uh = to_spectral(u0), Bh = to_spectral(B0);
  const double mu = params.mu / params.rho_bar, lam = params.lambda / params.rho_bar;
  FreeSolutions out{{times, {}}, {times, {}}};
  for (double t : times) {
    out.u.fields.push_back(to_physical(lame_propagator(uh, t, mu, lam)));
    out.B.fields.push_back(to_physical(heat_propagator(Bh, t, params.nu)));
  }
  return out;
}

SourceTerms source_terms(const RealField& v, const RealField& b, const RealField& dv_dt,
                         const RealField& db_dt, const RealField& rho0, const FlowMap& fm_v,
                         const PhysParams& params) {
  const Grid& g = v.grid();
  require_same_grid(g, fm_v.grid, "source_terms");
  const RealField Id = identity_matrix(g);
  const RealField adj_minus = fm_v.adj - Id;
  const RealField omj = one_minus(fm_v.J);
  const RealField Dv = gradient(v);
  const RealField sigA = stress(Dv, fm_v.A, params);
  const RealField At = transpose(fm_v.A);
  const RealField grad_b = transpose(gradient(b));
  const RealField adj_b = mat_vec(fm_v.adj, b);

  RealField rho(g, 1);
  for (std::size_t i = 0; i < g.num_points(); ++i) rho(0, i) = rho0(0, i) / fm_v.J(0, i);
  const RealField P = scalar_map(rho, [](double r, const PhysParams& p) { return pressure_value(r, p, 0); }, params);

  SourceTerms s;
  s.I1 = pointwise_product(omj, dv_dt);
  s.I2 = mat_mul(adj_minus, sigA);
  s.I3 = sigA - stress(Dv, Id, params);
  s.I4 = pointwise_product(P, fm_v.adj);
  s.I5 = outer(adj_b, b);
  s.I6 = pointwise_product(0.5 * squared_magnitude(b), fm_v.adj);
  s.I7 = pointwise_product(omj, db_dt);
  s.I8 = params.nu * mat_mul(adj_minus, mat_mul(At, grad_b));
  s.I9 = params.nu * mat_mul(At - Id, grad_b);
  s.I10 = outer(adj_b, v);
  s.I11 = -1.0 * pointwise_product(divergence(mat_vec(fm_v.adj, v)), b);
  return s;
}

std::vector<FlowMap> lagrangian_flow_maps(const FieldSeries& v) {
  require(!v.fields.empty(), ErrorCode::InvalidArgument, "flow maps: empty series");
  const Grid& g = v.fields[0].grid();
  std::vector<FlowMap> maps;
  RealField X(g, g.dim());
  maps.push_back(flow_map_from_displacement(X, v.times[0]));
  for (std::size_t k = 0; k + 1 < v.fields.size(); ++k) {
    const double h = v.times[k + 1] - v.times[k];
    X += (0.5 * h) * (v.fields[k] + v.fields[k + 1]);
    maps.push_back(flow_map_from_displacement(X, v.times[k + 1]));
  }
  return maps;
}

FieldSeries time_derivative(const FieldSeries& f) {
  const std::size_t n = f.fields.size();
  require(n >= 2 && f.times.size() == n, ErrorCode::InvalidArgument,
          "time_derivative: need at least two snapshots with times");
  FieldSeries out{f.times, {}};
  out.fields.reserve(n);
  if (n == 2) {
    const RealField d = (1.0 / (f.times[1] - f.times[0])) * (f.fields[1] - f.fields[0]);
    out.fields = {d, d};
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t a = std::clamp<std::size_t>(k, 1, n - 2) - 1;
    const auto w = quadratic_derivative_weights({f.times[a], f.times[a + 1], f.times[a + 2]}, f.times[k]);
    out.fields.push_back(w[0] * f.fields[a] + w[1] * f.fields[a + 1] + w[2] * f.fields[a + 2]);
  }
  return out;
}

PicardIterate phi_map(const PicardIterate& in, const FreeSolutions& free, const RealField& rho0,
                      const PhysParams& params) {
  const std::size_t n = in.v.fields.size();
  require(n >= 2 && in.b.fields.size() == n && free.u.fields.size() == n && free.B.fields.size() == n,
          ErrorCode::InvalidArgument, "phi_map: inputs must share the time grid");
  require(kernels::min_value(rho0.component(0)) >= params.c0_floor / 4.0, ErrorCode::DensityFloor,
          "phi_map: rho0 below c0/4");
  const Grid& g = rho0.grid();
  const auto& times = in.v.times;

  const FieldSeries dv = time_derivative(in.v);
  const FieldSeries db = time_derivative(in.b);
  const std::vector<FlowMap> maps = lagrangian_flow_maps(in.v);

  RealField inv_rho0(g, 1);
  for (std::size_t i = 0; i < g.num_points(); ++i) inv_rho0(0, i) = 1.0 / rho0(0, i);
  const double cbar = mean(inv_rho0);
  RealField var = inv_rho0;
  for (auto& x : var.component(0)) x -= cbar;
  RealField mass_mismatch = inv_rho0;
  for (auto& x : mass_mismatch.component(0)) x -= 1.0 / params.rho_bar;
  const double Pbar = pressure_value(params.rho_bar, params, 0);

  std::vector<SpectralField> Su, SB;
  Su.reserve(n);
  SB.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SourceTerms s = source_terms(in.v.fields[k], in.b.fields[k], dv.fields[k], db.fields[k], rho0,
                                       maps[k], params);
    // P-bar adj is divergence free (Piola), so it is dropped before differentiating.
    const RealField stress_sum = s.I2 + s.I3 - (s.I4 - Pbar * maps[k].adj) + s.I5 - s.I6;
    const RealField lame_uL = to_physical(lame_apply(to_spectral(free.u.fields[k]), params));
    const RealField su = pointwise_product(mass_mismatch, lame_uL) +
                         pointwise_product(inv_rho0, matrix_divergence(stress_sum));
    Su.push_back(to_spectral(su));
    SB.push_back(to_spectral(s.I7 + matrix_divergence(s.I8 + s.I9 + s.I10) + s.I11));
  }

  const double mu = cbar * params.mu, lam = cbar * params.lambda;
  auto explicit_part = [&](const SpectralField& w, std::size_t k) {
    return to_spectral(pointwise_product(var, to_physical(lame_apply(w, params)))) + Su[k];
  };

  PicardIterate out{{times, {}}, {times, {}}};
  SpectralField uh(g, g.dim()), Bh(g, g.dim());
  out.v.fields.push_back(free.u.fields[0]);
  out.b.fields.push_back(free.B.fields[0]);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = times[k + 1] - times[k];
    const SpectralField N0 = explicit_part(uh, k);
    const SpectralField a = lame_function(uh, mu, lam, h, exp_fn) + h * lame_function(N0, mu, lam, h, etd_phi1);
    const SpectralField N1 = explicit_part(a, k + 1);
    uh = a + h * lame_function(N1 - N0, mu, lam, h, etd_phi2);
    Bh = heat_function(Bh, params.nu, h, exp_fn) + h * heat_function(SB[k], params.nu, h, etd_phi1) +
         h * heat_function(SB[k + 1] - SB[k], params.nu, h, etd_phi2);
    out.v.fields.push_back(free.u.fields[k + 1] + to_physical(uh));
    out.b.fields.push_back(free.B.fields[k + 1] + to_physical(Bh));
  }
  return out;
}

double ep_norm(const FieldSeries& w, const DyadicFamily& fam, double p) {
  const double s = fam.grid.dim() / p - 1.0;
  return chemin_lerner_norm(w, fam, s, p, kInfinity).value +
         chemin_lerner_norm(time_derivative(w), fam, s, p, 1.0).value +
         chemin_lerner_norm(series_map(w, hessian), fam, s, p, 1.0).value;
}

double existence_time(double a0_besov_norm, double c_bar) {
  require(a0_besov_norm >= 0.0 && c_bar > 0.0, ErrorCode::InvalidArgument,
          "existence_time: need norm >= 0 and c_bar > 0");
  return c_bar / std::pow(1.0 + a0_besov_norm, 4);
}

LagrangianResiduals lagrangian_residuals(const PicardIterate& it, const RealField& rho0,
                                         const PhysParams& params) {
  const std::size_t n = it.v.fields.size();
  const std::vector<FlowMap> maps = lagrangian_flow_maps(it.v);
  const FieldSeries du = time_derivative(it.v);
  const FieldSeries dB = time_derivative(it.b);
  const double Pbar = pressure_value(params.rho_bar, params, 0);
  LagrangianResiduals r;
  const std::size_t first = n >= 3 ? 1 : 0, last = n >= 3 ? n - 1 : n;
  for (std::size_t k = first; k < last; ++k) {
    const FlowMap& fm = maps[k];
    const RealField& u = it.v.fields[k];
    const RealField& B = it.b.fields[k];
    const Grid& g = u.grid();

    RealField Pdev(g, 1);
    for (std::size_t i = 0; i < g.num_points(); ++i) {
      Pdev(0, i) = pressure_value(rho0(0, i) / fm.J(0, i), params, 0) - Pbar;
    }
    const RealField Id = identity_matrix(g);
    const RealField S = stress(gradient(u), fm.A, params) - pointwise_product(Pdev, Id) + outer(B, B) -
                        pointwise_product(0.5 * squared_magnitude(B), Id);
    const RealField m_rhs = matrix_divergence(mat_mul(fm.adj, S));
    const RealField m_lhs = pointwise_product(rho0, du.fields[k]);
    r.momentum = std::max(r.momentum, relative(lp_norm(m_lhs - m_rhs, 2.0),
                                               std::max(lp_norm(m_lhs, 2.0), lp_norm(m_rhs, 2.0))));

    const RealField grad_B = transpose(gradient(B));
    const RealField i_rhs = params.nu * matrix_divergence(mat_mul(fm.adj, mat_mul(transpose(fm.A), grad_B))) +
                            matrix_divergence(outer(mat_vec(fm.adj, B), u)) -
                            pointwise_product(divergence(mat_vec(fm.adj, u)), B);
    const RealField i_lhs = pointwise_product(fm.J, dB.fields[k]);
    r.induction = std::max(r.induction, relative(lp_norm(i_lhs - i_rhs, 2.0),
                                                 std::max(lp_norm(i_lhs, 2.0), lp_norm(i_rhs, 2.0))));
  }
  return r;
}

PicardResult picard_run(const RealField& rho0, const RealField& u0, const RealField& B0,
                        const PhysParams& params, const PicardConfig& cfg) {
  const Grid& g = rho0.grid();
  params.validate();
  cfg.validate(g.dim());
  require_same_grid(g, u0.grid(), "picard_run");
  require_same_grid(g, B0.grid(), "picard_run");

  const int steps = cfg.steps();
  std::vector<double> times(steps + 1);
  for (int k = 0; k <= steps; ++k) times[k] = cfg.T * k / steps;

  PicardResult res;
  res.free = free_solutions(u0, B0, params, times);
  const DyadicFamily fam = build_dyadic_family(g);
  const double p = cfg.p;
  const double s = g.dim() / p;
  PicardReport& rep = res.report;
  BallConditions& c = rep.conditions;

  RealField a0 = rho0;
  for (auto& x : a0.component(0)) x -= params.rho_bar;
  c.a0_norm = besov_norm(a0, fam, {s, p, 1.0, {}});
  rep.existence_time = existence_time(c.a0_norm, cfg.c_bar);
  const int m = cfg.m.value_or(fam.j_max);
  c.C_rho_m = cfg.T * std::pow(2.0, 2.0 * m) * c.a0_norm * c.a0_norm;
  c.C_rho_m_T = c.C_rho_m * cfg.T;
  c.T_over_R2 = cfg.T / (cfg.R * cfg.R);
  c.a0_uL = c.a0_norm * chemin_lerner_norm(res.free.u, fam, s, p, 1.0).value;
  {
    FieldSeries du{times, {}}, dB{times, {}};
    const double mu = params.mu / params.rho_bar, lam = params.lambda / params.rho_bar;
    PhysParams scaled = params;
    scaled.mu = mu;
    scaled.lambda = lam;
    for (std::size_t k = 0; k < times.size(); ++k) {
      du.fields.push_back(to_physical(lame_apply(to_spectral(res.free.u.fields[k]), scaled)));
      dB.fields.push_back(params.nu * laplacian(res.free.B.fields[k]));
    }
    auto size = [&](const FieldSeries& f, const FieldSeries& df) {
      return chemin_lerner_norm(df, fam, s - 1.0, p, 1.0).value +
             chemin_lerner_norm(f, fam, s + 1.0, p, 1.0).value + chemin_lerner_norm(f, fam, s, p, 2.0).value;
    };
    c.uL_size = size(res.free.u, du);
    c.BL_size = size(res.free.B, dB);
  }
  c.eta_lhs = (1.0 + c.a0_norm) * (1.0 + c.a0_norm) * cfg.R;
  c.density_R_bound = params.c0_floor / (4.0 * (1.0 + c.a0_norm));

  auto grad_v_integral = [&](const FieldSeries& v) {
    return time_integrated_besov(series_map(v, gradient), fam, s, p, 1.0);
  };
  auto record = [&](const PicardIterate& it) {
    rep.iterate_norms.push_back(pair_norm(it, fam, p));
    rep.ball_distance.push_back(ep_norm(series_minus(it.v, res.free.u), fam, p) +
                                ep_norm(series_minus(it.b, res.free.B), fam, p));
    c.grad_v_integral = std::max(c.grad_v_integral, grad_v_integral(it.v));
  };
  auto finish_conditions = [&] {
    c.ball_ok = std::all_of(rep.ball_distance.begin(), rep.ball_distance.end(),
                            [&](double d) { return d <= cfg.R; });
    c.all_pass = c.C_rho_m_T <= std::log(2.0) && c.T_over_R2 <= 1.0 && c.a0_uL <= cfg.R * cfg.R &&
                 c.uL_size <= cfg.R && c.BL_size <= cfg.R && c.eta_lhs <= cfg.eta &&
                 cfg.R <= c.density_R_bound && c.grad_v_integral <= cfg.small_c && c.ball_ok;
  };

  PicardIterate it{res.free.u, res.free.B};
  record(it);
  int rising = 0;
  for (int n = 1; n <= cfg.n_max; ++n) {
    PicardIterate next = phi_map(it, res.free, rho0, params);
    const double delta = ep_norm(series_minus(next.v, it.v), fam, p) + ep_norm(series_minus(next.b, it.b), fam, p);
    if (!rep.delta_norms.empty()) {
      const double prev = rep.delta_norms.back();
      const double ratio = prev > 0.0 ? delta / prev : 0.0;
      rep.ratios.push_back(ratio);
      rising = ratio > 1.0 ? rising + 1 : 0;
    }
    rep.delta_norms.push_back(delta);
    it = std::move(next);
    rep.iterations = n;
    record(it);
    if (delta == 0.0 || delta <= cfg.tol * rep.iterate_norms.back()) {
      rep.converged = true;
      break;
    }
    if (rising >= 3) {
      finish_conditions();
      std::ostringstream msg;
      msg << "picard iteration diverging: difference ratio above 1 for 3 consecutive iterations (last "
          << rep.ratios.back() << " at iteration " << n << ")";
      throw PicardDivergence(msg.str(), rep);
    }
  }
  finish_conditions();

  const LagrangianResiduals lr = lagrangian_residuals(it, rho0, params);
  rep.momentum_residual = lr.momentum;
  rep.induction_residual = lr.induction;
  const FlowMap fm = lagrangian_flow_maps(it.v).back();
  const RealField& Bt = it.b.fields.back();
  const double nB = std::max(lp_norm(gradient(Bt), 2.0), lp_norm(Bt, 2.0));
  rep.gauge_adj = relative(lp_norm(divergence(mat_vec(fm.adj, Bt)), 2.0), nB);
  rep.gauge_A = relative(lp_norm(divergence(mat_vec(fm.A, Bt)), 2.0), nB);
  res.solution = std::move(it);
  return res;
}

State push_forward_final(const PicardResult& res, const RealField& rho0) {
  const FlowMap fm = lagrangian_flow_maps(res.solution.v).back();
  State s;
  s.t = fm.t;
  s.rho = recover_density(rho0, fm);
  s.u = push_forward(res.solution.v.fields.back(), fm);
  s.B = push_forward(res.solution.b.fields.back(), fm);
  return s;
}

}  // namespace mhd
