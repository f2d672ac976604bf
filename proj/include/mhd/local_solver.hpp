#pragma once

// Local existence construction in Lagrangian coordinates as a computable
// Picard iteration: free solutions, source terms, the map Phi, the E_p
// norm, contraction ratios and the smallness conditions on (R, T).
//
// Lagrangian system solved here (rho0 = J rho~):
//   rho0 d_t u = Div(adj (sigma(u; A) - P(rho0/J) Id + B B^T - |B|^2/2 Id))
//   J d_t B    = nu Div(adj A^T grad B) + Div(adj B u^T) - div(adj u) B
// where Dw is the Jacobian [i*dim + j] = d_j w_i, sigma(w; A) = mu (Dw A + (Dw A)^T)
// + lambda tr(Dw A) Id, and grad B = (DB)^T has columns grad B_i, so that
// Div(grad B) = lap B.

#include <optional>
#include <vector>

#include "mhd/lagrangian.hpp"

namespace mhd {

struct PicardConfig {
  double R = 1e-3;
  double T = 1e-6;
  int n_max = 25;
  /// Inner time step; T / dt is rounded to the nearest whole number of steps.
  double dt = 1e-6 / 16;
  /// Besov Lebesgue index; must lie in [2, 2 dim).
  double p = 4.0;
  /// Relative tolerance on the E_p norm of successive differences.
  double tol = 1e-8;
  /// Smallness threshold eta of the ball conditions (harmless constant C = 1).
  double eta = 1e-3;
  /// Threshold c < 1 for int_0^T ||grad v||_{B^{N/p}} dt.
  double small_c = 0.5;
  /// Frequency threshold m of C_{rho0,m}; defaults to the top dyadic block.
  std::optional<int> m;
  double c_bar = 1e-2;

  void validate(int dim) const;
  int steps() const;
};

/// Free solutions on the time grid: u_L = exp(t L) u0 with the Lame
/// operator at density rho_bar, B_L = exp(t nu lap) B0.
struct FreeSolutions {
  FieldSeries u;
  FieldSeries B;
};
FreeSolutions free_solutions(const RealField& u0, const RealField& B0, const PhysParams& params,
                             const std::vector<double>& times);

/// The source terms at one time, for the iterate (v, b) and its flow map.
/// Matrix-valued terms use the [i*dim + j] layout; I7 and I11 are vectors.
struct SourceTerms {
  RealField I1, I2, I3, I4, I5, I6, I7, I8, I9, I10, I11;
};

/// I1 = (1-J) d_t v, I2 = (adj - Id) sigma(v; A), I3 = sigma(v; A) - sigma(v; Id),
/// I4 = adj P(rho0/J), I5 = adj b b^T, I6 = adj |b|^2/2, I7 = (1-J) d_t b,
/// I8 = nu (adj - Id) A^T grad b, I9 = nu (A^T - Id) grad b, I10 = adj b v^T,
/// I11 = -div(adj v) b.
SourceTerms source_terms(const RealField& v, const RealField& b, const RealField& dv_dt,
                         const RealField& db_dt, const RealField& rho0, const FlowMap& fm_v,
                         const PhysParams& params);

/// Lagrangian flow maps X_v(t) = y + int_0^t v, by the cumulative trapezoid rule.
std::vector<FlowMap> lagrangian_flow_maps(const FieldSeries& v);

/// Time derivative on the series' grid: three-point centered in the interior,
/// second-order one-sided at the ends.
FieldSeries time_derivative(const FieldSeries& f);

struct PicardIterate {
  FieldSeries v;
  FieldSeries b;
};

/// One application of Phi. Solves the hat system by ETDRK2 with the mean
/// coefficient mean(1/rho0) in the exact propagator and the rest explicit,
/// and returns (u_L + u_hat, B_L + B_hat).
PicardIterate phi_map(const PicardIterate& in, const FreeSolutions& free, const RealField& rho0,
                      const PhysParams& params);

/// ||w||_{E_p} = L~inf(B^{N/p-1}) of w + L~1(B^{N/p-1}) of d_t w and of the Hessian.
double ep_norm(const FieldSeries& w, const DyadicFamily& fam, double p);

/// T = c_bar / (1 + ||a0||)^4.
double existence_time(double a0_besov_norm, double c_bar);

/// Values and verdicts of the smallness conditions, with every unknown
/// constant set to 1.
struct BallConditions {
  double a0_norm = 0.0;
  double C_rho_m = 0.0;         // T 2^{2m} ||a0||^2
  double C_rho_m_T = 0.0;       // <= log 2
  double T_over_R2 = 0.0;       // T / R^2 <= 1
  double a0_uL = 0.0;           // ||a0|| ||u_L||_{L~1(B^{N/p})} <= R^2
  double uL_size = 0.0;         // <= R
  double BL_size = 0.0;         // <= R
  double eta_lhs = 0.0;         // (1 + ||a0||)^2 R <= eta
  double density_R_bound = 0.0; // R <= c0 / (4 (1 + ||a0||))
  double grad_v_integral = 0.0; // max over iterates of int ||grad v||_{B^{N/p}} <= small_c
  bool ball_ok = false;         // every iterate within R of (u_L, B_L)
  bool all_pass = false;
};

struct PicardReport {
  std::vector<double> iterate_norms;  // ||(v^n, b^n)||_E
  std::vector<double> ball_distance;  // ||v^n - u_L||_E + ||b^n - B_L||_E
  std::vector<double> delta_norms;    // ||(v^{n+1} - v^n, b^{n+1} - b^n)||_E
  std::vector<double> ratios;         // delta_{n+1} / delta_n
  int iterations = 0;
  bool converged = false;
  BallConditions conditions;
  double existence_time = 0.0;
  /// Relative residuals of the Lagrangian system at the returned iterate.
  double momentum_residual = 0.0;
  double induction_residual = 0.0;
  /// ||div(adj B~)||_2 (exact gauge) and ||div(A B~)||_2 at the final time,
  /// relative to max(||grad B~||_2, ||B~||_2).
  double gauge_adj = 0.0;
  double gauge_A = 0.0;
};

struct PicardResult {
  PicardReport report;
  PicardIterate solution;
  FreeSolutions free;
};

/// Raised when the difference ratios exceed 1 three times in a row.
class PicardDivergence : public Error {
 public:
  PicardDivergence(const std::string& what, PicardReport report)
      : Error(ErrorCode::NonConvergence, what), report_(std::move(report)) {}
  const PicardReport& report() const { return report_; }

 private:
  PicardReport report_;
};

PicardResult picard_run(const RealField& rho0, const RealField& u0, const RealField& B0,
                        const PhysParams& params, const PicardConfig& cfg);

/// Residuals of the Lagrangian system for a (u, B) pair on the time grid.
struct LagrangianResiduals {
  double momentum = 0.0;
  double induction = 0.0;
};
LagrangianResiduals lagrangian_residuals(const PicardIterate& it, const RealField& rho0,
                                         const PhysParams& params);

/// Eulerian state at the final time: rho = (rho0/J) o X^{-1}, u, B pushed forward.
State push_forward_final(const PicardResult& res, const RealField& rho0);

}  // namespace mhd
