#pragma once

// Dyadic partition of unity on the torus, the block operators Delta_j and
// S_j, homogeneous / hybrid / weighted / Chemin-Lerner Besov norms, and the
// Bony paraproduct decomposition.

#include <optional>
#include <vector>

#include "mhd/spectral_core.hpp"

namespace mhd {

/// Radial cutoff chi(r): 1 for r <= 3/4, 0 for r >= 4/3, smooth in between.
double lp_chi(double r);
/// Annulus multiplier phi(r) = chi(r/2) - chi(r), supported in [3/4, 8/3].
double lp_phi(double r);

/// phi(2^-j |xi|) tabulated for j in [j_min, j_max] on every spectral slot.
struct DyadicFamily {
  Grid grid;
  int j_min = -1;
  int j_max = 0;
  /// Row (j - j_min) holds the multiplier over all num_modes() slots; the
  /// mean slot is 0 in every row.
  std::vector<double> table;

  int count() const { return j_max - j_min + 1; }
  double phi(int j, std::size_t slot) const;
};

/// Builds the family. The end rows are clamped (the lowest row absorbs
/// chi(2 xi), the highest becomes 1 - chi(2^-j_max xi)) so the rows sum to 1
/// on every resolved nonzero frequency.
DyadicFamily build_dyadic_family(const Grid& grid);

enum class BlockKind { Delta, SLow };

/// Delta_j f = phi(2^-j D) f without the mean; S_j f = mean + sum_{k<=j-1} Delta_k f.
SpectralField dyadic_block(const SpectralField& f, const DyadicFamily& fam, int j, BlockKind which);
RealField dyadic_block(const RealField& f, const DyadicFamily& fam, int j, BlockKind which);

/// ||Delta_j f||_{L^p} for j = j_min..j_max.
std::vector<double> block_norms(const RealField& f, const DyadicFamily& fam, double p);

struct BesovSpec {
  double s = 0.0;
  double p = 2.0;
  double r = 1.0;
  /// Optional per-block weight, one entry per j in [j_min, j_max].
  std::optional<std::vector<double>> weights;
};

/// (sum_j (w_j 2^{js} ||Delta_j f||_p)^r)^{1/r}; r = kInfinity takes the sup.
double besov_norm(const RealField& f, const DyadicFamily& fam, const BesovSpec& spec);

/// sum_{j<=R0} 2^{js} ||Delta_j f||_q + sum_{j>R0} 2^{jt} ||Delta_j f||_p.
double hybrid_besov_norm(const RealField& f, const DyadicFamily& fam, double s, double t, double q,
                         double p, int R0 = 0);

/// omega_k(t) = sum_{l>=k} 2^{k-l} (1 - e^{-c 4^l t})^{1/2}; the series is summed
/// to l = k + 45 and closed with the tail 2^{k-L} bracket(L), which is exact to
/// well below 1e-12 because every bracket lies in [bracket(L), 1] past L.
double weight_omega(int k, double t, double c);
/// omega_j(t) for every block of the family.
std::vector<double> omega_weights(const DyadicFamily& fam, double t, double c);

/// Snapshots of one field at increasing times.
struct FieldSeries {
  std::vector<double> times;
  std::vector<RealField> fields;
};

struct CheminLernerValue {
  double value = 0.0;
  /// Largest snapshot spacing used by the trapezoid rule.
  double quadrature_step = 0.0;
};

/// sum_j w_j 2^{js} (int_0^T ||Delta_j f(t)||_p^rho dt)^{1/rho} by the
/// trapezoid rule on the snapshots; rho = kInfinity takes per-block sups.
CheminLernerValue chemin_lerner_norm(const FieldSeries& traj, const DyadicFamily& fam, double s,
                                     double p, double rho_time,
                                     const std::optional<std::vector<double>>& weights = {});

/// (int_0^T ||f(t)||_{B^s_{p,1}}^rho dt)^{1/rho}: the norm integrated in time,
/// i.e. the right side of the Minkowski comparison with the L-tilde norm.
double time_integrated_besov(const FieldSeries& traj, const DyadicFamily& fam, double s, double p,
                             double rho_time);

struct BonyParts {
  RealField Tuv;
  RealField Tvu;
  RealField R;
};

/// T_u v = sum_q S_{q-1} u Delta_q v, T_v u likewise, R = sum_q Delta_q u
/// (Delta_{q-1} + Delta_q + Delta_{q+1}) v. Products are pointwise; inputs
/// inside the one-third ball make them exact. The parts sum to
/// uv - mean(u) mean(v).
BonyParts bony_decompose(const RealField& u, const RealField& v, const DyadicFamily& fam);

/// (volume sum_{k != 0} |k|^{2 sigma} |coef(k)|^2)^{1/2}.
double hs_norm(const RealField& f, double sigma);

}  // namespace mhd
