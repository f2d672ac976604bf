#pragma once

// Transforms, spectral differential operators, Lebesgue norms and dealiased
// products on the periodic grid.

#include <limits>

#include "mhd/errors.hpp"
#include "mhd/fields.hpp"
#include "mhd/grid.hpp"
#include "mhd/kernels.hpp"

namespace mhd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Forward transform coef(k) = (1/M) sum_x f(x) e^{-ik.x}. Throws NonFinite on NaN/Inf.
SpectralField to_spectral(const RealField& f);
/// Inverse transform f(x) = sum_k coef(k) e^{ik.x}.
RealField to_physical(const SpectralField& f);

enum class DiffKind { Gradient, Divergence, Curl, Laplacian, Partial };

/// Exact spectral multipliers: ik (gradient of a scalar, or Jacobian of a
/// vector laid out as [i*dim + j] = d_j f_i), ik. (divergence), ik x (curl,
/// dim 3 only), -|k|^2 (laplacian, componentwise), ik_axis (partial).
SpectralField differentiate(const SpectralField& f, DiffKind kind, int axis = 0);

/// (volume/M sum |f|^p)^{1/p}; p = kInfinity gives max|f|. Vector fields use
/// the pointwise Euclidean magnitude.
double lp_norm(const RealField& f, double p);

/// Zeroes every mode with some |k_i| beyond the two-thirds bound.
void truncate_two_thirds(SpectralField& f);
SpectralField truncated_two_thirds(SpectralField f);

/// Two-thirds-rule product. Either operand may be scalar (broadcast), or both
/// may have the same component count (componentwise product).
SpectralField dealias_product(const SpectralField& f, const SpectralField& g);

/// volume * sum_k |coef(k)|^2 over the full (Hermitian) spectrum, all components.
double parseval_energy(const SpectralField& f);

double mean(const RealField& f, int component = 0);
RealField subtract_mean(RealField f);

/// Copies component range [first, first+count) into a new field.
RealField take_components(const RealField& f, int first, int count);
SpectralField take_components(const SpectralField& f, int first, int count);

// Physical-space conveniences built on the spectral operators.
RealField gradient(const RealField& f);
RealField divergence(const RealField& f);
RealField curl(const RealField& f);
RealField laplacian(const RealField& f);
RealField partial(const RealField& f, int axis);
/// Dealiased product of two real fields (same broadcasting rules as dealias_product).
RealField product(const RealField& f, const RealField& g);
/// Pointwise (aliased) product, exact on the grid samples.
RealField pointwise_product(const RealField& f, const RealField& g);
/// Pointwise Euclidean magnitude of a vector field.
RealField magnitude(const RealField& f);

/// Trigonometric interpolant of `f` restricted to the smallest box holding
/// every nonzero coefficient.
kernels::TrigSeries make_series(const SpectralField& f);
/// Same, over an explicit box (coefficients outside it are dropped).
kernels::TrigSeries make_series(const SpectralField& f, const IVec& bound);
/// Per-axis largest |k_i| carrying a coefficient above rel_tol times the
/// largest coefficient magnitude (rel_tol = 0 keeps every nonzero one).
IVec series_bound(const SpectralField& f, double rel_tol = 0.0);
/// Evaluates the trigonometric interpolant of f at arbitrary points
/// (dim coordinates per point); result has one component block per point set.
RealField evaluate_at(const kernels::TrigSeries& s, const Grid& grid, std::span<const double> points);

}  // namespace mhd
