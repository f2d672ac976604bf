#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version (namespace
// mhd::kernels) and a plain serial reference (mhd::kernels::serial) used by
// the tests and the benchmark target. Reductions use a fixed block
// decomposition so results do not depend on the thread count.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mhd::kernels {

/// Truncated trigonometric series over the box 0 <= k1 <= K1, |k2| <= K2,
/// |k3| <= K3 (axes beyond dim have bound 0). Coefficients are stored per
/// component with k1 fastest and already carry the Hermitian weight (2 for
/// k1 > 0), so f(x) = Re sum c_k e^{i unit k.x}.
struct TrigSeries {
  int dim = 1;
  int components = 1;
  double unit = 1.0;
  int bound[3] = {0, 0, 0};
  std::vector<std::complex<double>> coef;

  std::size_t box_size() const {
    return static_cast<std::size_t>(bound[0] + 1) * (2 * bound[1] + 1) * (2 * bound[2] + 1);
  }
};

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double s, std::span<double> x);
// out[i] = a[i] * b[i]
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
// out[i] = |(v_0[i], ..., v_{c-1}[i])| for `comps` blocks of length n
void magnitude(std::span<const double> v, int comps, std::span<double> out);
/// sum_i |x_i|^p
double sum_abs_pow(std::span<const double> x, double p);
double sum(std::span<const double> x);
double max_abs(std::span<const double> x);
double min_value(std::span<const double> x);
/// Evaluates all components of `s` at `points` (dim coordinates per point);
/// out has layout [component][point].
void evaluate_series(const TrigSeries& s, std::span<const double> points, std::span<double> out);

namespace serial {
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double s, std::span<double> x);
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
void magnitude(std::span<const double> v, int comps, std::span<double> out);
double sum_abs_pow(std::span<const double> x, double p);
double sum(std::span<const double> x);
double max_abs(std::span<const double> x);
double min_value(std::span<const double> x);
void evaluate_series(const TrigSeries& s, std::span<const double> points, std::span<double> out);
}  // namespace serial

}  // namespace mhd::kernels
