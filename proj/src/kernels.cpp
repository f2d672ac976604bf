#include "mhd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mhd::kernels {

namespace {

constexpr std::size_t kBlock = 2048;

inline double abs_pow(double v, double p) {
  const double a = std::fabs(v);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  return std::pow(a, p);
}

// Evaluates every component of the series at one point; writes
// out[c * stride + offset].
void eval_point(const TrigSeries& s, const double* x, double* out, std::size_t stride,
                std::size_t offset) {
  using C = std::complex<double>;
  const int K1 = s.bound[0], K2 = s.bound[1], K3 = s.bound[2];
  C e1[130], e2[261], e3[261];
  for (int k = 0; k <= K1; ++k) e1[k] = std::polar(1.0, s.unit * k * x[0]);
  for (int k = -K2; k <= K2; ++k) e2[k + K2] = s.dim >= 2 ? std::polar(1.0, s.unit * k * x[1]) : C(1.0);
  for (int k = -K3; k <= K3; ++k) e3[k + K3] = s.dim >= 3 ? std::polar(1.0, s.unit * k * x[2]) : C(1.0);
  const std::size_t box = s.box_size();
  const int n1 = K1 + 1;
  const int n2 = 2 * K2 + 1;
  for (int c = 0; c < s.components; ++c) {
    const C* coef = s.coef.data() + c * box;
    C acc(0.0, 0.0);
    for (int j3 = 0; j3 < 2 * K3 + 1; ++j3) {
      C s3(0.0, 0.0);
      for (int j2 = 0; j2 < n2; ++j2) {
        const C* row = coef + (static_cast<std::size_t>(j3) * n2 + j2) * n1;
        double re = 0.0, im = 0.0;
        for (int k1 = 0; k1 < n1; ++k1) {
          const double ar = row[k1].real(), ai = row[k1].imag();
          const double br = e1[k1].real(), bi = e1[k1].imag();
          re += ar * br - ai * bi;
          im += ar * bi + ai * br;
        }
        s3 += C(re, im) * e2[j2];
      }
      acc += s3 * e3[j3];
    }
    out[c * stride + offset] = acc.real();
  }
}

}  // namespace

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double s, std::span<double> x) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) x[i] *= s;
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void magnitude(std::span<const double> v, int comps, std::span<double> out) {
  const std::size_t n = out.size();
  const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    double s = 0.0;
    for (int c = 0; c < comps; ++c) {
      const double x = v[c * n + i];
      s += x * x;
    }
    out[i] = std::sqrt(s);
  }
}

namespace {
template <class F>
double blocked_reduce(std::size_t n, F&& block_value, double init,
                      double (*combine)(double, double)) {
  const std::size_t nb = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nb, init);
  const std::ptrdiff_t snb = static_cast<std::ptrdiff_t>(nb);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < snb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    partial[b] = block_value(lo, hi);
  }
  double r = init;
  for (double v : partial) r = combine(r, v);
  return r;
}
double plus(double a, double b) { return a + b; }
double maxf(double a, double b) { return std::max(a, b); }
double minf(double a, double b) { return std::min(a, b); }
}  // namespace

double sum_abs_pow(std::span<const double> x, double p) {
  return blocked_reduce(
      x.size(),
      [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += abs_pow(x[i], p);
        return s;
      },
      0.0, plus);
}

double sum(std::span<const double> x) {
  return blocked_reduce(
      x.size(),
      [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i];
        return s;
      },
      0.0, plus);
}

double max_abs(std::span<const double> x) {
  return blocked_reduce(
      x.size(),
      [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s = std::max(s, std::fabs(x[i]));
        return s;
      },
      0.0, maxf);
}

double min_value(std::span<const double> x) {
  return blocked_reduce(
      x.size(),
      [&](std::size_t lo, std::size_t hi) {
        double s = std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i < hi; ++i) s = std::min(s, x[i]);
        return s;
      },
      std::numeric_limits<double>::infinity(), minf);
}

void evaluate_series(const TrigSeries& s, std::span<const double> points, std::span<double> out) {
  const std::size_t np = points.size() / static_cast<std::size_t>(s.dim);
  const std::ptrdiff_t snp = static_cast<std::ptrdiff_t>(np);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < snp; ++i) {
    eval_point(s, points.data() + i * s.dim, out.data(), np, static_cast<std::size_t>(i));
  }
}

namespace serial {

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void scale(double s, std::span<double> x) {
  for (auto& v : x) v *= s;
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

void magnitude(std::span<const double> v, int comps, std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int c = 0; c < comps; ++c) s += v[c * n + i] * v[c * n + i];
    out[i] = std::sqrt(s);
  }
}

double sum_abs_pow(std::span<const double> x, double p) {
  double s = 0.0;
  for (double v : x) s += abs_pow(v, p);
  return s;
}

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

double max_abs(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::fabs(v));
  return s;
}

double min_value(std::span<const double> x) {
  double s = std::numeric_limits<double>::infinity();
  for (double v : x) s = std::min(s, v);
  return s;
}

void evaluate_series(const TrigSeries& s, std::span<const double> points, std::span<double> out) {
  const std::size_t np = points.size() / static_cast<std::size_t>(s.dim);
  for (std::size_t i = 0; i < np; ++i) eval_point(s, points.data() + i * s.dim, out.data(), np, i);
}

}  // namespace serial

}  // namespace mhd::kernels
