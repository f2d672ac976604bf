// OpenMP kernels against their serial references.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "mhd/kernels.hpp"

namespace {

namespace k = mhd::kernels;

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

k::TrigSeries random_series(int bound, unsigned seed) {
  k::TrigSeries s;
  s.dim = 2;
  s.components = 2;
  s.bound[0] = bound;
  s.bound[1] = bound;
  const auto re = random_vector(s.box_size() * 2, seed);
  const auto im = random_vector(s.box_size() * 2, seed + 1);
  s.coef.resize(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) s.coef[i] = {re[i], im[i]};
  return s;
}

template <bool Parallel>
void BM_Multiply(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const auto a = random_vector(n, 1), b = random_vector(n, 2);
  std::vector<double> out(n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::multiply(a, b, out);
    } else {
      k::serial::multiply(a, b, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(state.iterations() * n * 3 * sizeof(double));
}

template <bool Parallel>
void BM_SumAbsPow(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const auto a = random_vector(n, 3);
  for (auto _ : state) {
    double r = Parallel ? k::sum_abs_pow(a, 3.0) : k::serial::sum_abs_pow(a, 3.0);
    benchmark::DoNotOptimize(r);
  }
}

template <bool Parallel>
void BM_Magnitude(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const auto v = random_vector(3 * n, 4);
  std::vector<double> out(n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::magnitude(v, 3, out);
    } else {
      k::serial::magnitude(v, 3, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_EvaluateSeries(benchmark::State& state) {
  const int bound = static_cast<int>(state.range(0));
  const k::TrigSeries s = random_series(bound, 5);
  const std::size_t points = 4096;
  const auto pts = random_vector(2 * points, 7);
  std::vector<double> out(2 * points);
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::evaluate_series(s, pts, out);
    } else {
      k::serial::evaluate_series(s, pts, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_Multiply<true>)->Name("multiply/omp")->Arg(1 << 15)->Arg(1 << 18);
BENCHMARK(BM_Multiply<false>)->Name("multiply/serial")->Arg(1 << 15)->Arg(1 << 18);
BENCHMARK(BM_SumAbsPow<true>)->Name("sum_abs_pow/omp")->Arg(1 << 15)->Arg(1 << 18);
BENCHMARK(BM_SumAbsPow<false>)->Name("sum_abs_pow/serial")->Arg(1 << 15)->Arg(1 << 18);
BENCHMARK(BM_Magnitude<true>)->Name("magnitude/omp")->Arg(1 << 15)->Arg(1 << 18);
BENCHMARK(BM_Magnitude<false>)->Name("magnitude/serial")->Arg(1 << 15)->Arg(1 << 18);
BENCHMARK(BM_EvaluateSeries<true>)->Name("evaluate_series/omp")->Arg(8)->Arg(16);
BENCHMARK(BM_EvaluateSeries<false>)->Name("evaluate_series/serial")->Arg(8)->Arg(16);

BENCHMARK_MAIN();
