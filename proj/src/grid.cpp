#include "mhd/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "mhd/errors.hpp"

namespace mhd {

namespace detail {

struct GridTables {
  int dim = 0;
  int n = 0;
  double period = 0.0;
  int cutoff = 0;
  int dealias_bound = 0;
  std::size_t points = 0;
  std::size_t modes = 0;
  double unit = 1.0;
  std::vector<IVec> mode;
  std::vector<double> ksq;
  std::vector<double> weight;
  std::vector<unsigned char> resolved;
  std::vector<unsigned char> dealias;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

namespace {

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

int signed_freq(int i, int n) { return i <= n / 2 ? i : i - n; }

std::shared_ptr<const GridTables> build_tables(int dim, int n, double period) {
  auto t = std::make_shared<GridTables>();
  t->dim = dim;
  t->n = n;
  t->period = period;
  t->cutoff = n / 2 - 1;
  t->dealias_bound = static_cast<int>(std::floor((2.0 / 3.0) * (n / 2.0) + 1e-12));
  t->unit = 2.0 * std::numbers::pi / period;
  const int half = n / 2 + 1;
  t->points = 1;
  for (int d = 0; d < dim; ++d) t->points *= static_cast<std::size_t>(n);
  t->modes = t->points / static_cast<std::size_t>(n) * static_cast<std::size_t>(half);

  t->mode.resize(t->modes);
  t->ksq.resize(t->modes);
  t->weight.resize(t->modes);
  t->resolved.resize(t->modes);
  t->dealias.resize(t->modes);
  for (std::size_t m = 0; m < t->modes; ++m) {
    IVec k{0, 0, 0};
    std::size_t rest = m;
    k[0] = static_cast<int>(rest % static_cast<std::size_t>(half));
    rest /= static_cast<std::size_t>(half);
    for (int d = 1; d < dim; ++d) {
      k[d] = signed_freq(static_cast<int>(rest % static_cast<std::size_t>(n)), n);
      rest /= static_cast<std::size_t>(n);
    }
    bool res = true;
    bool ball = true;
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
      const int a = std::abs(k[d]);
      if (a > t->cutoff) res = false;
      if (a > t->dealias_bound) ball = false;
      s += static_cast<double>(k[d]) * k[d];
    }
    t->mode[m] = k;
    t->ksq[m] = s * t->unit * t->unit;
    t->resolved[m] = res ? 1 : 0;
    t->dealias[m] = (res && ball) ? 1 : 0;
    t->weight[m] = res ? (k[0] == 0 ? 1.0 : 2.0) : 0.0;
  }

  std::vector<int> dims(dim);
  for (int d = 0; d < dim; ++d) dims[d] = n;  // row-major: last entry is axis 1
  std::vector<double> rbuf(t->points);
  std::vector<fftw_complex> cbuf(t->modes);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    t->r2c = fftw_plan_dft_r2c(dim, dims.data(), rbuf.data(), cbuf.data(),
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    t->c2r = fftw_plan_dft_c2r(dim, dims.data(), cbuf.data(), rbuf.data(),
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  require(t->r2c != nullptr && t->c2r != nullptr, ErrorCode::InvalidArgument,
          "FFTW planning failed");
  return t;
}

}  // namespace
}  // namespace detail

Grid make_grid(int dim, int points_per_axis, double period) {
  require(dim >= 1 && dim <= 3, ErrorCode::InvalidArgument, "dim must be 1, 2 or 3");
  require(points_per_axis >= 8 && points_per_axis % 2 == 0, ErrorCode::InvalidArgument,
          "points_per_axis must be even and >= 8");
  require(std::isfinite(period) && period > 0.0, ErrorCode::InvalidArgument,
          "period must be positive");

  static std::mutex cache_mutex;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const detail::GridTables>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto key = std::make_tuple(dim, points_per_axis, period);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, detail::build_tables(dim, points_per_axis, period)).first;
  }
  return Grid(it->second);
}

int Grid::dim() const { return tables_->dim; }
int Grid::points_per_axis() const { return tables_->n; }
double Grid::period() const { return tables_->period; }
int Grid::cutoff() const { return tables_->cutoff; }
int Grid::dealias_bound() const { return tables_->dealias_bound; }
std::size_t Grid::num_points() const { return tables_->points; }
std::size_t Grid::num_modes() const { return tables_->modes; }
double Grid::volume() const { return std::pow(tables_->period, tables_->dim); }
double Grid::spacing() const { return tables_->period / tables_->n; }
double Grid::wavenumber_unit() const { return tables_->unit; }
const IVec& Grid::mode(std::size_t m) const { return tables_->mode[m]; }
double Grid::k_squared(std::size_t m) const { return tables_->ksq[m]; }
double Grid::mode_weight(std::size_t m) const { return tables_->weight[m]; }
bool Grid::resolved(std::size_t m) const { return tables_->resolved[m] != 0; }
bool Grid::in_dealias_ball(std::size_t m) const { return tables_->dealias[m] != 0; }

Vec3 Grid::wavevector(std::size_t m) const {
  const auto& k = tables_->mode[m];
  const double u = tables_->unit;
  return {u * k[0], u * k[1], u * k[2]};
}

bool Grid::slot_of(const IVec& k, std::size_t& slot, bool& conjugate) const {
  const int n = tables_->n;
  const int dim = tables_->dim;
  IVec q = k;
  conjugate = false;
  if (q[0] < 0) {
    for (int d = 0; d < dim; ++d) q[d] = -q[d];
    conjugate = true;
  }
  for (int d = 0; d < dim; ++d) {
    if (std::abs(q[d]) > tables_->cutoff) return false;
  }
  for (int d = dim; d < 3; ++d) {
    if (q[d] != 0) return false;
  }
  const std::size_t half = static_cast<std::size_t>(n / 2 + 1);
  std::size_t idx = 0;
  for (int d = dim - 1; d >= 1; --d) {
    const int i = q[d] < 0 ? q[d] + n : q[d];
    idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
  }
  slot = idx * half + static_cast<std::size_t>(q[0]);
  return true;
}

IVec Grid::point_index(std::size_t i) const {
  IVec p{0, 0, 0};
  const auto n = static_cast<std::size_t>(tables_->n);
  for (int d = 0; d < tables_->dim; ++d) {
    p[d] = static_cast<int>(i % n);
    i /= n;
  }
  return p;
}

Vec3 Grid::coordinate(std::size_t i) const {
  const IVec p = point_index(i);
  const double h = spacing();
  return {h * p[0], h * p[1], h * p[2]};
}

void Grid::forward(std::span<const double> in, std::span<Complex> out) const {
  require(in.size() == tables_->points && out.size() == tables_->modes, ErrorCode::GridMismatch,
          "forward transform size mismatch");
  // r2c does not modify its input.
  fftw_execute_dft_r2c(tables_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(tables_->points);
  const auto& res = tables_->resolved;
  for (std::size_t m = 0; m < tables_->modes; ++m) {
    out[m] = res[m] ? out[m] * scale : Complex(0.0, 0.0);
  }
}

void Grid::inverse(std::span<const Complex> in, std::span<double> out) const {
  require(in.size() == tables_->modes && out.size() == tables_->points, ErrorCode::GridMismatch,
          "inverse transform size mismatch");
  // c2r overwrites its input.
  thread_local std::vector<Complex> scratch;
  scratch.assign(in.begin(), in.end());
  fftw_execute_dft_c2r(tables_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
}

bool operator==(const Grid& a, const Grid& b) {
  if (a.tables_ == b.tables_) return true;
  if (!a.tables_ || !b.tables_) return false;
  return a.tables_->dim == b.tables_->dim && a.tables_->n == b.tables_->n &&
         a.tables_->period == b.tables_->period;
}

}  // namespace mhd
