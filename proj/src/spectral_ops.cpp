#include <algorithm>
#include <cmath>

#include "mhd/spectral_core.hpp"

namespace mhd {

namespace {
const Complex kI(0.0, 1.0);
}

SpectralField to_spectral(const RealField& f) {
  require(f.all_finite(), ErrorCode::NonFinite, "to_spectral: field has NaN or Inf samples");
  SpectralField out(f.grid(), f.components());
  for (int c = 0; c < f.components(); ++c) f.grid().forward(f.component(c), out.component(c));
  return out;
}

RealField to_physical(const SpectralField& f) {
  RealField out(f.grid(), f.components());
  for (int c = 0; c < f.components(); ++c) f.grid().inverse(f.component(c), out.component(c));
  return out;
}

SpectralField differentiate(const SpectralField& f, DiffKind kind, int axis) {
  const Grid& g = f.grid();
  const int dim = g.dim();
  const std::size_t M = g.num_modes();
  switch (kind) {
    case DiffKind::Gradient: {
      SpectralField out(g, f.components() * dim);
      for (int c = 0; c < f.components(); ++c) {
        auto in = f.component(c);
        for (int j = 0; j < dim; ++j) {
          auto o = out.component(c * dim + j);
          for (std::size_t m = 0; m < M; ++m) o[m] = kI * g.wavevector(m)[j] * in[m];
        }
      }
      return out;
    }
    case DiffKind::Divergence: {
      require(f.components() == dim, ErrorCode::InvalidArgument,
              "divergence needs a field with dim components");
      SpectralField out(g, 1);
      auto o = out.component(0);
      for (std::size_t m = 0; m < M; ++m) {
        const Vec3 k = g.wavevector(m);
        Complex s(0.0, 0.0);
        for (int j = 0; j < dim; ++j) s += k[j] * f(j, m);
        o[m] = kI * s;
      }
      return out;
    }
    case DiffKind::Curl: {
      require(dim == 3 && f.components() == 3, ErrorCode::InvalidArgument,
              "curl needs a 3-component field on a 3-dimensional grid");
      SpectralField out(g, 3);
      for (std::size_t m = 0; m < M; ++m) {
        const Vec3 k = g.wavevector(m);
        const Complex a = f(0, m), b = f(1, m), c = f(2, m);
        out(0, m) = kI * (k[1] * c - k[2] * b);
        out(1, m) = kI * (k[2] * a - k[0] * c);
        out(2, m) = kI * (k[0] * b - k[1] * a);
      }
      return out;
    }
    case DiffKind::Laplacian: {
      SpectralField out(g, f.components());
      for (int c = 0; c < f.components(); ++c) {
        auto in = f.component(c);
        auto o = out.component(c);
        for (std::size_t m = 0; m < M; ++m) o[m] = -g.k_squared(m) * in[m];
      }
      return out;
    }
    case DiffKind::Partial: {
      require(axis >= 0 && axis < dim, ErrorCode::InvalidArgument, "partial: axis out of range");
      SpectralField out(g, f.components());
      for (int c = 0; c < f.components(); ++c) {
        auto in = f.component(c);
        auto o = out.component(c);
        for (std::size_t m = 0; m < M; ++m) o[m] = kI * g.wavevector(m)[axis] * in[m];
      }
      return out;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown derivative kind");
}

double lp_norm(const RealField& f, double p) {
  require(p >= 1.0, ErrorCode::InvalidArgument, "lp_norm: p must be >= 1");
  const std::size_t M = f.points();
  std::span<const double> mag = f.component(0);
  std::vector<double> buf;
  if (f.components() > 1) {
    buf.resize(M);
    kernels::magnitude(f.values(), f.components(), buf);
    mag = buf;
  }
  if (std::isinf(p)) return kernels::max_abs(mag);
  const double s = kernels::sum_abs_pow(mag, p) * f.grid().volume() / static_cast<double>(M);
  if (p == 2.0) return std::sqrt(s);
  if (p == 1.0) return s;
  return std::pow(s, 1.0 / p);
}

void truncate_two_thirds(SpectralField& f) {
  const Grid& g = f.grid();
  for (int c = 0; c < f.components(); ++c) {
    auto v = f.component(c);
    for (std::size_t m = 0; m < g.num_modes(); ++m) {
      if (!g.in_dealias_ball(m)) v[m] = Complex(0.0, 0.0);
    }
  }
}

SpectralField truncated_two_thirds(SpectralField f) {
  truncate_two_thirds(f);
  return f;
}

RealField pointwise_product(const RealField& f, const RealField& g) {
  require_same_grid(f.grid(), g.grid(), "product");
  const int cf = f.components(), cg = g.components();
  require(cf == cg || cf == 1 || cg == 1, ErrorCode::InvalidArgument,
          "product: incompatible component counts");
  const int co = std::max(cf, cg);
  RealField out(f.grid(), co);
  for (int c = 0; c < co; ++c) {
    kernels::multiply(f.component(cf == 1 ? 0 : c), g.component(cg == 1 ? 0 : c), out.component(c));
  }
  return out;
}

SpectralField dealias_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid(), "dealias_product");
  const RealField pf = to_physical(truncated_two_thirds(f));
  const RealField pg = to_physical(truncated_two_thirds(g));
  return truncated_two_thirds(to_spectral(pointwise_product(pf, pg)));
}

RealField product(const RealField& f, const RealField& g) {
  return to_physical(dealias_product(to_spectral(f), to_spectral(g)));
}

double parseval_energy(const SpectralField& f) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    auto v = f.component(c);
    for (std::size_t m = 0; m < g.num_modes(); ++m) s += g.mode_weight(m) * std::norm(v[m]);
  }
  return g.volume() * s;
}

double mean(const RealField& f, int component) {
  return kernels::sum(f.component(component)) / static_cast<double>(f.points());
}

RealField subtract_mean(RealField f) {
  for (int c = 0; c < f.components(); ++c) {
    const double m = mean(f, c);
    for (auto& v : f.component(c)) v -= m;
  }
  return f;
}

RealField take_components(const RealField& f, int first, int count) {
  require(first >= 0 && first + count <= f.components(), ErrorCode::InvalidArgument,
          "take_components: range out of bounds");
  RealField out(f.grid(), count);
  for (int c = 0; c < count; ++c) {
    auto s = f.component(first + c);
    std::copy(s.begin(), s.end(), out.component(c).begin());
  }
  return out;
}

SpectralField take_components(const SpectralField& f, int first, int count) {
  require(first >= 0 && first + count <= f.components(), ErrorCode::InvalidArgument,
          "take_components: range out of bounds");
  SpectralField out(f.grid(), count);
  for (int c = 0; c < count; ++c) {
    auto s = f.component(first + c);
    std::copy(s.begin(), s.end(), out.component(c).begin());
  }
  return out;
}

RealField gradient(const RealField& f) {
  return to_physical(differentiate(to_spectral(f), DiffKind::Gradient));
}
RealField divergence(const RealField& f) {
  return to_physical(differentiate(to_spectral(f), DiffKind::Divergence));
}
RealField curl(const RealField& f) { return to_physical(differentiate(to_spectral(f), DiffKind::Curl)); }
RealField laplacian(const RealField& f) {
  return to_physical(differentiate(to_spectral(f), DiffKind::Laplacian));
}
RealField partial(const RealField& f, int axis) {
  return to_physical(differentiate(to_spectral(f), DiffKind::Partial, axis));
}

RealField magnitude(const RealField& f) {
  RealField out(f.grid(), 1);
  kernels::magnitude(f.values(), f.components(), out.component(0));
  return out;
}

IVec series_bound(const SpectralField& f, double rel_tol) {
  const Grid& g = f.grid();
  double peak = 0.0;
  for (const Complex& c : f.values()) peak = std::max(peak, std::abs(c));
  const double floor = rel_tol * peak;
  IVec b = {0, 0, 0};
  for (int c = 0; c < f.components(); ++c) {
    auto v = f.component(c);
    for (std::size_t m = 0; m < g.num_modes(); ++m) {
      if (std::abs(v[m]) <= floor || v[m] == Complex(0.0, 0.0) || !g.resolved(m)) continue;
      const IVec& k = g.mode(m);
      for (int d = 0; d < g.dim(); ++d) b[d] = std::max(b[d], std::abs(k[d]));
    }
  }
  return b;
}

kernels::TrigSeries make_series(const SpectralField& f) { return make_series(f, series_bound(f)); }

kernels::TrigSeries make_series(const SpectralField& f, const IVec& b) {
  const Grid& g = f.grid();
  require(b[0] < 130 && b[1] < 130 && b[2] < 130, ErrorCode::InvalidArgument,
          "make_series: grid too large for point evaluation");
  kernels::TrigSeries s;
  s.dim = g.dim();
  s.components = f.components();
  s.unit = g.wavenumber_unit();
  std::copy(b.begin(), b.end(), s.bound);
  const std::size_t box = s.box_size();
  s.coef.assign(box * static_cast<std::size_t>(s.components), Complex(0.0, 0.0));
  const int n1 = b[0] + 1, n2 = 2 * b[1] + 1;
  for (int c = 0; c < f.components(); ++c) {
    auto v = f.component(c);
    for (std::size_t m = 0; m < g.num_modes(); ++m) {
      if (!g.resolved(m)) continue;
      const IVec& k = g.mode(m);
      if (k[0] > b[0] || std::abs(k[1]) > b[1] || std::abs(k[2]) > b[2]) continue;
      const std::size_t idx = (static_cast<std::size_t>(k[2] + b[2]) * n2 + (k[1] + b[1])) * n1 + k[0];
      s.coef[c * box + idx] = v[m] * g.mode_weight(m);
    }
  }
  return s;
}

RealField evaluate_at(const kernels::TrigSeries& s, const Grid& grid, std::span<const double> points) {
  require(points.size() == grid.num_points() * static_cast<std::size_t>(grid.dim()),
          ErrorCode::InvalidArgument, "evaluate_at: need one point per lattice site");
  RealField out(grid, s.components);
  kernels::evaluate_series(s, points, out.values());
  return out;
}

}  // namespace mhd
