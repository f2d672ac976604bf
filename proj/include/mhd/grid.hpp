#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>

namespace mhd {

using Complex = std::complex<double>;
using IVec = std::array<int, 3>;
using Vec3 = std::array<double, 3>;

namespace detail {
struct GridTables;
}

/// Periodic sampling lattice with `points_per_axis` samples along each of
/// `dim` axes. Real data is stored row-major with axis 1 fastest; spectral
/// data uses the half-complex layout where axis 1 keeps frequencies
/// 0..n/2 only and the remaining axes run over the full range.
class Grid {
 public:
  Grid() = default;

  int dim() const;
  int points_per_axis() const;
  double period() const;
  /// Largest resolved integer frequency, n/2 - 1. The Nyquist plane is dropped.
  int cutoff() const;
  /// Integer frequency bound of the two-thirds dealiasing ball.
  int dealias_bound() const;

  std::size_t num_points() const;
  std::size_t num_modes() const;
  double volume() const;
  double spacing() const;
  /// 2*pi / period: converts integer frequencies to physical wavenumbers.
  double wavenumber_unit() const;

  /// Integer frequency vector of spectral slot m (unused axes are 0).
  const IVec& mode(std::size_t m) const;
  /// Physical wavevector of spectral slot m.
  Vec3 wavevector(std::size_t m) const;
  /// Physical |k|^2 of slot m.
  double k_squared(std::size_t m) const;
  /// Hermitian multiplicity of slot m (1 or 2); 0 for unresolved Nyquist slots.
  double mode_weight(std::size_t m) const;
  bool resolved(std::size_t m) const;
  bool in_dealias_ball(std::size_t m) const;
  /// Spectral slot holding integer frequency k (or its conjugate partner).
  /// Returns false when k is not representable; `conjugate` reports whether
  /// the stored coefficient must be conjugated to obtain coef(k).
  bool slot_of(const IVec& k, std::size_t& slot, bool& conjugate) const;

  /// Lattice index of real sample i and its physical coordinate.
  IVec point_index(std::size_t i) const;
  Vec3 coordinate(std::size_t i) const;

  /// Normalized forward transform coef(k) = (1/M) sum_x f(x) e^{-ik.x};
  /// the Nyquist plane is set to zero.
  void forward(std::span<const double> in, std::span<Complex> out) const;
  /// Inverse transform f(x) = sum_k coef(k) e^{ik.x}.
  void inverse(std::span<const Complex> in, std::span<double> out) const;

  friend bool operator==(const Grid& a, const Grid& b);

 private:
  friend Grid make_grid(int, int, double);
  explicit Grid(std::shared_ptr<const detail::GridTables> t) : tables_(std::move(t)) {}
  std::shared_ptr<const detail::GridTables> tables_;
};

Grid make_grid(int dim, int points_per_axis, double period = 2.0 * std::numbers::pi);

}  // namespace mhd
