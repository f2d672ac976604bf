#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mhd/errors.hpp"
#include "mhd/grid.hpp"

namespace mhd {

/// Real samples of a `components`-valued field; component c occupies the
/// contiguous range [c*M, (c+1)*M) with M = grid.num_points().
class RealField {
 public:
  RealField() = default;
  RealField(Grid grid, int components);

  /// Samples f(x, c) at every lattice point.
  static RealField sample(Grid grid, int components,
                          const std::function<double(const Vec3&, int)>& f);
  static RealField constant(Grid grid, int components, double value);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t points() const { return grid_.num_points(); }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::span<double> component(int c);
  std::span<const double> component(int c) const;
  double& operator()(int c, std::size_t i) { return data_[c * points() + i]; }
  double operator()(int c, std::size_t i) const { return data_[c * points() + i]; }

  bool all_finite() const;

  RealField& operator+=(const RealField& o);
  RealField& operator-=(const RealField& o);
  RealField& operator*=(double s);

 private:
  Grid grid_;
  int components_ = 0;
  std::vector<double> data_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double s, RealField a);

/// Half-complex Fourier coefficients, one block of grid.num_modes() per component.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(Grid grid, int components);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t modes() const { return grid_.num_modes(); }

  std::span<Complex> values() { return data_; }
  std::span<const Complex> values() const { return data_; }
  std::span<Complex> component(int c);
  std::span<const Complex> component(int c) const;
  Complex& operator()(int c, std::size_t m) { return data_[c * modes() + m]; }
  Complex operator()(int c, std::size_t m) const { return data_[c * modes() + m]; }

  /// Coefficient at integer frequency k, using Hermitian symmetry for k1 < 0.
  /// Unresolved frequencies are implicitly zero.
  Complex coefficient(int c, const IVec& k) const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);

 private:
  Grid grid_;
  int components_ = 0;
  std::vector<Complex> data_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Viscosities, pressure law P = A rho^gamma, reference density and floor.
struct PhysParams {
  double mu = 0.1;
  double lambda = 0.0;
  double nu = 0.1;
  double pressure_A = 1.0;
  double pressure_gamma = 1.4;
  double rho_bar = 1.0;
  double c0_floor = 0.5;

  double mu_prime() const { return lambda + mu; }
  /// Throws InvalidArgument unless mu > 0, lambda + 2 mu > 0, nu > 0, P'(rho_bar) > 0.
  void validate() const;
};

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace mhd
