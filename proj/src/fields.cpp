#include "mhd/fields.hpp"

#include <cmath>
#include <string>

#include "mhd/kernels.hpp"

namespace mhd {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  require(a == b, ErrorCode::GridMismatch, std::string(what) + ": fields live on different grids");
}

RealField::RealField(Grid grid, int components)
    : grid_(std::move(grid)), components_(components),
      data_(static_cast<std::size_t>(components) * grid_.num_points(), 0.0) {
  require(components >= 1, ErrorCode::InvalidArgument, "field needs at least one component");
}

RealField RealField::sample(Grid grid, int components,
                            const std::function<double(const Vec3&, int)>& f) {
  RealField out(std::move(grid), components);
  const std::size_t M = out.points();
  for (int c = 0; c < components; ++c) {
    auto v = out.component(c);
    for (std::size_t i = 0; i < M; ++i) v[i] = f(out.grid_.coordinate(i), c);
  }
  return out;
}

RealField RealField::constant(Grid grid, int components, double value) {
  RealField out(std::move(grid), components);
  std::fill(out.data_.begin(), out.data_.end(), value);
  return out;
}

std::span<double> RealField::component(int c) {
  return std::span<double>(data_).subspan(c * points(), points());
}
std::span<const double> RealField::component(int c) const {
  return std::span<const double>(data_).subspan(c * points(), points());
}

bool RealField::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

RealField& RealField::operator+=(const RealField& o) {
  require_same_grid(grid_, o.grid_, "RealField +=");
  require(components_ == o.components_, ErrorCode::InvalidArgument, "component mismatch");
  kernels::axpy(1.0, o.data_, data_);
  return *this;
}
RealField& RealField::operator-=(const RealField& o) {
  require_same_grid(grid_, o.grid_, "RealField -=");
  require(components_ == o.components_, ErrorCode::InvalidArgument, "component mismatch");
  kernels::axpy(-1.0, o.data_, data_);
  return *this;
}
RealField& RealField::operator*=(double s) {
  kernels::scale(s, data_);
  return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double s, RealField a) { return a *= s; }

SpectralField::SpectralField(Grid grid, int components)
    : grid_(std::move(grid)), components_(components),
      data_(static_cast<std::size_t>(components) * grid_.num_modes(), Complex(0.0, 0.0)) {
  require(components >= 1, ErrorCode::InvalidArgument, "field needs at least one component");
}

std::span<Complex> SpectralField::component(int c) {
  return std::span<Complex>(data_).subspan(c * modes(), modes());
}
std::span<const Complex> SpectralField::component(int c) const {
  return std::span<const Complex>(data_).subspan(c * modes(), modes());
}

Complex SpectralField::coefficient(int c, const IVec& k) const {
  std::size_t slot = 0;
  bool conj = false;
  if (!grid_.slot_of(k, slot, conj)) return {0.0, 0.0};
  const Complex v = (*this)(c, slot);
  return conj ? std::conj(v) : v;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField +=");
  require(components_ == o.components_, ErrorCode::InvalidArgument, "component mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}
SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField -=");
  require(components_ == o.components_, ErrorCode::InvalidArgument, "component mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}
SpectralField& SpectralField::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

void PhysParams::validate() const {
  require(mu > 0.0, ErrorCode::InvalidArgument, "mu must be positive");
  require(lambda + 2.0 * mu > 0.0, ErrorCode::InvalidArgument, "lambda + 2 mu must be positive");
  require(nu > 0.0, ErrorCode::InvalidArgument, "nu must be positive");
  require(pressure_A > 0.0, ErrorCode::InvalidArgument, "pressure_A must be positive");
  require(pressure_gamma >= 1.0, ErrorCode::InvalidArgument, "pressure_gamma must be >= 1");
  require(rho_bar > 0.0, ErrorCode::InvalidArgument, "rho_bar must be positive");
  require(c0_floor > 0.0 && c0_floor < 1.0, ErrorCode::InvalidArgument,
          "c0_floor must lie in (0, 1)");
  const double dp = pressure_A * pressure_gamma * std::pow(rho_bar, pressure_gamma - 1.0);
  require(dp > 0.0, ErrorCode::InvalidArgument, "P'(rho_bar) must be positive");
}

}  // namespace mhd
