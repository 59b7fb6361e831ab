#include "dancer/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dancer/errors.hpp"

namespace dancer {

RadialGrid::RadialGrid(double r_max, double step) : r_max_(r_max), step_(step), points_(0) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("grid step must be positive");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw InvalidArgument("grid r_max must be positive");
  const double cells = r_max / step;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells))
    throw InvalidArgument("grid r_max/step must be an integer, got " + std::to_string(cells));
  points_ = static_cast<std::size_t>(rounded) + 1;
  r_max_ = rounded * step;
}

std::vector<double> RadialGrid::nodes() const {
  std::vector<double> r(points_);
  for (std::size_t i = 0; i < points_; ++i) r[i] = node(i);
  return r;
}

std::size_t RadialGrid::index_of(double r) const noexcept {
  if (r <= 0.0) return 0;
  const auto i = static_cast<std::size_t>(std::llround(r / step_));
  return std::min(i, points_ - 1);
}

RadialProfile::RadialProfile(RadialGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidArgument("profile length " + std::to_string(values_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("profile contains a non-finite value");
}

RadialProfile::RadialProfile(RadialGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}

double RadialProfile::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double RadialProfile::interpolate(double r) const {
  const std::size_t n = values_.size();
  if (n < 4) throw InvalidArgument("interpolation needs at least four nodes");
  const double h = grid_.step();
  const double t = std::clamp(r / h, 0.0, static_cast<double>(n - 1));
  auto base = static_cast<std::ptrdiff_t>(std::floor(t)) - 1;
  base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(n) - 4);
  double sum = 0.0;
  for (int a = 0; a < 4; ++a) {
    double li = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) li *= (t - static_cast<double>(base + b)) / static_cast<double>(a - b);
    sum += li * values_[static_cast<std::size_t>(base + a)];
  }
  return sum;
}

RadialProfile restrict_to(const RadialProfile& profile, const RadialGrid& coarse) {
  const RadialGrid& fine = profile.grid();
  const double ratio = coarse.step() / fine.step();
  const double k = std::round(ratio);
  if (k < 1.0 || std::abs(ratio - k) > 1e-9 * ratio)
    throw InvalidArgument("coarse step must be an integer multiple of the fine step");
  if (coarse.r_max() > fine.r_max() * (1.0 + 1e-12))
    throw InvalidArgument("coarse grid extends beyond the profile");
  const auto stride = static_cast<std::size_t>(k);
  std::vector<double> v(coarse.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = profile[i * stride];
  return RadialProfile(coarse, std::move(v));
}

Field2D::Field2D(RadialGrid s_grid, RadialGrid r_grid)
    : s_grid_(s_grid), r_grid_(r_grid), values_(s_grid.size() * r_grid.size(), 0.0) {}

Field2D::Field2D(RadialGrid s_grid, RadialGrid r_grid, std::vector<double> values)
    : s_grid_(s_grid), r_grid_(r_grid), values_(std::move(values)) {
  if (values_.size() != s_grid_.size() * r_grid_.size())
    throw InvalidArgument("field size does not match its grids");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("field contains a non-finite value");
}

double Field2D::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {
void require_same_shape(const Field2D& a, const Field2D& b) {
  if (!(a.s_grid() == b.s_grid()) || !(a.r_grid() == b.r_grid()))
    throw InvalidArgument("fields live on different grids");
}
}  // namespace

Field2D& Field2D::operator+=(const Field2D& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Field2D& Field2D::operator-=(const Field2D& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Field2D& Field2D::operator*=(double c) noexcept {
  for (double& v : values_) v *= c;
  return *this;
}

Field2D Field2D::outer(const RadialProfile& a, const RadialProfile& b) {
  Field2D f(a.grid(), b.grid());
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.cols(); ++j) f(i, j) = a[i] * b[j];
  return f;
}

Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
Field2D operator*(double c, Field2D a) { return a *= c; }

}  // namespace dancer
