#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dancer {

/// Uniform radial grid 0, step, 2*step, ..., r_max.
class RadialGrid {
 public:
  RadialGrid(double r_max, double step);

  double r_max() const noexcept { return r_max_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return points_; }
  double node(std::size_t i) const noexcept { return static_cast<double>(i) * step_; }
  std::vector<double> nodes() const;

  /// Index of the node closest to r, clamped to the grid.
  std::size_t index_of(double r) const noexcept;

  friend bool operator==(const RadialGrid& a, const RadialGrid& b) noexcept {
    return a.points_ == b.points_ && a.step_ == b.step_;
  }

 private:
  double r_max_;
  double step_;
  std::size_t points_;
};

/// Samples of a radial function, one per grid node.
class RadialProfile {
 public:
  RadialProfile(RadialGrid grid, std::vector<double> values);
  explicit RadialProfile(RadialGrid grid);  // zero profile

  template <class F>
  static RadialProfile sample(const RadialGrid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(i));
    return RadialProfile(grid, std::move(v));
  }

  const RadialGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  double max_abs() const noexcept;

  /// Value at r by cubic Lagrange interpolation on the four nearest nodes.
  double interpolate(double r) const;

 private:
  RadialGrid grid_;
  std::vector<double> values_;
};

/// Restrict a profile to a coarser grid whose step is an integer multiple of
/// the profile's step and whose r_max does not exceed it.
RadialProfile restrict_to(const RadialProfile& profile, const RadialGrid& coarse);

/// Values of a function of (s, r) = (|x|, |y|) on a product grid, stored
/// row-major with s as the slow index.
class Field2D {
 public:
  Field2D(RadialGrid s_grid, RadialGrid r_grid);
  Field2D(RadialGrid s_grid, RadialGrid r_grid, std::vector<double> values);

  const RadialGrid& s_grid() const noexcept { return s_grid_; }
  const RadialGrid& r_grid() const noexcept { return r_grid_; }
  std::size_t rows() const noexcept { return s_grid_.size(); }
  std::size_t cols() const noexcept { return r_grid_.size(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols() + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols() + j]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double max_abs() const noexcept;

  Field2D& operator+=(const Field2D& other);
  Field2D& operator-=(const Field2D& other);
  Field2D& operator*=(double c) noexcept;

  /// Product field a(s) * b(r).
  static Field2D outer(const RadialProfile& a, const RadialProfile& b);

 private:
  RadialGrid s_grid_;
  RadialGrid r_grid_;
  std::vector<double> values_;
};

Field2D operator+(Field2D a, const Field2D& b);
Field2D operator-(Field2D a, const Field2D& b);
Field2D operator*(double c, Field2D a);

}  // namespace dancer
