#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dancer/grid.hpp"

namespace dancer {

/// Surface area of the unit sphere S^{d-1} in R^d (2 for d = 1).
double sphere_area(int dim);

/// Quadrature weights for ∫_0^{r_max} f(r) r^{d-1} dr on a uniform grid: the
/// shell volume (per unit sphere area) of the cell [r-h/2, r+h/2] around each
/// node, clipped to [0, r_max]. The conservative Laplacian below is symmetric
/// in the inner product with these weights and exact on quadratics.
std::vector<double> radial_weights(const RadialGrid& grid, int dim);

/// ∫_{R^d} f for a radial f sampled on the grid.
double integrate_radial(std::span<const double> values, const RadialGrid& grid, int dim);

/// Tridiagonal matrix stored by diagonals; lower[0] and upper[n-1] unused.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  std::size_t size() const noexcept { return diag.size(); }
  std::vector<double> apply(std::span<const double> x) const;
};

/// Symmetric tridiagonal matrix: off[i] couples rows i and i+1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
  std::vector<double> apply(std::span<const double> x) const;
};

/// Conservative second-order discretization of
///   -η'' - (d-1)/r η' + ℓ(ℓ+d-2)/r² η
/// on the unknowns of a radial grid. Sector 0 imposes η'(0) = 0 (the origin is
/// an unknown), sector ≥ 1 imposes η(0) = 0; the last node is Dirichlet.
/// The centrifugal diagonal makes the stencil exact on r^ℓ.
/// `first` is the grid index of the first unknown; upper[n-1] holds the
/// coupling of the last unknown to the Dirichlet node.
struct RadialLaplacian {
  Tridiagonal matrix;
  std::size_t first = 0;
  int dim = 1;
  int sector = 0;
};

RadialLaplacian radial_laplacian(const RadialGrid& grid, int dim, int sector = 0);

/// -Δ_d v at grid node i (0 <= i < size-1) using the sector-0 stencil.
double minus_laplacian_at(std::span<const double> v, const RadialGrid& grid, int dim, std::size_t i);

/// Solve a diagonally dominant tridiagonal system (Thomas algorithm).
std::vector<double> solve_tridiagonal(const Tridiagonal& t, std::span<const double> rhs);

/// Gaussian elimination with partial pivoting; safe for indefinite systems
/// such as the shifted matrices of inverse iteration.
std::vector<double> solve_tridiagonal_pivoted(const Tridiagonal& t, std::span<const double> rhs);

}  // namespace dancer
