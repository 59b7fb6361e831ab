#pragma once

#include <cstddef>
#include <vector>

#include "dancer/grid.hpp"
#include "dancer/params.hpp"
#include "dancer/radial_ode.hpp"
#include "dancer/radial_operator.hpp"

namespace dancer::spectrum {

/// L_w η = -Δη + (1 - p|w|^{p-1}) η restricted to the spherical-harmonic
/// sector ℓ, discretized on the grid of w.
struct LinearizedOperator {
  RadialProfile potential;
  int m = 1;
  int sector = 0;
  /// Grid index of the first unknown (0 for ℓ = 0, 1 otherwise); the last
  /// node is Dirichlet and carries no unknown.
  std::size_t first = 0;
  /// D^{1/2} A D^{-1/2} with D the cell-volume weights of the unknowns.
  SymTridiagonal matrix;
  /// Cell-volume weights of the unknowns.
  std::vector<double> weights;
  /// Coefficient of η(r_max) in the last row of L_w.
  double boundary_coupling = 0.0;

  std::size_t unknowns() const noexcept { return matrix.size(); }
  /// (L_w η) at the unknowns, for η given at every grid node (including the
  /// Dirichlet value at r_max).
  std::vector<double> apply(std::span<const double> eta) const;
};

LinearizedOperator assemble_linearized(const RadialProfile& w, const ProblemParams& params, int sector);
inline LinearizedOperator assemble_linearized(const radial::BoundState& state, int sector) {
  return assemble_linearized(state.profile, state.params, sector);
}

struct EigenPair {
  /// Eigenvalue of L_w; negative values are the -λ_i.
  double eigenvalue = 0.0;
  /// Normalized so that the integral of Z² over R^m is 1, positive at r = step.
  RadialProfile eigenfunction;
  /// ‖L_w Z - μ Z‖₂ with the same measure.
  double residual = 0.0;
};

struct SpectrumResult {
  std::vector<EigenPair> pairs;
  /// Number of eigenvalues below -zero_tolerance (over the whole discrete spectrum).
  int k = 0;
  /// Number of eigenvalues at most +zero_tolerance.
  int l = 0;
  double zero_tolerance = 0.0;
};

/// 1e-6, widened to 10 step² on coarse grids where discrete zero modes sit at O(step²).
double zero_tolerance(const RadialGrid& grid);

/// The `count` lowest eigenpairs by Sturm bisection and inverse iteration.
/// Throws NumericalError (with the residual history) if inverse iteration stalls.
SpectrumResult eigenpairs(const LinearizedOperator& op, int count);

/// ‖L_w w'‖₂ / ‖w'‖₂ in sector ℓ = 1 (the odd extension when m = 1), w' by
/// fourth-order central differences. Throws IllPosedError for a constant profile.
double verify_translation_mode(const radial::BoundState& state);

/// ∫_{R^m} f g for radial f, g given on the same grid.
double inner_product(const RadialProfile& f, const RadialProfile& g, int m);

}  // namespace dancer::spectrum
