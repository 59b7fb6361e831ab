#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "dancer/grid.hpp"
#include "dancer/helmholtz.hpp"
#include "dancer/params.hpp"

namespace dancer::norms {

enum class Tag { star_alpha, starstar_alpha, weighted_holder_beta, hat_beta, sharp };

std::string_view tag_name(Tag tag) noexcept;

/// Selects a norm and its exponent (α for the Lebesgue norms, β for the
/// weighted Hölder norms; unused for sharp).
struct NormKind {
  Tag tag = Tag::star_alpha;
  double parameter = 2.0;
  double holder_alpha = 0.5;

  /// Throws InvalidArgument for α < 1 on Lebesgue norms, a negative weight
  /// exponent, or a Hölder exponent outside (0, 1].
  void validate() const;
};

/// A norm evaluated on a truncated grid. tail_bound bounds the change of the
/// value if the field were continued beyond the grid along its decay envelope.
struct NormReport {
  NormKind kind;
  double value = 0.0;
  double tail_bound = 0.0;
  std::vector<RadialGrid> grids;
};

/// Decay envelope C e^{-s_rate s} (1+r)^{-r_power} assumed beyond the grid.
struct Envelope {
  double s_rate = 0.5;
  double r_power = 1.5;
};

/// (∫_{R^d} |f|^α)^{1/α} for a radial f, shell-volume quadrature.
double lebesgue_norm(const RadialProfile& f, int dim, double alpha);

/// (∫_{R^{m+n}} |f|^α)^{1/α} for f(|x|, |y|), product shell-volume quadrature.
double lebesgue_norm(const Field2D& f, int m, int n, double alpha);

/// ‖ξ‖_{L^α(R^{m+n})} + ‖ξ‖_{L^∞}.
double norm_star_alpha(const Field2D& field, double alpha, const ProblemParams& params);

/// Σ_i ‖η_i‖_{L^α(R^n)} + ‖η_i‖_{L^∞}. Throws InvalidArgument for an empty tuple.
double norm_starstar_alpha(std::span<const RadialProfile> tuple, int n, double alpha);

/// Largest weighted value and largest weighted Hölder quotient of a C^{0,α} norm.
struct HolderParts {
  double value = 0.0;
  double seminorm = 0.0;

  double total() const noexcept { return value + seminorm; }
};

/// Grid surrogate of sup_P ‖ξ (1+r)^β e^{s/2}‖_{C^{0,α}(B_P(1))}: the largest
/// weighted value plus the largest weighted quotient |ξ(P) - ξ(Q)| / |P - Q|^α
/// over |P - Q| <= 1, with the weight frozen at P. Q ranges over the eight
/// grid directions from P at dyadic multiples of the step.
/// Throws ResolutionError if a unit ball spans fewer than 4 nodes per axis.
double norm_weighted_holder(const Field2D& field, double beta, double holder_alpha = 0.5);
HolderParts weighted_holder_parts(const Field2D& field, double beta, double holder_alpha = 0.5);

/// Radial analogue on R^n: sup |η| (1+r)^β plus the largest quotient
/// (1+r_i)^β |η_i - η_j| / |r_i - r_j|^α over all node pairs within distance 1.
double norm_hat(const RadialProfile& eta, double beta, double holder_alpha = 0.5);
HolderParts hat_parts(const RadialProfile& eta, double beta, double holder_alpha = 0.5);

/// |c1| + max over unit windows [k, k+1] of the C^{0,α} norm of (1+r)² h̄.
double norm_sharp(const helmholtz::PAlphaDecomposition& decomp);

/// ‖φ‖_{L^q(R^n)} / ‖Δφ + φ‖_{L^{q'}(R^n)}, 1/q + 1/q' = 1. The last node is
/// treated as a Dirichlet boundary. Throws DomainError unless
/// 2(n+1)/(n-1) <= q <= 2n/(n-2), and IllPosedError if Δφ + φ vanishes.
double krs_probe(const RadialProfile& phi, int n, double q);

/// Reports with tail bounds. Lebesgue tails integrate the envelope, with its
/// constant taken as the largest weighted value on the outer half of the grid,
/// over the complement of the grid; an envelope too slow to be integrable gives
/// an infinite bound. The weights of the sup-type norms cancel their envelopes,
/// so those report a zero tail bound.
NormReport report_star_alpha(const Field2D& field, double alpha, const ProblemParams& params,
                             const Envelope& envelope = {});
NormReport report_starstar_alpha(std::span<const RadialProfile> tuple, int n, double alpha,
                                 double r_power);
NormReport report_weighted_holder(const Field2D& field, double beta, double holder_alpha = 0.5);
NormReport report_hat(const RadialProfile& eta, double beta, double holder_alpha = 0.5);
NormReport report_sharp(const helmholtz::PAlphaDecomposition& decomp);

}  // namespace dancer::norms
