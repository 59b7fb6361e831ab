#pragma once

#include <span>
#include <vector>

#include "dancer/grid.hpp"

namespace dancer::helmholtz {

/// Bessel function of the first kind J_ν(x), x >= 0. The order may be
/// negative as long as it is not an integer.
double bessel_j(double nu, double x);

/// Bessel function of the second kind Y_ν(x), ν >= 0, x > 0.
double bessel_y(double nu, double x);

enum class Kind { regular, singular };

/// J_{n,s}(√λ r) = t^{1-n/2} J_μ(t) (regular) or t^{1-n/2} Y_μ(t) (singular),
/// with t = √λ r and μ = √((n/2-1)² + s²). Solves
///   φ'' + (n-1)/r φ' + (λ - s²/r²) φ = 0,
/// which for s = 0 is the radial Helmholtz equation Δφ + λφ = 0 in R^n.
/// The singular kind throws DomainError at r = 0.
double radial_solution(Kind kind, int n, double s, double lambda, double r);

/// d/dr of radial_solution.
double radial_derivative(Kind kind, int n, double s, double lambda, double r);

/// r^{n-1} (J N' - J' N) for the s = 0 pair; the exact value is (2/π) λ^{1-n/2}.
double wronskian(int n, double lambda, double r);

/// Σ_j J_{n,0}(√λ |y - y_j|).
struct SourceSet {
  int n = 3;
  double lambda = 1.0;
  std::vector<std::vector<double>> points;

  /// Throws InvalidArgument for an empty set, wrong dimensions or non-finite data.
  void validate() const;
};

double superpose(const SourceSet& sources, std::span<const double> y);

/// Cutoff with ρ = 0 on [0, 1], ρ = 1 on [2, ∞), quintic smoothstep between.
double cutoff_rho(double r);

struct InhomogeneousSolution {
  RadialProfile h;
  /// Decay exponent of η fitted on the outer half of the grid.
  double beta_estimate = 0.0;
  /// Set when beta_estimate <= (n+1)/2, where the decay estimate for h no longer applies.
  bool decay_warning = false;
};

/// Regular particular solution of h'' + (n-1)/r h' + λh = η by variation of
/// parameters:
///   h = (N ∫_0^r J η s^{n-1} ds - J ∫_0^r N η s^{n-1} ds) / ((2/π) λ^{1-n/2}).
/// The integrals use four-point Gauss-Legendre per cell on the cubic
/// interpolant of η. h(0) = h'(0) = 0.
InhomogeneousSolution solve_inhomogeneous(int n, double lambda, const RadialProfile& eta);

/// max over nodes 0..N-2 of |h'' + (n-1)/r h' + λh - η| with the conservative stencil.
double helmholtz_residual(const RadialProfile& h, int n, double lambda, const RadialProfile& eta);

/// Least-squares fit of A cos(√λ r - ζ) to r^{(n-1)/2} J_{n,0}(√λ r) on [lo, hi].
struct PhaseFit {
  double zeta = 0.0;
  double amplitude = 0.0;
  /// Root-mean-square fit residual relative to the amplitude.
  double residual = 0.0;
};

/// Throws NumericalError if the relative fit residual exceeds 1e-2.
PhaseFit extract_phase(int n, double lambda, double lo = 50.0, double hi = 200.0);

/// c1 ρ(r) r^{-1} sin(√λ r - ζ) + remainder.
struct PAlphaDecomposition {
  double c1 = 0.0;
  double zeta = 0.0;
  double lambda = 1.0;
  RadialProfile remainder;
  /// max over the grid of (1+r)² |remainder|.
  double K = 0.0;
  double holder_alpha = 0.5;
  /// Bound on the part of c1 lost by truncating the far-field integrals.
  double truncation_error = 0.0;

  double resonant_part(double r) const;
  /// resonant_part + remainder on the remainder's grid.
  RadialProfile reconstruct() const;
};

struct ResonantOptions {
  double holder_alpha = 0.5;
  /// The oscillatory far-field integrals are taken numerically up to this
  /// radius and in closed form beyond.
  double far_radius = 1e3;
  /// Reject η̄ whose fitted decay is slower than r^{-3} (with slack 0.2).
  bool enforce_decay = true;
};

/// Solves h'' + (2/r) h' + λh = η in R^3 for
///   η = ρ r^{-2} [k1 sin²θ + k2 cos²θ + k3 sinθ cosθ] + η̄,  θ = √λ r - ζ,
/// with the solution regular at the origin whose far field has no
/// r^{-1} cos θ component:
///   h = (N ∫_0^r J η s² + J ∫_r^∞ N η s²) / √λ,
/// where J = r^{-1} cos θ and N = r^{-1} sin θ are the normalized radial
/// solutions. Then c1 = ∫_0^∞ J η s² / √λ. η̄ is taken to vanish beyond its
/// grid; the neglected tail enters truncation_error.
/// Throws ContractViolation if η̄ decays slower than r^{-3}.
PAlphaDecomposition resonant_solve_n3(double lambda, double k1, double k2, double k3,
                                      const RadialProfile& eta_bar, const ResonantOptions& options = {});

/// Decay exponent γ in |f| ~ C r^{-γ}, by a least-squares fit of the log of
/// the maximum of |f| over consecutive windows of the given width on [lo, hi].
/// Windows where f vanishes are skipped; returns +∞ if f vanishes on the last
/// window or fewer than two windows remain.
double envelope_decay_exponent(const RadialProfile& f, double lo, double hi, double window);

}  // namespace dancer::helmholtz
