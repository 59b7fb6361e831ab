#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dancer/errors.hpp"
#include "dancer/grid.hpp"
#include "dancer/helmholtz.hpp"
#include "dancer/radial_ode.hpp"
#include "dancer/spectrum.hpp"

namespace dancer::reduction {

/// Product grid for u(|x|, |y|) = u(s, r).
struct ReductionGrids {
  RadialGrid s_grid{12.0, 1.0 / 16.0};
  RadialGrid r_grid{60.0, 1.0 / 8.0};
};

/// Everything the fixed point needs: the bound state sampled on the s-grid,
/// the radial-sector linearized operator there and its lowest eigenpair
/// (Z, -λ1), the amplitude ε and the y-dimension n.
struct ReductionInput {
  radial::BoundState state;
  RadialProfile w;
  spectrum::LinearizedOperator op;
  spectrum::SpectrumResult spectrum;
  int n = 4;
  double epsilon = 0.0;
  ReductionGrids grids;

  const RadialProfile& z() const { return spectrum.pairs.front().eigenfunction; }
  double lambda1() const { return -spectrum.pairs.front().eigenvalue; }

  /// Throws InvalidArgument unless |ε| <= epsilon_max, λ1 > 0 and n >= 3.
  void validate(double epsilon_max) const;
};

/// Restricts the bound state to grids.s_grid (whose step must be a multiple
/// of the state's step) and computes the radial-sector spectrum there.
ReductionInput make_input(const radial::BoundState& state, int n, double epsilon, const ReductionGrids& grids = {});

/// |u|^{p-1}u - |w|^{p-1}w - p|w|^{p-1}t with u = w + t, t = z f + φ.
/// For |t| < |w|/2 the binomial series Σ_{k>=2} C(p,k) (t/w)^k |w|^{p-1} w is
/// summed, which avoids the cancellation of the direct formula.
double nonlinearity(double w_val, double z_val, double f_val, double phi_val, double p);

struct Projection {
  RadialProfile g;
  Field2D xi_perp;
};

/// g(r) = ∫_{R^m} ξ(x, r) Z(x) dx and ξ_perp = ξ - Z g.
Projection project(const Field2D& xi, const RadialProfile& z, int m);

/// max over r of |∫_{R^m} φ(x, r) Z(x) dx|.
double orthogonality_defect(const Field2D& phi, const RadialProfile& z, int m);

/// Solver for L Φ = ξ_perp with
///   L = -Δ_s^{(m)} - Δ_r^{(n)} + 1 - p|w|^{p-1},
/// Neumann at s = 0 and r = 0, Dirichlet at s_max and r_max, in the
/// complement of Z. The s-part is diagonalized once (dense symmetric
/// eigensolver); each remaining mode is a tridiagonal solve in r.
class PhiSolver {
 public:
  /// Throws IllPosedError if the operator has a nonpositive direction other
  /// than Z in the radial sector.
  PhiSolver(const spectrum::LinearizedOperator& op, const RadialProfile& z, const RadialGrid& r_grid, int n);
  ~PhiSolver();
  PhiSolver(PhiSolver&&) noexcept;
  PhiSolver& operator=(PhiSolver&&) noexcept;

  /// Solves with iterative refinement and a final projection onto the
  /// complement of Z. Throws NumericalError (with the residual history) if
  /// the refined residual does not reach 1e-10 relative to ξ_perp.
  Field2D solve(const Field2D& xi_perp) const;

  /// L φ at every node except the Dirichlet row and column, which are 0.
  Field2D apply(const Field2D& phi) const;

  /// Relative residual reached by the last call to solve.
  double last_residual() const noexcept { return last_residual_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  mutable double last_residual_ = 0.0;
};

/// One-shot form of PhiSolver::solve.
Field2D solve_phi(const Field2D& xi_perp, const spectrum::LinearizedOperator& op, const RadialProfile& z, int n);

/// Solution of -h'' - (n-1)/r h' - λh = g.
struct HSolution {
  RadialProfile h;
  /// Present for n = 3: h = c1 ρ r^{-1} sin(√λ r - ζ) + h̄.
  std::optional<helmholtz::PAlphaDecomposition> decomposition;
  /// Far-field trigonometric coefficients of r² g (n = 3 only) and the
  /// relative residual of their fit.
  double k1 = 0.0, k2 = 0.0, k3 = 0.0;
  double split_residual = 0.0;
};

struct SplitOptions {
  /// Maximum relative RMS residual of the far-field fit.
  double tolerance = 5e-2;
  double holder_alpha = 0.5;
};

/// n >= 4: variation of parameters with forcing -g. n = 3: split -g into
/// ρ r^{-2}[k1 sin²θ + k2 cos²θ + k3 sinθ cosθ] + η̄ by a least-squares fit of
/// r² g over r ∈ [r_max/2, 3r_max/4] and apply the resonant solver. The fit
/// also carries r^{-1} multiples of the frequencies 0, √λ, 2√λ, 3√λ so that
/// the r^{-3} part of g does not leak into the coefficients.
/// Throws DecompositionError if the fit residual exceeds the tolerance.
HSolution solve_h(const RadialProfile& g, int n, double lambda, const SplitOptions& options = {});

struct PicardConfig {
  double tolerance = 1e-12;
  int max_outer = 30;
  int max_inner = 50;
  double damping = 1.0;
  double epsilon_max = 0.05;
  double holder_alpha = 0.5;
  SplitOptions split;
};

struct IterationRecord {
  int outer = 0;
  int inner_iterations = 0;
  /// ‖Δh‖ in the sharp norm (n = 3) or the hat norm with β = (n-1)/2.
  double dh_norm = 0.0;
  /// ‖ΔΦ‖ in the weighted Hölder norm with β = (n-1)/2.
  double dphi_norm = 0.0;
  /// Sup-norm increments used for the stopping test.
  double dh_sup = 0.0;
  double dphi_sup = 0.0;
  /// dh_norm over the previous dh_norm; 0 for the first record.
  double contraction = 0.0;
  double orthogonality_defect = 0.0;
  double damping = 1.0;
};

struct IterationReport {
  std::vector<IterationRecord> records;
  int iterations = 0;
  bool converged = false;
  double pde_residual = 0.0;
  double baseline_residual = 0.0;
  /// Δh₂/Δh₁ in the reported norm; 0 if fewer than two increments exist.
  double contraction_estimate = 0.0;
  std::string failure;
};

struct CorrectorPair {
  HSolution h;
  Field2D phi;
  double orthogonality_defect = 0.0;
};

/// Raised when the fixed point diverges or runs out of iterations; carries
/// the report accumulated so far.
class PicardError : public ConvergenceError {
 public:
  PicardError(const std::string& what, IterationReport report)
      : ConvergenceError(what), report_(std::move(report)) {}
  const IterationReport& report() const noexcept { return report_; }

 private:
  IterationReport report_;
};

/// Nested fixed point: for the current h, iterate Φ ↦ L^{-1}[N(εJ + h, Φ)]_⊥
/// to tolerance, then update h from the channel g = ∫ Z N dx. Stops when both
/// sup-norm increments fall below the tolerance. Three consecutive increment
/// growths switch the damping to 1/2; a second occurrence raises PicardError.
std::pair<CorrectorPair, IterationReport> picard_iterate(const ReductionInput& input, const PicardConfig& config = {});

/// J_{n,0}(√λ1 r) on the r-grid.
RadialProfile leading_profile(const ReductionInput& input);

/// u = w + Z (εJ + h) + Φ.
Field2D assemble_solution(const ReductionInput& input, const CorrectorPair& pair);

/// max over nodes off the Dirichlet row and column of
/// |-Δ_s u - Δ_r u + u - |u|^{p-1} u|.
double pde_residual(const Field2D& u, const ProblemParams& params);

/// ‖u - w - εZJ‖_∞ / ε (0 at ε = 0).
double asymptotic_ratio(const ReductionInput& input, const Field2D& u);

struct AsymptoticRow {
  double epsilon = 0.0;
  double ratio = 0.0;
};

/// Rows sorted by decreasing |ε|. Throws AsymptoticsViolation (whose history
/// holds the ratios) unless the ratios strictly decrease.
std::vector<AsymptoticRow> asymptotic_check(std::vector<AsymptoticRow> rows);

}  // namespace dancer::reduction
