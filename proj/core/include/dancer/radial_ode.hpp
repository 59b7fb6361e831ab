#pragma once

#include <cstddef>
#include <optional>

#include "dancer/grid.hpp"
#include "dancer/params.hpp"

namespace dancer::radial {

/// Trajectories are cut off once |w| exceeds this value.
inline constexpr double kBlowUpCap = 1e6;

/// Grid used for x-profiles unless a caller asks otherwise: [0, 20], step 2^-7.
RadialGrid default_grid();

struct ShotResult {
  RadialProfile profile;
  std::vector<double> derivative;
  bool blew_up = false;
  /// First node at which the cap was hit; the profile holds ±kBlowUpCap from there on.
  std::size_t blow_up_index = 0;
  int zero_count = 0;
  std::optional<double> first_zero;
};

/// Integrate w'' + (m-1)/r w' = w - |w|^{p-1} w, w(0) = a, w'(0) = 0 with
/// classical RK4 on the grid. The origin uses w''(0) = (a - |a|^{p-1} a)/m.
ShotResult shoot(const ProblemParams& params, double a, const RadialGrid& grid);

struct BoundState {
  RadialProfile profile;
  double center_value = 0.0;
  int node_count = 0;
  double ode_residual = 0.0;
  ProblemParams params;
  /// Width of the final shooting bracket.
  double bracket_width = 0.0;
  /// Radius beyond which the profile comes from the linearized decaying
  /// boundary-value solve instead of the shooting trajectory.
  double splice_radius = 0.0;
};

struct BoundStateOptions {
  /// Required width of the bisection bracket on a.
  double tol = 1e-12;
  /// Maximum admissible discrete ODE residual of the returned state.
  double residual_tol = 0.1;
  double ladder_start = 1.0;
  double ladder_factor = 1.5;
  int ladder_steps = 40;
};

/// Bound state with exactly `node_count` sign changes, found by scanning the
/// shooting parameter over a geometric ladder and bisecting on the zero count.
/// Throws NoBracketError, ConvergenceError or InvalidArgument.
BoundState find_bound_state(const ProblemParams& params, int node_count, const RadialGrid& grid,
                            const BoundStateOptions& options = {});

/// max over nodes 0..N-2 of |(-Δ_m w) + w - |w|^{p-1} w| with the conservative
/// second-order stencil used throughout the library.
double ode_residual(const RadialProfile& w, const ProblemParams& params);

int count_sign_changes(std::span<const double> values);

/// |w(r_max)| < 1e-8 |w(0)| and w w' < 0 on the last tenth of the grid.
bool decays_at_boundary(const RadialProfile& w);

/// Least-squares slope of log|w| over nodes with r in [lo, hi].
/// Throws IllPosedError if w vanishes or changes sign in the window.
double decay_rate(const RadialProfile& w, double lo, double hi);
inline double decay_rate(const BoundState& state, double lo, double hi) {
  return decay_rate(state.profile, lo, hi);
}

}  // namespace dancer::radial
