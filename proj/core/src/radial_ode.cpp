#include "dancer/radial_ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dancer/errors.hpp"
#include "dancer/radial_operator.hpp"

namespace dancer::radial {

namespace {

double power_term(double w, double p) { return std::pow(std::abs(w), p - 1.0) * w; }

struct State {
  double w;
  double v;
};

State rhs(const ProblemParams& params, double r, State s) {
  if (r == 0.0) return {0.0, (s.w - power_term(s.w, params.p)) / params.m};
  return {s.v, s.w - power_term(s.w, params.p) - (params.m - 1) / r * s.v};
}

// Relative disagreement between the bracket trajectories at which the
// shooting solution is no longer trusted.
constexpr double kSpliceTolerance = 1e-8;

// Newton solve of the discrete equation on (first, N) with w[first] frozen and
// w[N] = 0. Only used once w is small, so the iteration is nearly linear.
void solve_decaying_tail(std::vector<double>& w, const RadialGrid& grid, const ProblemParams& params,
                         std::size_t first) {
  const std::size_t last = grid.size() - 1;
  if (first + 1 >= last) {
    w[last] = 0.0;
    return;
  }
  const auto lap = radial_laplacian(grid, params.m, 0);
  const std::size_t n = last - first - 1;  // unknowns first+1 .. last-1
  const double w0 = w[first];
  for (std::size_t i = first + 1; i <= last; ++i)
    w[i] = w0 * std::exp(-(grid.node(i) - grid.node(first)));
  w[last] = 0.0;

  for (int iter = 0; iter < 30; ++iter) {
    Tridiagonal jac;
    jac.lower.assign(n, 0.0);
    jac.diag.assign(n, 0.0);
    jac.upper.assign(n, 0.0);
    std::vector<double> residual(n);
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = first + 1 + k;
      const double lo = lap.matrix.lower[i];
      const double up = lap.matrix.upper[i];
      const double di = lap.matrix.diag[i];
      const double g = power_term(w[i], params.p);
      residual[k] = -(lo * w[i - 1] + di * w[i] + up * w[i + 1] + w[i] - g);
      jac.diag[k] = di + 1.0 - params.p * std::pow(std::abs(w[i]), params.p - 1.0);
      if (k > 0) jac.lower[k] = lo;
      if (k + 1 < n) jac.upper[k] = up;
      scale = std::max(scale, std::abs(w[i]));
    }
    const auto delta = solve_tridiagonal_pivoted(jac, residual);
    double step = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      w[first + 1 + k] += delta[k];
      step = std::max(step, std::abs(delta[k]));
    }
    if (step <= 1e-15 * std::max(scale, std::abs(w0))) return;
  }
}

}  // namespace

RadialGrid default_grid() { return RadialGrid(20.0, 1.0 / 128.0); }

int count_sign_changes(std::span<const double> values) {
  int count = 0;
  double prev = 0.0;
  for (double v : values) {
    if (v == 0.0) continue;
    if (prev != 0.0 && (v > 0.0) != (prev > 0.0)) ++count;
    prev = v;
  }
  return count;
}

ShotResult shoot(const ProblemParams& params, double a, const RadialGrid& grid) {
  if (params.m < 1) throw InvalidArgument("m must be >= 1");
  if (!(params.p > 1.0)) throw InvalidArgument("p must be > 1");
  if (!std::isfinite(a)) throw InvalidArgument("shooting parameter must be finite");

  const std::size_t n = grid.size();
  const double h = grid.step();
  std::vector<double> w(n, 0.0), dw(n, 0.0);
  ShotResult out{RadialProfile(grid), {}, false, 0, 0, std::nullopt};
  State s{a, 0.0};
  w[0] = a;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double r = grid.node(i);
    const State k1 = rhs(params, r, s);
    const State k2 = rhs(params, r + 0.5 * h, {s.w + 0.5 * h * k1.w, s.v + 0.5 * h * k1.v});
    const State k3 = rhs(params, r + 0.5 * h, {s.w + 0.5 * h * k2.w, s.v + 0.5 * h * k2.v});
    const State k4 = rhs(params, r + h, {s.w + h * k3.w, s.v + h * k3.v});
    s.w += h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
    s.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    if (!std::isfinite(s.w) || !std::isfinite(s.v) || std::abs(s.w) > kBlowUpCap) {
      const double capped = (std::isfinite(s.w) && s.w < 0.0) ? -kBlowUpCap : kBlowUpCap;
      out.blew_up = true;
      out.blow_up_index = i + 1;
      for (std::size_t j = i + 1; j < n; ++j) {
        w[j] = capped;
        dw[j] = 0.0;
      }
      break;
    }
    w[i + 1] = s.w;
    dw[i + 1] = s.v;
    if (!out.first_zero && w[i] != 0.0 && (w[i] > 0.0) != (w[i + 1] > 0.0) && w[i + 1] != 0.0)
      out.first_zero = r + h * w[i] / (w[i] - w[i + 1]);
  }
  const std::size_t valid = out.blew_up ? out.blow_up_index : n;
  out.zero_count = count_sign_changes(std::span<const double>(w).first(valid));
  out.profile = RadialProfile(grid, std::move(w));
  out.derivative = std::move(dw);
  return out;
}

double ode_residual(const RadialProfile& w, const ProblemParams& params) {
  const auto v = w.values();
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double res = minus_laplacian_at(v, w.grid(), params.m, i) + v[i] - power_term(v[i], params.p);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

bool decays_at_boundary(const RadialProfile& w) {
  const auto v = w.values();
  const std::size_t n = v.size();
  if (!(std::abs(v[n - 1]) < 1e-8 * std::abs(v[0]))) return false;
  const std::size_t start = n - std::max<std::size_t>(n / 10, 2);
  for (std::size_t i = start; i + 1 < n; ++i) {
    const double dv = v[i + 1] - v[i - 1];
    if (!(v[i] * dv < 0.0)) return false;
  }
  return true;
}

BoundState find_bound_state(const ProblemParams& params, int node_count, const RadialGrid& grid,
                            const BoundStateOptions& options) {
  if (params.m < 1) throw InvalidArgument("m must be >= 1");
  if (!(params.p > 1.0)) throw InvalidArgument("p must be > 1");
  if (node_count < 0) throw InvalidArgument("node_count must be >= 0");
  if (!params.subcritical())
    throw InvalidArgument("p must be subcritical, p < (m+2)/(m-2), for the bound-state search");
  if (!(options.tol > 0.0)) throw InvalidArgument("bisection tolerance must be positive");

  // Too many zeros means the trajectory overshoots the k-node bound state.
  auto overshoots = [&](double a) { return shoot(params, a, grid).zero_count > node_count; };

  double lo = options.ladder_start;
  if (overshoots(lo))
    throw NoBracketError("ladder start a = " + std::to_string(lo) + " already overshoots");
  double hi = lo;
  bool found = false;
  for (int step = 0; step < options.ladder_steps; ++step) {
    hi = lo * options.ladder_factor;
    if (overshoots(hi)) {
      found = true;
      break;
    }
    lo = hi;
  }
  if (!found)
    throw NoBracketError("no overshooting parameter found up to a = " + std::to_string(hi));

  // Bisect to the resolution of double precision; the bracket must then be
  // narrower than the requested tolerance.
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (overshoots(mid) ? hi : lo) = mid;
  }
  if (hi - lo > options.tol)
    throw ConvergenceError("bisection stagnated at width " + std::to_string(hi - lo));

  const ShotResult below = shoot(params, lo, grid);
  const ShotResult above = shoot(params, hi, grid);
  const ShotResult centre = shoot(params, 0.5 * (lo + hi), grid);
  std::vector<double> w(centre.profile.values().begin(), centre.profile.values().end());

  std::size_t splice = grid.size() - 1;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double spread = std::abs(above.profile[i] - below.profile[i]);
    const double scale = std::abs(w[i]) + std::abs(centre.derivative[i]);
    if (!(spread <= kSpliceTolerance * scale) || (centre.blew_up && i >= centre.blow_up_index)) {
      splice = i - 1;
      break;
    }
  }
  // Past the splice point the trajectory must be small enough for the tail
  // Newton solve to stay diagonally dominant, and monotonically decaying;
  // otherwise there is no decaying state.
  const double ws = w[splice];
  const bool linear_regime = params.p * std::pow(std::abs(ws), params.p - 1.0) < 0.5;
  const bool monotone = ws * centre.derivative[splice] < 0.0;
  if (splice + 1 < grid.size() && (!linear_regime || !monotone))
    throw ConvergenceError("shooting trajectory for " + std::to_string(node_count) +
                           " nodes does not decay before the bracket separates (r = " +
                           std::to_string(grid.node(splice)) + ")");
  solve_decaying_tail(w, grid, params, splice);

  BoundState state{RadialProfile(grid, std::move(w)), 0.5 * (lo + hi), 0, 0.0, params, hi - lo,
                   grid.node(splice)};
  state.node_count = count_sign_changes(state.profile.values());
  state.ode_residual = ode_residual(state.profile, params);
  if (state.node_count != node_count)
    throw ConvergenceError("converged profile has " + std::to_string(state.node_count) +
                           " sign changes, expected " + std::to_string(node_count));
  if (!decays_at_boundary(state.profile))
    throw ConvergenceError("converged profile does not decay at r_max");
  if (state.ode_residual > options.residual_tol)
    throw ConvergenceError("ODE residual " + std::to_string(state.ode_residual) +
                           " exceeds tolerance");
  return state;
}

double decay_rate(const RadialProfile& w, double lo, double hi) {
  const auto& grid = w.grid();
  if (!(lo < hi) || lo < 0.0 || hi > grid.r_max() + 1e-12)
    throw IllPosedError("decay window must lie inside [0, r_max]");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  double sign = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.node(i);
    if (r < lo - 1e-12 || r > hi + 1e-12) continue;
    const double v = w[i];
    if (v == 0.0 || (sign != 0.0 && (v > 0.0) != (sign > 0.0)))
      throw IllPosedError("profile vanishes or changes sign inside the decay window");
    sign = v;
    const double y = std::log(std::abs(v));
    sx += r;
    sy += y;
    sxx += r * r;
    sxy += r * y;
    ++count;
  }
  if (count < 2) throw IllPosedError("decay window contains fewer than two nodes");
  const double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

}  // namespace dancer::radial
