#include <gtest/gtest.h>

#include <array>
#include <boost/numeric/odeint.hpp>
#include <chrono>
#include <cmath>

#include "dancer/errors.hpp"
#include "dancer/radial_ode.hpp"

namespace dancer::radial {
namespace {

namespace odeint = boost::numeric::odeint;
using OdeState = std::array<double, 2>;

// Independent shooting oracle: adaptive Dormand-Prince, bisection on the
// overshoot/undershoot dichotomy (zero crossing vs. turning point).
struct AdaptiveOracle {
  int m;
  double p;

  void operator()(const OdeState& s, OdeState& ds, double r) const {
    const double g = std::pow(std::abs(s[0]), p - 1.0) * s[0];
    ds[0] = s[1];
    ds[1] = s[0] - g - (m - 1) / r * s[1];
  }

  // +1 overshoot (more than `nodes` zero crossings), -1 undershoot (|w|
  // turns back up after `nodes` crossings), with the first crossing radius.
  std::pair<int, double> classify(double a, int nodes = 0, double r_end = 40.0) const {
    const double r0 = 1e-6;
    const double c = (a - std::pow(a, p)) / m;
    OdeState s{a + 0.5 * c * r0 * r0, c * r0};
    auto stepper = odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_dopri5<OdeState>());
    double r = r0, dr = 1e-5;
    int zeros = 0;
    double first_zero = 0.0;
    while (r < r_end) {
      const OdeState prev = s;
      const double r_prev = r;
      while (stepper.try_step(*this, s, r, dr) == odeint::fail) {
      }
      if ((s[0] > 0.0) != (prev[0] > 0.0)) {
        // secant on the last step is plenty for the 1e-4 comparisons below
        if (zeros == 0) first_zero = r_prev + (r - r_prev) * prev[0] / (prev[0] - s[0]);
        if (++zeros > nodes) return {+1, first_zero};
      } else if (zeros == nodes && s[0] * s[1] > 0.0 && prev[0] * prev[1] <= 0.0 && zeros > 0) {
        return {-1, first_zero};
      } else if (zeros == 0 && nodes == 0 && s[1] > 0.0) {
        return {-1, 0.0};
      }
    }
    return {-1, first_zero};
  }

  double center(double lo, double hi, int nodes = 0) const {
    for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (classify(mid, nodes).first > 0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }
};
ProblemParams params(int m, double p) { return ProblemParams{m, 4, p}; }

TEST(Shoot, ZeroInitialValueGivesZeroProfile) {
  const auto shot = shoot(params(1, 3.0), 0.0, default_grid());
  EXPECT_EQ(shot.profile.max_abs(), 0.0);
  EXPECT_FALSE(shot.blew_up);
}

TEST(Shoot, SolitonInitialValueTracksSech) {
  const auto shot = shoot(params(1, 3.0), std::sqrt(2.0), default_grid());
  double err = 0.0;
  for (std::size_t i = 0; i < shot.profile.size(); ++i) {
    const double r = shot.profile.grid().node(i);
    if (r > 5.0) break;
    err = std::max(err, std::abs(shot.profile[i] - std::sqrt(2.0) / std::cosh(r)));
  }
  EXPECT_LT(err, 1e-7);
}

TEST(Shoot, LargeInitialValueOvershoots) {
  const auto shot = shoot(params(1, 3.0), 2.0, default_grid());
  ASSERT_TRUE(shot.first_zero.has_value());
  const auto [kind, oracle_zero] = AdaptiveOracle{1, 3.0}.classify(2.0);
  ASSERT_EQ(kind, +1);
  EXPECT_NEAR(*shot.first_zero, oracle_zero, 1e-4);
}

TEST(Shoot, BlowUpIsCappedAndFlagged) {
  // The first RK4 stage already leaves the cap for such a large center value.
  const auto shot = shoot(params(1, 3.0), 1e5, default_grid());
  EXPECT_TRUE(shot.blew_up);
  for (double v : shot.profile.values()) EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(std::abs(shot.profile.values().back()), kBlowUpCap);
}

TEST(FindBoundState, OneDimensionalCubicGroundStateIsSqrtTwoSech) {
  const auto start = std::chrono::steady_clock::now();
  const auto state = find_bound_state(params(1, 3.0), 0, default_grid());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_NEAR(state.center_value, std::sqrt(2.0), 1e-6);
  EXPECT_EQ(state.node_count, 0);
  double err = 0.0;
  for (std::size_t i = 0; i < state.profile.size(); ++i) {
    const double r = state.profile.grid().node(i);
    err = std::max(err, std::abs(state.profile[i] - std::sqrt(2.0) / std::cosh(r)));
  }
  // 10x the shooting integrator tolerance of 1e-7 above.
  EXPECT_LT(err, 1e-6);
  EXPECT_LT(secs, 1.0);
}

TEST(FindBoundState, OneDimensionalGroundStateMatchesClosedFormForSmallExponents) {
  // w = ((p+1)/2)^{1/(p-1)} sech^{2/(p-1)}((p-1)r/2) solves -w'' + w = w^p on R;
  // compared on [0, 10], away from the truncation at r_max.
  for (double p : {1.2, 1.5, 2.0, 5.0}) {
    const auto state = find_bound_state(params(1, p), 0, default_grid());
    const double amp = std::pow(0.5 * (p + 1.0), 1.0 / (p - 1.0));
    double err = 0.0;
    for (std::size_t i = 0; i < state.profile.size(); ++i) {
      const double r = state.profile.grid().node(i);
      if (r > 10.0) break;
      err = std::max(err, std::abs(state.profile[i] - amp * std::pow(1.0 / std::cosh(0.5 * (p - 1.0) * r),
                                                                      2.0 / (p - 1.0))));
    }
    EXPECT_LT(err, 1e-6) << p;
  }
}

TEST(FindBoundState, ThreeDimensionalCubicGroundStateMatchesAdaptiveOracle) {
  const auto state = find_bound_state(params(3, 3.0), 0, default_grid());
  const double oracle = AdaptiveOracle{3, 3.0}.center(1.0, 10.0);
  EXPECT_NEAR(state.center_value, oracle, 1e-6);
  EXPECT_TRUE(decays_at_boundary(state.profile));
}

TEST(FindBoundState, ThreeDimensionalOneNodeState) {
  const auto ground = find_bound_state(params(3, 3.0), 0, default_grid());
  // The excited state is sharply peaked (width ~0.15), so the discrete residual
  // needs a finer grid than the default.
  const auto state = find_bound_state(params(3, 3.0), 1, RadialGrid(20.0, 1.0 / 2048.0));
  EXPECT_EQ(count_sign_changes(state.profile.values()), 1);
  EXPECT_TRUE(decays_at_boundary(state.profile));
  EXPECT_GT(state.center_value, ground.center_value);
  const double oracle = AdaptiveOracle{3, 3.0}.center(5.0, 30.0, 1);
  EXPECT_NEAR(state.center_value, oracle, 1e-4 * oracle);
  EXPECT_LT(state.ode_residual, 0.1);
}

TEST(FindBoundState, OneDimensionalOneNodeStateOnTruncatedDomain) {
  // In 1D the bisection threshold is a soliton/anti-soliton pair that decays
  // on [0, r_max]; it has one sign change and passes the decay test.
  const auto state = find_bound_state(params(1, 3.0), 1, default_grid());
  EXPECT_EQ(state.node_count, 1);
  EXPECT_TRUE(decays_at_boundary(state.profile));
  EXPECT_GT(state.center_value, std::sqrt(2.0));
  EXPECT_NEAR(state.center_value, std::sqrt(2.0), 1e-3);
}

TEST(FindBoundState, RejectsSupercriticalExponent) {
  EXPECT_THROW(find_bound_state(params(3, 5.0), 0, default_grid()), InvalidArgument);
  EXPECT_THROW(find_bound_state(params(1, 3.0), -1, default_grid()), InvalidArgument);
}

TEST(FindBoundState, ResidualScalesSecondOrderUnderRefinement) {
  BoundStateOptions loose;
  loose.residual_tol = 1.0;
  const auto coarse = find_bound_state(params(3, 3.0), 0, RadialGrid(20.0, 1.0 / 32.0), loose);
  const auto fine = find_bound_state(params(3, 3.0), 0, RadialGrid(20.0, 1.0 / 64.0));
  EXPECT_GE(coarse.ode_residual / fine.ode_residual, 3.0);
}

TEST(FindBoundState, FirstZeroMovesInwardAsShootingParameterGrows) {
  const auto prm = params(3, 3.0);
  const auto state = find_bound_state(prm, 0, default_grid());
  double previous = INFINITY;
  for (double bump : {0.01, 0.05, 0.2, 0.5, 1.0}) {
    const auto shot = shoot(prm, state.center_value + bump, default_grid());
    ASSERT_TRUE(shot.first_zero.has_value());
    EXPECT_LT(*shot.first_zero, previous);
    previous = *shot.first_zero;
  }
}

TEST(DecayRate, GroundStateDecaysLikeExpMinusR) {
  const auto state = find_bound_state(params(1, 3.0), 0, default_grid());
  EXPECT_NEAR(decay_rate(state, 5.0, 9.0), -1.0, 0.05);
  auto doubled = state.profile;
  for (double& v : doubled.values()) v *= 2.0;
  EXPECT_NEAR(decay_rate(doubled, 5.0, 9.0), decay_rate(state, 5.0, 9.0), 1e-12);
}

TEST(DecayRate, ZeroProfileIsIllPosed) {
  RadialProfile zero(default_grid());
  EXPECT_THROW(decay_rate(zero, 5.0, 9.0), IllPosedError);
}

}  // namespace
}  // namespace dancer::radial
