#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "dancer/errors.hpp"
#include "dancer/helmholtz.hpp"
#include "support/oracles.hpp"

namespace dancer::helmholtz {
namespace {

using namespace dancer::oracles;

constexpr double kPi = std::numbers::pi;

TEST(Bessel, ValuesAtTheOrigin) {
  EXPECT_EQ(bessel_j(0.0, 0.0), 1.0);
  EXPECT_EQ(bessel_j(1.0, 0.0), 0.0);
  EXPECT_EQ(bessel_j(2.5, 0.0), 0.0);
}

TEST(Bessel, FirstZeroOfJ0MatchesSeriesOracle) {
  const double mine = bisect_root([](double x) { return bessel_j(0.0, x); }, 2.0, 3.0);
  const double oracle = bisect_root(series_j0, 2.0, 3.0);
  EXPECT_NEAR(mine, oracle, 1e-10);
  EXPECT_NEAR(mine, boost::math::cyl_bessel_j_zero(0.0, 1), 1e-10);
  EXPECT_NEAR(bessel_j(0.0, mine), 0.0, 1e-15);
}

TEST(Bessel, FirstKindMatchesBoostAcrossTheSwitchover) {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.7, 5.0}) {
    for (double x = 0.0; x <= 80.0; x += 0.37) {
      const double ref = boost::math::cyl_bessel_j(nu, x);
      EXPECT_NEAR(bessel_j(nu, x), ref, 1e-12 * std::max(1.0, std::abs(ref))) << "nu=" << nu << " x=" << x;
    }
    const double at = std::max(20.0, nu + 8.0);
    for (double x : {at - 1e-9, at + 1e-9}) {
      const double ref = boost::math::cyl_bessel_j(nu, x);
      EXPECT_LE(std::abs(bessel_j(nu, x) - ref), 1e-10 * std::abs(ref)) << "nu=" << nu;
    }
  }
}

TEST(Bessel, SecondKindMatchesBoost) {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 2.7}) {
    for (double x = 0.05; x <= 80.0; x += 0.41) {
      const double ref = boost::math::cyl_neumann(nu, x);
      EXPECT_NEAR(bessel_y(nu, x), ref, 1e-11 * std::max(1.0, std::abs(ref))) << "nu=" << nu << " x=" << x;
    }
  }
  EXPECT_THROW(bessel_y(1.0, 0.0), DomainError);
}

TEST(RadialSolution, ThreeDimensionalRegularSolutionIsSinc) {
  for (double r = 0.1; r < 60.0; r += 0.7)
    EXPECT_NEAR(radial_solution(Kind::regular, 3, 0.0, 1.0, r), std::sqrt(2.0 / kPi) * std::sin(r) / r, 1e-13);
  EXPECT_NEAR(radial_solution(Kind::regular, 3, 0.0, 1.0, 0.0), std::sqrt(2.0 / kPi), 1e-15);
}

TEST(RadialSolution, RegularValueAtOriginIsFinite) {
  for (int n : {2, 3, 4, 5, 6}) {
    const double nu = 0.5 * n - 1.0;
    const double expected = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
    EXPECT_NEAR(radial_solution(Kind::regular, n, 0.0, 2.0, 0.0), expected, 1e-15);
    EXPECT_NEAR(radial_solution(Kind::regular, n, 0.0, 2.0, 1e-8), expected, 1e-12);
  }
  EXPECT_THROW(radial_solution(Kind::singular, 4, 0.0, 1.0, 0.0), DomainError);
}

TEST(RadialSolution, SingularKindBehavesLikeFundamentalSolution) {
  for (int n : {3, 4, 5, 6}) {
    const double small = 1e-3;
    const double ratio = radial_solution(Kind::singular, n, 0.0, 1.0, small) / std::pow(small, 2 - n);
    const double ratio2 = radial_solution(Kind::singular, n, 0.0, 1.0, small / 2) / std::pow(small / 2, 2 - n);
    EXPECT_NEAR(ratio / ratio2, 1.0, 1e-5) << "n=" << n;
  }
}

TEST(RadialSolution, WronskianIsConstant) {
  for (int n : {3, 4, 5, 6}) {
    for (double lambda : {1.0, 3.0}) {
      const double exact = 2.0 / kPi * std::pow(lambda, 1.0 - 0.5 * n);
      double lo = INFINITY, hi = -INFINITY;
      for (double r = 1.0; r <= 100.0; r += 0.25) {
        const double w = wronskian(n, lambda, r);
        lo = std::min(lo, w);
        hi = std::max(hi, w);
      }
      EXPECT_LE((hi - lo) / std::abs(exact), 1e-8) << "n=" << n;
      EXPECT_NEAR(hi, exact, 1e-10 * std::abs(exact));
    }
  }
}

TEST(RadialSolution, SatisfiesTheDiscreteOdeToStencilAccuracy) {
  for (int n : {3, 4, 6}) {
    std::vector<double> residuals;
    for (double h : {1.0 / 32.0, 1.0 / 64.0}) {
      const RadialGrid grid(30.0, h);
      const auto j = RadialProfile::sample(grid, [&](double r) { return radial_solution(Kind::regular, n, 0.0, 2.0, r); });
      residuals.push_back(helmholtz_residual(j, n, 2.0, RadialProfile(grid)));
    }
    EXPECT_LT(residuals[0], 1e-3) << "n=" << n;
    EXPECT_GE(residuals[0] / residuals[1], 3.5) << "n=" << n;
  }
}

TEST(RadialSolution, DerivativeMatchesFiniteDifference) {
  for (Kind kind : {Kind::regular, Kind::singular}) {
    for (double s : {0.0, 1.5}) {
      for (double r : {0.7, 3.0, 25.0}) {
        const double d = 1e-5;
        const double fd = (radial_solution(kind, 4, s, 2.0, r + d) - radial_solution(kind, 4, s, 2.0, r - d)) / (2 * d);
        EXPECT_NEAR(radial_derivative(kind, 4, s, 2.0, r), fd, 1e-8);
      }
    }
  }
}

TEST(RadialSolution, DecayEnvelopeIsBoundedAndStable) {
  // Regression constants; each agrees with the Boost Bessel oracle below to 1e-10.
  const std::array<double, 4> pinned = {1.3634784691578612, 1.5137645288681909, 1.6314733943459439,
                                        1.7285254315463079};
  for (int n : {3, 4, 5, 6}) {
    auto mine = [&](double r) { return radial_solution(Kind::regular, n, 0.0, 1.0, r); };
    auto oracle = [&](double r) { return regular_radial(n, r); };
    const double coarse = envelope_sup(n, 0.01, mine);
    const double fine = envelope_sup(n, 0.005, mine);
    EXPECT_TRUE(std::isfinite(coarse));
    EXPECT_LE(std::abs(coarse - fine) / fine, 1e-2);
    EXPECT_NEAR(fine, envelope_sup(n, 0.005, oracle), 1e-10);
    EXPECT_NEAR(fine, pinned[n - 3], 1e-12) << "n=" << n;
  }
}

TEST(Superpose, SingleSourceAtOriginIsRadialSolution) {
  SourceSet set{4, 2.0, {{0.0, 0.0, 0.0, 0.0}}};
  const std::vector<double> y = {0.3, -1.0, 2.0, 0.5};
  EXPECT_DOUBLE_EQ(superpose(set, y), radial_solution(Kind::regular, 4, 0.0, 2.0, std::sqrt(0.09 + 1 + 4 + 0.25)));
}

TEST(Superpose, MidpointOfTwoSourcesDoublesTheHalfSeparationValue) {
  SourceSet set{3, 1.0, {{-1.5, 0.0, 0.0}, {1.5, 0.0, 0.0}}};
  const std::vector<double> mid = {0.0, 0.0, 0.0};
  EXPECT_NEAR(superpose(set, mid), 2.0 * radial_solution(Kind::regular, 3, 0.0, 1.0, 1.5), 1e-15);
}

TEST(Superpose, SatisfiesHelmholtzOnACartesianStencil) {
  SourceSet set{3, 2.0, {{0.0, 0.0, 0.0}, {2.0, 1.0, -1.0}, {-3.0, 0.5, 0.0}}};
  const double d = 1e-2;
  double worst = 0.0;
  for (double x : {0.3, 1.1, -2.2}) {
    for (double z : {-0.4, 0.9}) {
      std::vector<double> y = {x, 0.25, z};
      const double center = superpose(set, y);
      double lap = -6.0 * center;
      for (int a = 0; a < 3; ++a) {
        auto yp = y, ym = y;
        yp[a] += d;
        ym[a] -= d;
        lap += superpose(set, yp) + superpose(set, ym);
      }
      worst = std::max(worst, std::abs(lap / (d * d) + 2.0 * center));
    }
  }
  // Seven-point truncation error d²/12 |∂⁴u| with |∂⁴u| <= λ² q / √(2π)-ish.
  EXPECT_LT(worst, 1e-4);
}

TEST(Superpose, RejectsInvalidSets) {
  EXPECT_THROW(superpose(SourceSet{3, 1.0, {}}, std::vector<double>{0, 0, 0}), InvalidArgument);
  EXPECT_THROW(superpose(SourceSet{3, 1.0, {{0.0, 0.0}}}, std::vector<double>{0, 0, 0}), InvalidArgument);
  EXPECT_THROW(superpose(SourceSet{3, -1.0, {{0.0, 0.0, 0.0}}}, std::vector<double>{0, 0, 0}), InvalidArgument);
}

TEST(Cutoff, ShapeAndMonotonicity) {
  EXPECT_EQ(cutoff_rho(0.5), 0.0);
  EXPECT_EQ(cutoff_rho(1.0), 0.0);
  EXPECT_EQ(cutoff_rho(2.0), 1.0);
  EXPECT_EQ(cutoff_rho(7.0), 1.0);
  EXPECT_DOUBLE_EQ(cutoff_rho(1.5), 0.5);
  for (double r = 1.0; r < 2.0; r += 0.01) EXPECT_LE(cutoff_rho(r), cutoff_rho(r + 0.01));
}

TEST(SolveInhomogeneous, ZeroForcingGivesZero) {
  const RadialProfile zero(RadialGrid(20.0, 1.0 / 16.0));
  const auto sol = solve_inhomogeneous(4, 1.0, zero);
  EXPECT_EQ(sol.h.max_abs(), 0.0);
  EXPECT_FALSE(sol.decay_warning);
}

TEST(SolveInhomogeneous, RecoversManufacturedSolution) {
  for (int n : {3, 4, 6}) {
    const Manufactured ms{n, 1.5};
    const RadialGrid grid(12.0, 1.0 / 64.0);
    const auto eta = RadialProfile::sample(grid, [&](double r) { return ms.forcing(r); });
    const auto sol = solve_inhomogeneous(n, ms.lambda, eta);
    const double j0 = radial_solution(Kind::regular, n, 0.0, ms.lambda, 0.0);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = grid.node(i);
      const double expected = ms.h(r) - ms.h(0.0) * radial_solution(Kind::regular, n, 0.0, ms.lambda, r) / j0;
      err = std::max(err, std::abs(sol.h[i] - expected));
    }
    EXPECT_LE(err, 1e-6) << "n=" << n;
  }
}

TEST(SolveInhomogeneous, IsLinear) {
  const RadialGrid grid(30.0, 1.0 / 16.0);
  const auto a = RadialProfile::sample(grid, [](double r) { return std::pow(1.0 + r, -4.0); });
  const auto b = RadialProfile::sample(grid, [](double r) { return std::exp(-r) * std::cos(3.0 * r); });
  const auto sum = RadialProfile::sample(grid, [&](double r) { return std::pow(1.0 + r, -4.0) + std::exp(-r) * std::cos(3.0 * r); });
  const auto ha = solve_inhomogeneous(4, 1.0, a).h;
  const auto hb = solve_inhomogeneous(4, 1.0, b).h;
  const auto hs = solve_inhomogeneous(4, 1.0, sum).h;
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(hs[i] - ha[i] - hb[i]));
  EXPECT_LE(err, 1e-12 * hs.max_abs());
}

TEST(SolveInhomogeneous, DecayContractWarning) {
  const RadialGrid grid(80.0, 1.0 / 8.0);
  const auto fast = RadialProfile::sample(grid, [](double r) { return std::pow(1.0 + r, -4.0); });
  const auto slow = RadialProfile::sample(grid, [](double r) { return std::pow(1.0 + r, -2.0); });
  const auto ok = solve_inhomogeneous(4, 1.0, fast);
  EXPECT_FALSE(ok.decay_warning);
  EXPECT_NEAR(ok.beta_estimate, 4.0, 0.3);
  const auto warned = solve_inhomogeneous(4, 1.0, slow);
  EXPECT_TRUE(warned.decay_warning);
  EXPECT_TRUE(std::isfinite(warned.h.max_abs()));
}

TEST(ExtractPhase, ThreeDimensionalPhaseIsHalfPi) {
  const auto fit = extract_phase(3, 1.0);
  EXPECT_NEAR(fit.zeta, kPi / 2.0, 1e-3);
  EXPECT_LE(fit.residual, 1e-2);
  EXPECT_NEAR(extract_phase(3, 4.0).zeta, fit.zeta, 1e-3);
  EXPECT_NEAR(extract_phase(3, 1.0, 100.0, 250.0).zeta, fit.zeta, 1e-3);
}

TEST(ExtractPhase, FourDimensionalPhaseMatchesBesselAsymptotics) {
  // J_1(t) ~ √(2/πt) cos(t - 3π/4).
  EXPECT_NEAR(extract_phase(4, 1.0).zeta, 3.0 * kPi / 4.0, 1e-2);
}

TEST(ResonantSolve, ZeroForcingGivesZeroDecomposition) {
  const RadialProfile zero(RadialGrid(100.0, 1.0 / 8.0));
  const auto d = resonant_solve_n3(1.0, 0.0, 0.0, 0.0, zero);
  EXPECT_EQ(d.c1, 0.0);
  EXPECT_EQ(d.remainder.max_abs(), 0.0);
}

TEST(ResonantSolve, AmplitudeMatchesQuadratureOracle) {
  for (double lambda : {1.0, 2.0}) {
    const RadialProfile zero(RadialGrid(100.0, 1.0 / 16.0));
    const auto d = resonant_solve_n3(lambda, 1.0, 0.0, 0.0, zero);
    EXPECT_NEAR(d.c1, c1_oracle(lambda), 1e-6) << "lambda=" << lambda;
  }
}

TEST(ResonantSolve, RemainderDecaysLikeInverseSquare) {
  const RadialGrid grid(120.0, 1.0 / 16.0);
  const RadialProfile zero(grid);
  const auto d = resonant_solve_n3(1.0, 1.0, 0.0, 0.0, zero);
  EXPECT_GE(envelope_decay_exponent(d.remainder, 20.0, 100.0, 2.0 * kPi), 1.8);
  EXPECT_TRUE(std::isfinite(d.K));
}

TEST(ResonantSolve, ReconstructionSolvesTheOdeToStencilAccuracy) {
  const double coarse = reconstruction_residual(1.0 / 32.0);
  const double fine = reconstruction_residual(1.0 / 64.0);
  // Pure second-order truncation: no plateau from the quadrature of the Green's integrals.
  EXPECT_GE(coarse / fine, 3.5);
  EXPECT_LE(fine, 1e-3);
}

TEST(ResonantSolve, RejectsSlowlyDecayingRemainder) {
  const RadialGrid grid(100.0, 1.0 / 8.0);
  const auto slow = RadialProfile::sample(grid, [](double r) { return std::pow(1.0 + r, -2.0); });
  EXPECT_THROW(resonant_solve_n3(1.0, 0.0, 0.0, 0.0, slow), ContractViolation);
}

}  // namespace
}  // namespace dancer::helmholtz
