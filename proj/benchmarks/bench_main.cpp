#include <benchmark/benchmark.h>

#include <cmath>

#include "dancer/helmholtz.hpp"
#include "dancer/radial_ode.hpp"
#include "dancer/reduction.hpp"
#include "dancer/spectrum.hpp"

using namespace dancer;

namespace {

const radial::BoundState& soliton() {
  static const auto state = radial::find_bound_state(ProblemParams{1, 4, 3.0}, 0, radial::default_grid());
  return state;
}

/// Ground state by shooting; argument is 1/step.
void BM_FindBoundState(benchmark::State& st) {
  const RadialGrid grid(20.0, 1.0 / static_cast<double>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(radial::find_bound_state(ProblemParams{1, 4, 3.0}, 0, grid));
}
BENCHMARK(BM_FindBoundState)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Eigenpairs(benchmark::State& st) {
  const auto op = spectrum::assemble_linearized(soliton(), 0);
  for (auto _ : st) benchmark::DoNotOptimize(spectrum::eigenpairs(op, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_Eigenpairs)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_BesselJ(benchmark::State& st) {
  const double nu = static_cast<double>(st.range(0)) / 2.0;
  double x = 0.1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(helmholtz::bessel_j(nu, x));
    x = x > 80.0 ? 0.1 : x + 0.37;
  }
}
BENCHMARK(BM_BesselJ)->Arg(0)->Arg(1)->Arg(4);

void BM_SolveInhomogeneous(benchmark::State& st) {
  const RadialGrid grid(200.0, 1.0 / static_cast<double>(st.range(0)));
  const auto eta = RadialProfile::sample(grid, [](double r) { return std::pow(1.0 + r, -4.0); });
  for (auto _ : st) benchmark::DoNotOptimize(helmholtz::solve_inhomogeneous(4, 1.0, eta));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_SolveInhomogeneous)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_PhiSolve(benchmark::State& st) {
  const auto input = reduction::make_input(soliton(), 4, 0.01);
  const reduction::PhiSolver solver(input.op, input.z(), input.grids.r_grid, 4);
  const auto s_part = RadialProfile::sample(input.grids.s_grid, [](double s) { return std::exp(-s * s); });
  const auto r_part = RadialProfile::sample(input.grids.r_grid, [](double r) { return std::cos(r) / (1.0 + r * r); });
  const auto xi = reduction::project(Field2D::outer(s_part, r_part), input.z(), 1).xi_perp;
  for (auto _ : st) benchmark::DoNotOptimize(solver.solve(xi));
}
BENCHMARK(BM_PhiSolve)->Unit(benchmark::kMillisecond);

/// Full fixed point for (m, n, p) = (1, 4, 3) on the default reduction grids.
void BM_PicardRun(benchmark::State& st) {
  const auto input = reduction::make_input(soliton(), 4, 0.01);
  for (auto _ : st) benchmark::DoNotOptimize(reduction::picard_iterate(input));
}
BENCHMARK(BM_PicardRun)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
