#include "dancer/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dancer/errors.hpp"

namespace dancer::spectrum {

namespace {

// Number of eigenvalues of s strictly below x (Sturm sequence via LDLᵀ).
int sturm_count(const SymTridiagonal& s, double x) {
  const double tiny = std::numeric_limits<double>::min();
  int count = 0;
  double d = 1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    d = s.diag[k] - x - (k > 0 ? s.off[k - 1] * s.off[k - 1] / d : 0.0);
    if (d == 0.0) d = tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

// Smallest x with sturm_count(x) > index, to the resolution of double.
double bisect_eigenvalue(const SymTridiagonal& s, int index, double lo, double hi) {
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (sturm_count(s, mid) > index ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double norm2(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

double zero_tolerance(const RadialGrid& grid) { return std::max(1e-6, 10.0 * grid.step() * grid.step()); }

std::vector<double> LinearizedOperator::apply(std::span<const double> eta) const {
  const auto& grid = potential.grid();
  if (eta.size() != grid.size()) throw InvalidArgument("profile does not match operator grid");
  std::vector<double> out(unknowns());
  // Undo the symmetrization: A = D^{-1/2} S D^{1/2}.
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::size_t i = first + k;
    double v = matrix.diag[k] * eta[i];
    if (k > 0) v += matrix.off[k - 1] * std::sqrt(weights[k - 1] / weights[k]) * eta[i - 1];
    if (k + 1 < out.size()) v += matrix.off[k] * std::sqrt(weights[k + 1] / weights[k]) * eta[i + 1];
    else v += boundary_coupling * eta[i + 1];
    out[k] = v;
  }
  return out;
}

LinearizedOperator assemble_linearized(const RadialProfile& w, const ProblemParams& params, int sector) {
  if (params.m < 1) throw InvalidArgument("m must be >= 1");
  if (!(params.p > 1.0)) throw InvalidArgument("p must be > 1");
  if (sector < 0) throw InvalidArgument("sector must be >= 0");
  const auto& grid = w.grid();
  const auto lap = radial_laplacian(grid, params.m, sector);
  const auto all_weights = radial_weights(grid, params.m);

  std::vector<double> pot(grid.size());
  for (std::size_t i = 0; i < pot.size(); ++i)
    pot[i] = 1.0 - params.p * std::pow(std::abs(w[i]), params.p - 1.0);

  LinearizedOperator op{RadialProfile(grid, std::move(pot)), params.m, sector, lap.first, {}, {}, 0.0};
  const std::size_t n = lap.matrix.size();
  op.weights.assign(all_weights.begin() + static_cast<std::ptrdiff_t>(lap.first),
                    all_weights.begin() + static_cast<std::ptrdiff_t>(lap.first + n));
  op.boundary_coupling = lap.matrix.upper[n - 1];
  op.matrix.diag.resize(n);
  op.matrix.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t k = 0; k < n; ++k) {
    op.matrix.diag[k] = lap.matrix.diag[k] + op.potential[lap.first + k];
    // W_k A_{k,k+1} = W_{k+1} A_{k+1,k}, so the geometric mean is the exact symmetric entry.
    if (k + 1 < n) op.matrix.off[k] = -std::sqrt(lap.matrix.upper[k] * lap.matrix.lower[k + 1]);
  }
  return op;
}

SpectrumResult eigenpairs(const LinearizedOperator& op, int count) {
  const SymTridiagonal& s = op.matrix;
  const std::size_t n = s.size();
  if (count < 1) throw InvalidArgument("eigenpair count must be >= 1");
  if (static_cast<std::size_t>(count) > n) throw InvalidArgument("more eigenpairs requested than unknowns");

  double lo = INFINITY, hi = -INFINITY, scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double radius = (k > 0 ? std::abs(s.off[k - 1]) : 0.0) + (k + 1 < n ? std::abs(s.off[k]) : 0.0);
    lo = std::min(lo, s.diag[k] - radius);
    hi = std::max(hi, s.diag[k] + radius);
    scale = std::max(scale, std::abs(s.diag[k]) + radius);
  }

  const auto& grid = op.potential.grid();
  const double area = sphere_area(op.m);
  SpectrumResult result;
  result.zero_tolerance = zero_tolerance(grid);
  result.k = sturm_count(s, -result.zero_tolerance);
  result.l = sturm_count(s, std::nextafter(result.zero_tolerance, INFINITY));

  std::vector<std::vector<double>> vectors;
  const double target = 1e3 * std::numeric_limits<double>::epsilon() * scale;
  for (int j = 0; j < count; ++j) {
    const double mu = bisect_eigenvalue(s, j, lo, hi);

    Tridiagonal shifted;
    shifted.lower.assign(n, 0.0);
    shifted.upper.assign(n, 0.0);
    shifted.diag.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      shifted.diag[k] = s.diag[k] - mu;
      if (k + 1 < n) {
        shifted.upper[k] = s.off[k];
        shifted.lower[k + 1] = s.off[k];
      }
    }
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = 1.0 + 0.25 * std::sin(0.7 * static_cast<double>(k + j));
    std::vector<double> history;
    bool converged = false;
    for (int iter = 0; iter < 10 && !converged; ++iter) {
      y = solve_tridiagonal_pivoted(shifted, y);
      for (const auto& q : vectors) {
        const double c = dot(q, y);
        for (std::size_t k = 0; k < n; ++k) y[k] -= c * q[k];
      }
      const double norm = norm2(y);
      if (!(norm > 0.0) || !std::isfinite(norm))
        throw NumericalError("inverse iteration collapsed for eigenvalue " + std::to_string(j), history);
      for (double& v : y) v /= norm;
      auto sy = s.apply(y);
      for (std::size_t k = 0; k < n; ++k) sy[k] -= mu * y[k];
      history.push_back(norm2(sy));
      converged = history.back() <= target;
    }
    if (!converged)
      throw NumericalError("inverse iteration did not converge for eigenvalue " + std::to_string(j), history);
    vectors.push_back(y);

    std::vector<double> z(grid.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) z[op.first + k] = y[k] / std::sqrt(area * op.weights[k]);
    std::size_t probe = 1;
    const double zmax = *std::max_element(z.begin(), z.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    while (probe + 1 < z.size() && std::abs(z[probe]) <= 1e-8 * std::abs(zmax)) ++probe;
    if (z[probe] < 0.0) {
      for (double& v : z) v = -v;
      for (double& v : vectors.back()) v = -v;
    }
    auto lz = op.apply(z);
    double res = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = lz[k] - mu * z[op.first + k];
      res += op.weights[k] * d * d;
    }
    result.pairs.push_back({mu, RadialProfile(grid, std::move(z)), std::sqrt(area * res)});
  }
  return result;
}

double inner_product(const RadialProfile& f, const RadialProfile& g, int m) {
  if (!(f.grid() == g.grid())) throw InvalidArgument("profiles live on different grids");
  std::vector<double> prod(f.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f[i] * g[i];
  return integrate_radial(prod, f.grid(), m);
}

double verify_translation_mode(const radial::BoundState& state) {
  const auto& w = state.profile;
  const auto& grid = w.grid();
  const std::size_t n = grid.size();
  const double h = grid.step();
  // Fourth-order central differences, w extended evenly through r = 0.
  auto at = [&](std::ptrdiff_t i) { return w[static_cast<std::size_t>(std::abs(i))]; };
  std::vector<double> dw(n, 0.0);
  for (std::size_t i = 1; i + 2 < n; ++i) {
    const auto j = static_cast<std::ptrdiff_t>(i);
    dw[i] = (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * h);
  }
  dw[n - 2] = (w[n - 1] - w[n - 3]) / (2.0 * h);
  dw[n - 1] = (w[n - 1] - w[n - 2]) / h;

  const auto op = assemble_linearized(state, 1);
  const auto ldw = op.apply(dw);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < ldw.size(); ++k) {
    num += op.weights[k] * ldw[k] * ldw[k];
    den += op.weights[k] * dw[op.first + k] * dw[op.first + k];
  }
  if (!(den > 0.0)) throw IllPosedError("profile has zero derivative; translation mode undefined");
  return std::sqrt(num / den);
}

}  // namespace dancer::spectrum
