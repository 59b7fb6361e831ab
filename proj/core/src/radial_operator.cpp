#include "dancer/radial_operator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dancer/errors.hpp"
#include "dancer/params.hpp"

namespace dancer {

void ProblemParams::validate() const {
  if (m < 1) throw InvalidArgument("m must be >= 1");
  if (n < 3) throw InvalidArgument("n must be >= 3");
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("p must be a finite number > 1");
}

bool ProblemParams::subcritical() const noexcept {
  if (m <= 2) return true;
  return p * (m - 2) < m + 2;
}

double sphere_area(int dim) {
  if (dim < 1) throw InvalidArgument("dimension must be >= 1");
  const double half = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

namespace {
// Volume of {a <= |x| <= b} divided by the sphere area.
double shell(double a, double b, int dim) { return (std::pow(b, dim) - std::pow(a, dim)) / dim; }
}  // namespace

std::vector<double> radial_weights(const RadialGrid& grid, int dim) {
  const double h = grid.step();
  const std::size_t n = grid.size();
  std::vector<double> w(n);
  w[0] = shell(0.0, 0.5 * h, dim);
  for (std::size_t i = 1; i + 1 < n; ++i) w[i] = shell(grid.node(i) - 0.5 * h, grid.node(i) + 0.5 * h, dim);
  w[n - 1] = shell(grid.node(n - 1) - 0.5 * h, grid.node(n - 1), dim);
  return w;
}

double integrate_radial(std::span<const double> values, const RadialGrid& grid, int dim) {
  if (values.size() != grid.size()) throw InvalidArgument("integrand does not match grid");
  const auto w = radial_weights(grid, dim);
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += w[i] * values[i];
  return sphere_area(dim) * sum;
}

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += lower[i] * x[i - 1];
    if (i + 1 < n) v += upper[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

std::vector<double> SymTridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

RadialLaplacian radial_laplacian(const RadialGrid& grid, int dim, int sector) {
  if (sector < 0) throw InvalidArgument("sector must be >= 0");
  if (grid.size() < 3) throw InvalidArgument("grid too small for a radial Laplacian");
  const double h = grid.step();
  const double h2 = h * h;
  const std::size_t first = sector == 0 ? 0 : 1;
  const std::size_t last = grid.size() - 1;  // Dirichlet node, not an unknown
  const std::size_t n = last - first;

  RadialLaplacian out;
  out.first = first;
  out.dim = dim;
  out.sector = sector;
  out.matrix.lower.assign(n, 0.0);
  out.matrix.diag.assign(n, 0.0);
  out.matrix.upper.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = first + k;
    if (i == 0) {
      out.matrix.diag[k] = 2.0 * dim / h2;
      out.matrix.upper[k] = -2.0 * dim / h2;
      continue;
    }
    const double r = grid.node(i);
    const double volume = shell(r - 0.5 * h, r + 0.5 * h, dim);
    const double a_minus = std::pow(r - 0.5 * h, dim - 1) / (h * volume);
    const double a_plus = std::pow(r + 0.5 * h, dim - 1) / (h * volume);
    // Centrifugal term chosen so that the regular harmonic r^ℓ is annihilated
    // exactly; it equals ℓ(ℓ+d-2)/r² up to O(h²) away from the origin.
    double centrifugal = 0.0;
    if (sector > 0) {
      const double rl = std::pow(r, sector);
      centrifugal = (a_plus * (std::pow(r + h, sector) - rl) - a_minus * (rl - std::pow(r - h, sector))) / rl;
    }
    out.matrix.diag[k] = a_minus + a_plus + centrifugal;
    if (k > 0) out.matrix.lower[k] = -a_minus;
    out.matrix.upper[k] = -a_plus;  // for k = n-1 this couples to the Dirichlet node
  }
  return out;
}

double minus_laplacian_at(std::span<const double> v, const RadialGrid& grid, int dim, std::size_t i) {
  const double h = grid.step();
  const double h2 = h * h;
  if (i == 0) return -2.0 * dim * (v[1] - v[0]) / h2;
  const double r = grid.node(i);
  const double volume = shell(r - 0.5 * h, r + 0.5 * h, dim);
  const double a_minus = std::pow(r - 0.5 * h, dim - 1) * h / volume;
  const double a_plus = std::pow(r + 0.5 * h, dim - 1) * h / volume;
  return -(a_plus * (v[i + 1] - v[i]) - a_minus * (v[i] - v[i - 1])) / h2;
}

std::vector<double> solve_tridiagonal(const Tridiagonal& t, std::span<const double> rhs) {
  const std::size_t n = t.size();
  if (rhs.size() != n) throw InvalidArgument("right-hand side does not match matrix");
  std::vector<double> c(n), d(n);
  double beta = t.diag[0];
  if (beta == 0.0) throw NumericalError("zero pivot in tridiagonal solve");
  c[0] = n > 1 ? t.upper[0] / beta : 0.0;
  d[0] = rhs[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    beta = t.diag[i] - t.lower[i] * c[i - 1];
    if (beta == 0.0) throw NumericalError("zero pivot in tridiagonal solve");
    c[i] = i + 1 < n ? t.upper[i] / beta : 0.0;
    d[i] = (rhs[i] - t.lower[i] * d[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

std::vector<double> solve_tridiagonal_pivoted(const Tridiagonal& t, std::span<const double> rhs) {
  const std::size_t n = t.size();
  if (rhs.size() != n) throw InvalidArgument("right-hand side does not match matrix");
  std::vector<double> d = t.diag;
  std::vector<double> du(n, 0.0), dl(n, 0.0), du2(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    du[i] = t.upper[i];
    dl[i] = t.lower[i + 1];
  }
  std::vector<double> b(rhs.begin(), rhs.end());
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(d[i]));
  const double tiny = std::max(scale, 1.0) * std::numeric_limits<double>::epsilon();

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
      du2[i] = 0.0;
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = temp;
      const double tb = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tb - fact * b[i + 1];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  std::vector<double> x(n);
  x[n - 1] = b[n - 1] / d[n - 1];
  if (n > 1) x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
  if (n > 2)
    for (std::size_t i = n - 2; i-- > 0;) x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
  return x;
}

}  // namespace dancer
