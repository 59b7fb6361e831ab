#include "dancer/helmholtz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dancer/errors.hpp"
#include "dancer/radial_operator.hpp"

namespace dancer::helmholtz {

namespace {

using ld = long double;
constexpr ld kPiL = 3.141592653589793238462643383279502884L;
constexpr ld kEulerGammaL = 0.577215664901532860606512090082402431L;

bool is_integer(double nu) { return nu == std::floor(nu); }

// Above this argument the large-argument (Hankel) expansion is used.
double switchover(double nu) { return std::max(20.0, std::abs(nu) + 8.0); }

// Ascending series of J_ν in extended precision; ν not a negative integer.
ld series_j(ld nu, ld x) {
  if (x == 0.0L) return nu == 0.0L ? 1.0L : (nu > 0.0L ? 0.0L : std::numeric_limits<ld>::infinity());
  const ld q = -x * x / 4.0L;
  ld term = std::pow(x / 2.0L, nu) / std::tgamma(nu + 1.0L);
  ld sum = term;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (static_cast<ld>(k) * (static_cast<ld>(k) + nu));
    sum += term;
    if (k > x && std::abs(term) <= 1e-21L * std::abs(sum)) break;
  }
  return sum;
}

// Y_n for integer n >= 0 from the logarithmic series.
ld series_y_integer(int n, ld x) {
  const ld half = x / 2.0L;
  ld finite = 0.0L;
  for (int k = 0; k < n; ++k)
    finite += std::tgamma(static_cast<ld>(n - k)) / std::tgamma(static_cast<ld>(k + 1)) * std::pow(half, 2 * k - n);
  ld harmonic_k = 0.0L, harmonic_nk = 0.0L;
  for (int j = 1; j <= n; ++j) harmonic_nk += 1.0L / j;
  const ld q = -half * half;
  ld term = std::pow(half, n) / std::tgamma(static_cast<ld>(n + 1));
  ld sum = term * (-2.0L * kEulerGammaL + harmonic_k + harmonic_nk);
  for (int k = 1; k < 1000; ++k) {
    term *= q / (static_cast<ld>(k) * static_cast<ld>(n + k));
    harmonic_k += 1.0L / k;
    harmonic_nk += 1.0L / (n + k);
    const ld add = term * (-2.0L * kEulerGammaL + harmonic_k + harmonic_nk);
    sum += add;
    if (k > x && std::abs(add) <= 1e-21L * std::abs(sum)) break;
  }
  return 2.0L / kPiL * std::log(half) * series_j(n, x) - finite / kPiL - sum / kPiL;
}

struct Hankel {
  ld j;
  ld y;
};

// Large-argument expansion J_ν = √(2/πx)(P cos χ - Q sin χ), Y_ν = √(2/πx)(P sin χ + Q cos χ),
// summed until the terms stop decreasing.
Hankel hankel(ld nu, ld x) {
  const ld mu = 4.0L * nu * nu;
  ld p = 0.0L, q = 0.0L, term = 1.0L, previous = std::numeric_limits<ld>::infinity();
  for (int k = 0; k < 400; ++k) {
    if (k > 0) {
      const ld odd = 2.0L * k - 1.0L;
      term *= (mu - odd * odd) / (8.0L * k * x);
    }
    const ld mag = std::abs(term);
    if (mag > previous) break;
    switch (k % 4) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      default: q -= term; break;
    }
    if (mag == 0.0L || mag <= 1e-21L * std::abs(p)) break;
    previous = mag;
  }
  const ld chi = x - (nu / 2.0L + 0.25L) * kPiL;
  const ld pref = std::sqrt(2.0L / (kPiL * x));
  return {pref * (p * std::cos(chi) - q * std::sin(chi)), pref * (p * std::sin(chi) + q * std::cos(chi))};
}

ld bessel_y_ld(ld nu, ld x) {
  if (x > switchover(static_cast<double>(nu))) return hankel(nu, x).y;
  if (is_integer(static_cast<double>(nu))) return series_y_integer(static_cast<int>(nu), x);
  return (series_j(nu, x) * std::cos(nu * kPiL) - series_j(-nu, x)) / std::sin(nu * kPiL);
}

ld bessel_j_ld(ld nu, ld x) {
  if (x > switchover(static_cast<double>(nu))) return hankel(nu, x).j;
  return series_j(nu, x);
}

void check_radial_args(int n, double s, double lambda, double r) {
  if (n < 2) throw InvalidArgument("dimension n must be >= 2");
  if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("angular parameter s must be >= 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be > 0");
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("radius must be finite and >= 0");
}

double order(int n, double s) {
  const double a = 0.5 * n - 1.0;
  return std::sqrt(a * a + s * s);
}

constexpr std::array<double, 4> kGaussNodes = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                               0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                                 0.3478548451374538};

// ∫_a^b f by four-point Gauss-Legendre.
template <class F>
double gauss4(double a, double b, F&& f) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int q = 0; q < 4; ++q) sum += kGaussWeights[q] * f(mid + half * kGaussNodes[q]);
  return half * sum;
}

// ∫_R^∞ cos(a s - φ)/s ds for aR large, from the asymptotic auxiliary
// functions f, g of the sine and cosine integrals.
double tail_cos(double a, double phi, double R) {
  const double x = a * R;
  double f = 0.0, g = 0.0;
  double tf = 1.0 / x, tg = 1.0 / (x * x);
  for (int k = 0; k < 30; ++k) {
    f += tf;
    g += tg;
    const double nf = -tf * (2.0 * k + 1.0) * (2.0 * k + 2.0) / (x * x);
    const double ng = -tg * (2.0 * k + 2.0) * (2.0 * k + 3.0) / (x * x);
    if (std::abs(nf) > std::abs(tf) || std::abs(nf) < 1e-18 * std::abs(f)) break;
    tf = nf;
    tg = ng;
  }
  const double cos_tail = g * std::cos(x) - f * std::sin(x);  // ∫_x^∞ cos t / t dt
  const double sin_tail = f * std::cos(x) + g * std::sin(x);  // ∫_x^∞ sin t / t dt
  return std::cos(phi) * cos_tail + std::sin(phi) * sin_tail;
}

}  // namespace

double bessel_j(double nu, double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("Bessel argument must be finite and >= 0");
  if (!std::isfinite(nu) || (nu < 0.0 && is_integer(nu)))
    throw InvalidArgument("Bessel order must be finite and not a negative integer");
  return static_cast<double>(bessel_j_ld(nu, x));
}

double bessel_y(double nu, double x) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("Bessel order must be finite and >= 0");
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("Y_nu needs a finite argument > 0");
  return static_cast<double>(bessel_y_ld(nu, x));
}

double radial_solution(Kind kind, int n, double s, double lambda, double r) {
  check_radial_args(n, s, lambda, r);
  const double mu = order(n, s);
  const double e = 1.0 - 0.5 * n;
  if (r == 0.0) {
    if (kind == Kind::singular) throw DomainError("singular radial solution is undefined at r = 0");
    return s == 0.0 ? static_cast<double>(1.0L / (std::pow(2.0L, mu) * std::tgamma(mu + 1.0L))) : 0.0;
  }
  const ld t = std::sqrt(static_cast<ld>(lambda)) * r;
  const ld c = kind == Kind::regular ? bessel_j_ld(mu, t) : bessel_y_ld(mu, t);
  return static_cast<double>(std::pow(t, static_cast<ld>(e)) * c);
}

double radial_derivative(Kind kind, int n, double s, double lambda, double r) {
  check_radial_args(n, s, lambda, r);
  const double mu = order(n, s);
  const double e = 1.0 - 0.5 * n;
  const ld k = std::sqrt(static_cast<ld>(lambda));
  if (r == 0.0) {
    if (kind == Kind::singular) throw DomainError("singular radial solution is undefined at r = 0");
    // t^{e+μ-1} behaviour at the origin.
    const double power = e + mu - 1.0;
    if (s == 0.0 || power > 0.0) return 0.0;
    if (power == 0.0) return static_cast<double>(k * (e + mu) / (std::pow(2.0L, mu) * std::tgamma(mu + 1.0L)));
    throw DomainError("derivative of the regular solution is unbounded at r = 0");
  }
  const ld t = k * r;
  ld c0, c1;
  if (kind == Kind::regular) {
    c0 = bessel_j_ld(mu, t);
    c1 = bessel_j_ld(mu + 1.0, t);
  } else {
    c0 = bessel_y_ld(mu, t);
    c1 = bessel_y_ld(mu + 1.0, t);
  }
  // d/dt [t^e C_μ(t)] = t^{e-1} [(e + μ) C_μ - t C_{μ+1}].
  return static_cast<double>(k * std::pow(t, static_cast<ld>(e - 1.0)) * ((e + mu) * c0 - t * c1));
}

double wronskian(int n, double lambda, double r) {
  if (!(r > 0.0)) throw DomainError("Wronskian needs r > 0");
  const double j = radial_solution(Kind::regular, n, 0.0, lambda, r);
  const double dj = radial_derivative(Kind::regular, n, 0.0, lambda, r);
  const double y = radial_solution(Kind::singular, n, 0.0, lambda, r);
  const double dy = radial_derivative(Kind::singular, n, 0.0, lambda, r);
  return std::pow(r, n - 1) * (j * dy - dj * y);
}

void SourceSet::validate() const {
  if (n < 2) throw InvalidArgument("source dimension n must be >= 2");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be > 0");
  if (points.empty()) throw InvalidArgument("source set is empty");
  for (const auto& pt : points) {
    if (pt.size() != static_cast<std::size_t>(n)) throw InvalidArgument("source point has wrong dimension");
    for (double c : pt)
      if (!std::isfinite(c)) throw InvalidArgument("source coordinate is not finite");
  }
}

double superpose(const SourceSet& sources, std::span<const double> y) {
  sources.validate();
  if (y.size() != static_cast<std::size_t>(sources.n)) throw InvalidArgument("evaluation point has wrong dimension");
  double sum = 0.0;
  for (const auto& pt : sources.points) {
    double d2 = 0.0;
    for (int a = 0; a < sources.n; ++a) d2 += (y[a] - pt[a]) * (y[a] - pt[a]);
    sum += radial_solution(Kind::regular, sources.n, 0.0, sources.lambda, std::sqrt(d2));
  }
  return sum;
}

double cutoff_rho(double r) {
  const double t = std::clamp(r - 1.0, 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double envelope_decay_exponent(const RadialProfile& f, double lo, double hi, double window) {
  const auto& grid = f.grid();
  if (!(window > 0.0) || !(lo > 0.0) || !(lo < hi) || hi > grid.r_max() + 1e-12)
    throw InvalidArgument("decay window must satisfy 0 < lo < hi <= r_max and width > 0");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  bool last_zero = false;
  for (double a = lo; a < hi - 1e-12; a += window) {
    const double b = std::min(a + window, hi);
    double best = 0.0, at = 0.5 * (a + b);
    for (std::size_t i = grid.index_of(a); i < grid.size() && grid.node(i) <= b + 1e-12; ++i) {
      if (grid.node(i) < a - 1e-12) continue;
      if (std::abs(f[i]) > best) {
        best = std::abs(f[i]);
        at = grid.node(i);
      }
    }
    last_zero = best == 0.0;
    if (last_zero) continue;
    const double x = std::log(at), y = std::log(best);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (last_zero || count < 2) return std::numeric_limits<double>::infinity();
  return -(count * sxy - sx * sy) / (count * sxx - sx * sx);
}

InhomogeneousSolution solve_inhomogeneous(int n, double lambda, const RadialProfile& eta) {
  check_radial_args(n, 0.0, lambda, 0.0);
  const auto& grid = eta.grid();
  const std::size_t size = grid.size();
  if (size < 4) throw InvalidArgument("grid too small for the variation-of-parameters solve");
  const double wr = 2.0 / std::numbers::pi * std::pow(lambda, 1.0 - 0.5 * n);

  std::vector<double> int_j(size, 0.0), int_n(size, 0.0);
  for (std::size_t i = 0; i + 1 < size; ++i) {
    const double a = grid.node(i), b = grid.node(i + 1);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sj = 0.0, sn = 0.0;
    for (int q = 0; q < 4; ++q) {
      const double s = mid + half * kGaussNodes[q];
      const double weight = kGaussWeights[q] * eta.interpolate(s) * std::pow(s, n - 1);
      sj += weight * radial_solution(Kind::regular, n, 0.0, lambda, s);
      sn += weight * radial_solution(Kind::singular, n, 0.0, lambda, s);
    }
    int_j[i + 1] = int_j[i] + half * sj;
    int_n[i + 1] = int_n[i] + half * sn;
  }

  std::vector<double> h(size, 0.0);
  for (std::size_t i = 1; i < size; ++i) {
    const double r = grid.node(i);
    h[i] = (radial_solution(Kind::singular, n, 0.0, lambda, r) * int_j[i] -
            radial_solution(Kind::regular, n, 0.0, lambda, r) * int_n[i]) /
           wr;
  }

  InhomogeneousSolution out{RadialProfile(grid, std::move(h)), std::numeric_limits<double>::infinity(), false};
  if (eta.max_abs() > 0.0 && grid.r_max() >= 4.0) {
    const double window = std::max(2.0 * std::numbers::pi / std::sqrt(lambda), 8.0 * grid.step());
    if (grid.r_max() / 2.0 + 2.0 * window <= grid.r_max())
      out.beta_estimate = envelope_decay_exponent(eta, grid.r_max() / 2.0, grid.r_max(), window);
  }
  out.decay_warning = out.beta_estimate <= 0.5 * (n + 1);
  return out;
}

double helmholtz_residual(const RadialProfile& h, int n, double lambda, const RadialProfile& eta) {
  if (!(h.grid() == eta.grid())) throw InvalidArgument("solution and forcing live on different grids");
  const auto v = h.values();
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double res = -minus_laplacian_at(v, h.grid(), n, i) + lambda * v[i] - eta[i];
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

PhaseFit extract_phase(int n, double lambda, double lo, double hi) {
  check_radial_args(n, 0.0, lambda, lo);
  if (!(lo > 0.0) || !(hi > lo)) throw InvalidArgument("phase window must satisfy 0 < lo < hi");
  const double k = std::sqrt(lambda);
  const double step = 0.05;
  const auto count = static_cast<std::size_t>(std::round((hi - lo) / step)) + 1;
  double cc = 0, cs = 0, ss = 0, yc = 0, ys = 0;
  std::vector<double> rs(count), ys_(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    const double y = std::pow(r, 0.5 * (n - 1)) * radial_solution(Kind::regular, n, 0.0, lambda, r);
    const double c = std::cos(k * r), s = std::sin(k * r);
    cc += c * c;
    cs += c * s;
    ss += s * s;
    yc += y * c;
    ys += y * s;
    rs[i] = r;
    ys_[i] = y;
  }
  const double det = cc * ss - cs * cs;
  const double a = (yc * ss - ys * cs) / det;
  const double b = (ys * cc - yc * cs) / det;
  PhaseFit fit;
  fit.amplitude = std::hypot(a, b);
  fit.zeta = std::atan2(b, a);
  double rss = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double d = ys_[i] - a * std::cos(k * rs[i]) - b * std::sin(k * rs[i]);
    rss += d * d;
  }
  fit.residual = std::sqrt(rss / static_cast<double>(count)) / fit.amplitude;
  if (!(fit.residual <= 1e-2))
    throw NumericalError("phase fit residual " + std::to_string(fit.residual) + " exceeds 1e-2", {fit.residual});
  return fit;
}

double PAlphaDecomposition::resonant_part(double r) const {
  if (r < 1.0) return 0.0;
  return c1 * cutoff_rho(r) * std::sin(std::sqrt(lambda) * r - zeta) / r;
}

RadialProfile PAlphaDecomposition::reconstruct() const {
  RadialProfile out = remainder;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += resonant_part(out.grid().node(i));
  return out;
}

PAlphaDecomposition resonant_solve_n3(double lambda, double k1, double k2, double k3, const RadialProfile& eta_bar,
                                      const ResonantOptions& options) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be > 0");
  if (!std::isfinite(k1) || !std::isfinite(k2) || !std::isfinite(k3))
    throw InvalidArgument("trigonometric coefficients must be finite");
  if (!(options.holder_alpha > 0.0 && options.holder_alpha <= 1.0))
    throw InvalidArgument("Hoelder exponent must lie in (0, 1]");
  const auto& grid = eta_bar.grid();
  if (grid.r_max() < 4.0) throw InvalidArgument("resonant solve needs r_max >= 4");
  if (!(options.far_radius > grid.r_max())) throw InvalidArgument("far_radius must exceed the grid radius");

  const double k = std::sqrt(lambda);
  const PhaseFit phase = extract_phase(3, lambda);
  const double zeta = phase.zeta;
  const double r_max = grid.r_max();

  if (options.enforce_decay && eta_bar.max_abs() > 0.0) {
    const double gamma = envelope_decay_exponent(eta_bar, r_max / 4.0, r_max, 2.0 * std::numbers::pi / k);
    if (gamma < 3.0 - 0.2)
      throw ContractViolation("remainder forcing decays like r^-" + std::to_string(gamma) + ", slower than r^-3",
                              {gamma});
  }

  auto jn = [&](double s) { return radial_solution(Kind::regular, 3, 0.0, lambda, s) / phase.amplitude; };
  auto nn = [&](double s) { return radial_solution(Kind::singular, 3, 0.0, lambda, s) / phase.amplitude; };
  auto trig = [&](double s) {
    const double th = k * s - zeta;
    const double sn = std::sin(th), cs = std::cos(th);
    return k1 * sn * sn + k2 * cs * cs + k3 * sn * cs;
  };
  // η s² on the grid.
  auto forcing = [&](double s) { return cutoff_rho(s) * trig(s) + eta_bar.interpolate(s) * s * s; };

  const std::size_t size = grid.size();
  std::vector<double> int_j(size, 0.0), int_n(size, 0.0);
  for (std::size_t i = 0; i + 1 < size; ++i) {
    const double a = grid.node(i), b = grid.node(i + 1);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sj = 0.0, sn = 0.0;
    for (int q = 0; q < 4; ++q) {
      const double s = mid + half * kGaussNodes[q];
      const double f = kGaussWeights[q] * forcing(s);
      sj += f * jn(s);
      sn += f * nn(s);
    }
    int_j[i + 1] = int_j[i] + half * sj;
    int_n[i + 1] = int_n[i] + half * sn;
  }

  // Beyond the grid only the trigonometric part remains and J, N take their
  // closed forms cos θ / s, sin θ / s.
  double far_j = 0.0, far_n = 0.0;
  {
    const auto panels = static_cast<std::size_t>(std::ceil((options.far_radius - r_max) * 4.0 * k));
    const double width = (options.far_radius - r_max) / static_cast<double>(panels);
    for (std::size_t pnl = 0; pnl < panels; ++pnl) {
      const double a = r_max + width * static_cast<double>(pnl), b = a + width;
      far_j += gauss4(a, b, [&](double s) { return std::cos(k * s - zeta) / s * trig(s); });
      far_n += gauss4(a, b, [&](double s) { return std::sin(k * s - zeta) / s * trig(s); });
    }
    const double R = options.far_radius;
    const double half_pi = 0.5 * std::numbers::pi;
    const double c1t = tail_cos(k, zeta, R), c3t = tail_cos(3.0 * k, 3.0 * zeta, R);
    const double s1t = tail_cos(k, zeta + half_pi, R), s3t = tail_cos(3.0 * k, 3.0 * zeta + half_pi, R);
    far_j += 0.25 * ((k1 + 3.0 * k2) * c1t + (k2 - k1) * c3t + k3 * (s1t + s3t));
    far_n += 0.25 * ((3.0 * k1 + k2) * s1t + (k2 - k1) * s3t + k3 * (c1t - c3t));
  }

  const double c1 = (int_j[size - 1] + far_j) / k;
  std::vector<double> h(size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    const double r = grid.node(i);
    const double tail_n = int_n[size - 1] - int_n[i] + far_n;
    h[i] = i == 0 ? jn(0.0) * tail_n / k : (nn(r) * int_j[i] + jn(r) * tail_n) / k;
  }
  PAlphaDecomposition out{c1, zeta, lambda, RadialProfile(grid, std::move(h)), 0.0, options.holder_alpha, 0.0};
  for (std::size_t i = 0; i < size; ++i) out.remainder[i] -= out.resonant_part(grid.node(i));
  for (std::size_t i = 0; i < size; ++i) {
    const double r = grid.node(i);
    out.K = std::max(out.K, (1.0 + r) * (1.0 + r) * std::abs(out.remainder[i]));
  }
  // |∫_{r_max}^∞ J η̄ s²| <= sup(|η̄| s³) / r_max for η̄ = O(s^{-3}).
  double envelope = 0.0;
  for (std::size_t i = grid.index_of(0.75 * r_max); i < size; ++i) {
    const double r = grid.node(i);
    envelope = std::max(envelope, std::abs(eta_bar[i]) * r * r * r);
  }
  out.truncation_error = envelope / r_max / k;
  return out;
}

}  // namespace dancer::helmholtz
