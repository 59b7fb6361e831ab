#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

#include "dancer/helmholtz.hpp"

/// Independent reference computations shared by the unit and acceptance tests.
namespace dancer::oracles {

/// Plain ascending series of J_0 in long double.
inline double series_j0(double x) {
  long double term = 1.0L, sum = 1.0L;
  const long double q = -static_cast<long double>(x) * x / 4.0L;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
  }
  return static_cast<double>(sum);
}

/// Bisection to machine resolution on a sign change of f over [lo, hi].
template <class F>
double bisect_root(F&& f, double lo, double hi) {
  const bool lo_positive = f(lo) > 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ((f(mid) > 0.0) == lo_positive ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// t^{-ν} J_ν(t), ν = n/2 - 1, via Boost.
inline double regular_radial(int n, double t) {
  const double nu = 0.5 * n - 1.0;
  return t == 0.0 ? 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0)) : std::pow(t, -nu) * boost::math::cyl_bessel_j(nu, t);
}

/// sup over r in [0, 500] of (1+r)^{(n-1)/2} |f(r)| sampled with the given step.
template <class F>
double envelope_sup(int n, double step, F&& f) {
  double best = 0.0;
  const auto count = static_cast<int>(std::round(500.0 / step));
  for (int i = 0; i <= count; ++i) {
    const double r = step * i;
    best = std::max(best, std::pow(1.0 + r, 0.5 * (n - 1)) * std::abs(f(r)));
  }
  return best;
}

/// h*(r) = (1 - (r/5)²)^6 on [0, 5], zero beyond; C^5 and compactly supported,
/// with the forcing η = h'' + (n-1)/r h' + λh that it solves.
struct Manufactured {
  int n;
  double lambda;
  double h(double r) const { return r < 5.0 ? std::pow(1.0 - r * r / 25.0, 6) : 0.0; }
  double forcing(double r) const {
    if (r >= 5.0) return 0.0;
    const double u = 1.0 - r * r / 25.0;
    const double d2 = 30.0 * std::pow(u, 4) * (4.0 * r * r / 625.0) + 6.0 * std::pow(u, 5) * (-2.0 / 25.0);
    // (n-1)/r h' is regular: h' / r = -12/25 u^5.
    return d2 + (n - 1) * (6.0 * std::pow(u, 5) * (-2.0 / 25.0)) + lambda * h(r);
  }
};

/// c1 = (1/k) ∫_0^∞ (sin ks / s) ρ(s) T(s) ds for the k1 = 1 forcing,
/// T = sin²(ks - π/2) = cos²(ks): Gauss-Kronrod on [0, 2] and Ooura's Fourier
/// quadrature on [2, ∞), with sin(ks) cos²(ks) = (sin ks + sin 3ks)/4.
inline double c1_oracle(double lambda) {
  const double k = std::sqrt(lambda);
  auto near = [&](double s) {
    const double c = std::cos(k * s);
    return (s == 0.0 ? k : std::sin(k * s) / s) * helmholtz::cutoff_rho(s) * c * c;
  };
  const double head = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(near, 0.0, 2.0, 15, 1e-15);
  // ∫_2^∞ sin(a s)/s ds = cos(2a) ∫_0^∞ sin(at)/(t+2) dt + sin(2a) ∫_0^∞ cos(at)/(t+2) dt.
  auto tail = [](double a) {
    boost::math::quadrature::ooura_fourier_sin<double> sin_q;
    boost::math::quadrature::ooura_fourier_cos<double> cos_q;
    auto f = [](double t) { return 1.0 / (t + 2.0); };
    return std::cos(2 * a) * sin_q.integrate(f, a).first + std::sin(2 * a) * cos_q.integrate(f, a).first;
  };
  return (head + 0.25 * (tail(k) + tail(3.0 * k))) / k;
}

/// Residual of the reconstructed n = 3 resonant solution on the conservative
/// stencil; η̄ is even in r, so the forcing is smooth on R^3.
inline double reconstruction_residual(double step) {
  const double lambda = 1.0, k1 = 0.7, k2 = -0.4, k3 = 1.1;
  const RadialGrid grid(60.0, step);
  const auto eta_bar =
      RadialProfile::sample(grid, [](double r) { return std::cos(2.0 * r) * std::pow(1.0 + r * r, -1.5); });
  const auto d = helmholtz::resonant_solve_n3(lambda, k1, k2, k3, eta_bar);
  const auto eta = RadialProfile::sample(grid, [&](double r) {
    if (r == 0.0) return eta_bar[0];
    const double th = r - d.zeta;
    const double t =
        k1 * std::sin(th) * std::sin(th) + k2 * std::cos(th) * std::cos(th) + k3 * std::sin(th) * std::cos(th);
    return helmholtz::cutoff_rho(r) * t / (r * r) + eta_bar.interpolate(r);
  });
  return helmholtz::helmholtz_residual(d.reconstruct(), 3, lambda, eta);
}

}  // namespace dancer::oracles
