#include "dancer/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dancer/errors.hpp"
#include "dancer/radial_operator.hpp"

namespace dancer::norms {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw InvalidArgument("Lebesgue exponent must be >= 1");
}

void check_holder(double beta, double holder_alpha) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("weight exponent must be >= 0");
  if (!(holder_alpha > 0.0 && holder_alpha <= 1.0)) throw InvalidArgument("Hölder exponent must lie in (0, 1]");
}

// ∫_a^∞ e^{-c s} s^{m-1} ds = e^{-ca} Σ_{k<m} (m-1)!/k! a^k / c^{m-k} for integer m >= 1.
double exp_moment_tail(double c, int m, double a) {
  double sum = 0.0, factor = 1.0;  // (m-1)!/k!, built from k = m-1 downwards
  for (int k = m - 1; k >= 0; --k) {
    sum += factor * std::pow(a, k) / std::pow(c, m - k);
    factor *= k;
  }
  return std::exp(-c * a) * sum;
}

// ∫_a^∞ (1+r)^{-b} r^{n-1} dr, b > n: the Beta integral at a = 0, and the
// bound ∫_a^∞ (1+r)^{n-1-b} dr otherwise.
double power_moment_tail(double b, int n, double a) {
  if (!(b > n)) return std::numeric_limits<double>::infinity();
  if (a == 0.0) return std::exp(std::lgamma(n) + std::lgamma(b - n) - std::lgamma(b));
  return std::pow(1.0 + a, n - b) / (b - n);
}

double profile_tail(const RadialProfile& f, int dim, double alpha, double r_power) {
  const auto& grid = f.grid();
  const double r_max = grid.r_max();
  double c = 0.0;
  for (std::size_t i = grid.index_of(0.5 * r_max); i < f.size(); ++i)
    c = std::max(c, std::abs(f[i]) * std::pow(1.0 + grid.node(i), r_power));
  if (c == 0.0) return 0.0;
  const double integral = lebesgue_norm(f, dim, alpha);
  const double extra = sphere_area(dim) * std::pow(c, alpha) * power_moment_tail(alpha * r_power, dim, r_max);
  return std::pow(std::pow(integral, alpha) + extra, 1.0 / alpha) - integral;
}

// Weighted quotient term for one pair, weight taken at the first node.
double quotient(double weight, double a, double b, double distance, double holder_alpha) {
  return weight * std::abs(a - b) / std::pow(distance, holder_alpha);
}

}  // namespace

std::string_view tag_name(Tag tag) noexcept {
  switch (tag) {
    case Tag::star_alpha: return "star_alpha";
    case Tag::starstar_alpha: return "starstar_alpha";
    case Tag::weighted_holder_beta: return "weighted_holder_beta";
    case Tag::hat_beta: return "hat_beta";
    case Tag::sharp: return "sharp";
  }
  return "unknown";
}

void NormKind::validate() const {
  switch (tag) {
    case Tag::star_alpha:
    case Tag::starstar_alpha: check_alpha(parameter); break;
    case Tag::weighted_holder_beta:
    case Tag::hat_beta: check_holder(parameter, holder_alpha); break;
    case Tag::sharp: check_holder(0.0, holder_alpha); break;
  }
}

double lebesgue_norm(const RadialProfile& f, int dim, double alpha) {
  check_alpha(alpha);
  std::vector<double> powered(f.size());
  for (std::size_t i = 0; i < powered.size(); ++i) powered[i] = std::pow(std::abs(f[i]), alpha);
  return std::pow(integrate_radial(powered, f.grid(), dim), 1.0 / alpha);
}

double lebesgue_norm(const Field2D& f, int m, int n, double alpha) {
  check_alpha(alpha);
  const auto ws = radial_weights(f.s_grid(), m);
  const auto wr = radial_weights(f.r_grid(), n);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < f.cols(); ++j) row += wr[j] * std::pow(std::abs(f(i, j)), alpha);
    sum += ws[i] * row;
  }
  return std::pow(sphere_area(m) * sphere_area(n) * sum, 1.0 / alpha);
}

double norm_star_alpha(const Field2D& field, double alpha, const ProblemParams& params) {
  params.validate();
  return lebesgue_norm(field, params.m, params.n, alpha) + field.max_abs();
}

double norm_starstar_alpha(std::span<const RadialProfile> tuple, int n, double alpha) {
  if (tuple.empty()) throw InvalidArgument("norm of an empty tuple");
  double sum = 0.0;
  for (const auto& eta : tuple) sum += lebesgue_norm(eta, n, alpha) + eta.max_abs();
  return sum;
}

HolderParts weighted_holder_parts(const Field2D& field, double beta, double holder_alpha) {
  check_holder(beta, holder_alpha);
  const double hs = field.s_grid().step(), hr = field.r_grid().step();
  if (std::floor(1.0 / hs) < 2.0 || std::floor(1.0 / hr) < 2.0)
    throw ResolutionError("grid too coarse: a unit ball must span at least 4 nodes per axis");
  const std::size_t rows = field.rows(), cols = field.cols();
  std::vector<double> weight_s(rows), weight_r(cols);
  for (std::size_t i = 0; i < rows; ++i) weight_s[i] = std::exp(0.5 * field.s_grid().node(i));
  for (std::size_t j = 0; j < cols; ++j) weight_r[j] = std::pow(1.0 + field.r_grid().node(j), beta);

  constexpr int kDirections[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  double value = 0.0, seminorm = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double w = weight_s[i] * weight_r[j];
      const double centre = field(i, j);
      value = std::max(value, w * std::abs(centre));
      for (const auto& d : kDirections) {
        for (std::ptrdiff_t k = 1;; k *= 2) {
          const double dist = std::hypot(static_cast<double>(d[0] * k) * hs, static_cast<double>(d[1] * k) * hr);
          if (dist > 1.0) break;
          const auto a = static_cast<std::ptrdiff_t>(i) + d[0] * k;
          const auto b = static_cast<std::ptrdiff_t>(j) + d[1] * k;
          if (a < 0 || b < 0 || a >= static_cast<std::ptrdiff_t>(rows) || b >= static_cast<std::ptrdiff_t>(cols)) break;
          seminorm = std::max(seminorm, quotient(w, centre, field(static_cast<std::size_t>(a), static_cast<std::size_t>(b)),
                                                 dist, holder_alpha));
        }
      }
    }
  }
  return {value, seminorm};
}

HolderParts hat_parts(const RadialProfile& eta, double beta, double holder_alpha) {
  check_holder(beta, holder_alpha);
  const auto& grid = eta.grid();
  const double h = grid.step();
  const auto reach = static_cast<std::size_t>(std::floor(1.0 / h + 1e-9));
  double value = 0.0, seminorm = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    const double w = std::pow(1.0 + grid.node(i), beta);
    value = std::max(value, w * std::abs(eta[i]));
    const std::size_t lo = i > reach ? i - reach : 0, hi = std::min(eta.size() - 1, i + reach);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == i) continue;
      const double dist = h * std::abs(static_cast<double>(j) - static_cast<double>(i));
      seminorm = std::max(seminorm, quotient(w, eta[i], eta[j], dist, holder_alpha));
    }
  }
  return {value, seminorm};
}

double norm_weighted_holder(const Field2D& field, double beta, double holder_alpha) {
  return weighted_holder_parts(field, beta, holder_alpha).total();
}

double norm_hat(const RadialProfile& eta, double beta, double holder_alpha) {
  return hat_parts(eta, beta, holder_alpha).total();
}

double norm_sharp(const helmholtz::PAlphaDecomposition& decomp) {
  check_holder(0.0, decomp.holder_alpha);
  const auto& grid = decomp.remainder.grid();
  const double h = grid.step();
  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = grid.node(i);
    g[i] = (1.0 + r) * (1.0 + r) * decomp.remainder[i];
  }
  const auto per_window = static_cast<std::size_t>(std::round(1.0 / h));
  double best = 0.0;
  for (std::size_t start = 0; start + 1 < g.size(); start += std::max<std::size_t>(per_window, 1)) {
    const std::size_t stop = std::min(g.size() - 1, start + std::max<std::size_t>(per_window, 1));
    double value = 0.0, seminorm = 0.0;
    for (std::size_t i = start; i <= stop; ++i) {
      value = std::max(value, std::abs(g[i]));
      for (std::size_t j = i + 1; j <= stop; ++j)
        seminorm = std::max(seminorm, quotient(1.0, g[i], g[j], h * static_cast<double>(j - i), decomp.holder_alpha));
    }
    best = std::max(best, value + seminorm);
  }
  return std::abs(decomp.c1) + best;
}

double krs_probe(const RadialProfile& phi, int n, double q) {
  if (n < 3) throw DomainError("the probe needs n >= 3");
  const double lo = 2.0 * (n + 1) / (n - 1), hi = 2.0 * n / (n - 2);
  if (!(q >= lo && q <= hi))
    throw DomainError("q = " + std::to_string(q) + " outside the admissible window [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  const auto& grid = phi.grid();
  std::vector<double> image(phi.size(), 0.0);
  for (std::size_t i = 0; i + 1 < phi.size(); ++i)
    image[i] = -minus_laplacian_at(phi.values(), grid, n, i) + phi[i];
  const double q_dual = q / (q - 1.0);
  const double den = lebesgue_norm(RadialProfile(grid, std::move(image)), n, q_dual);
  if (!(den > 0.0)) throw IllPosedError("Δφ + φ vanishes on the grid");
  return lebesgue_norm(phi, n, q) / den;
}

NormReport report_star_alpha(const Field2D& field, double alpha, const ProblemParams& params,
                             const Envelope& envelope) {
  NormReport out{{Tag::star_alpha, alpha, 0.5}, norm_star_alpha(field, alpha, params), 0.0,
                 {field.s_grid(), field.r_grid()}};
  const double s_max = field.s_grid().r_max(), r_max = field.r_grid().r_max();
  double c = 0.0;
  for (std::size_t i = 0; i < field.rows(); ++i) {
    const double s = field.s_grid().node(i);
    for (std::size_t j = 0; j < field.cols(); ++j) {
      const double r = field.r_grid().node(j);
      if (s < 0.5 * s_max && r < 0.5 * r_max) continue;
      c = std::max(c, std::abs(field(i, j)) * std::exp(envelope.s_rate * s) * std::pow(1.0 + r, envelope.r_power));
    }
  }
  if (c == 0.0) return out;
  const double a = alpha * envelope.s_rate, b = alpha * envelope.r_power;
  const double outside = exp_moment_tail(a, params.m, s_max) * power_moment_tail(b, params.n, 0.0) +
                         exp_moment_tail(a, params.m, 0.0) * power_moment_tail(b, params.n, r_max);
  const double integral = lebesgue_norm(field, params.m, params.n, alpha);
  const double extra = sphere_area(params.m) * sphere_area(params.n) * std::pow(c, alpha) * outside;
  out.tail_bound = std::pow(std::pow(integral, alpha) + extra, 1.0 / alpha) - integral;
  return out;
}

NormReport report_starstar_alpha(std::span<const RadialProfile> tuple, int n, double alpha, double r_power) {
  NormReport out{{Tag::starstar_alpha, alpha, 0.5}, norm_starstar_alpha(tuple, n, alpha), 0.0, {}};
  for (const auto& eta : tuple) {
    out.tail_bound += profile_tail(eta, n, alpha, r_power);
    out.grids.push_back(eta.grid());
  }
  return out;
}

NormReport report_weighted_holder(const Field2D& field, double beta, double holder_alpha) {
  return {{Tag::weighted_holder_beta, beta, holder_alpha},
          norm_weighted_holder(field, beta, holder_alpha),
          0.0,
          {field.s_grid(), field.r_grid()}};
}

NormReport report_hat(const RadialProfile& eta, double beta, double holder_alpha) {
  return {{Tag::hat_beta, beta, holder_alpha}, norm_hat(eta, beta, holder_alpha), 0.0, {eta.grid()}};
}

NormReport report_sharp(const helmholtz::PAlphaDecomposition& decomp) {
  return {{Tag::sharp, 0.0, decomp.holder_alpha}, norm_sharp(decomp), 0.0, {decomp.remainder.grid()}};
}

}  // namespace dancer::norms
