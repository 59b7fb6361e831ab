#include "dancer/reduction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "dancer/norms.hpp"
#include "dancer/radial_operator.hpp"

namespace dancer::reduction {

namespace {

double sup_difference(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double power_signed(double u, double p) { return std::pow(std::abs(u), p - 1.0) * u; }

helmholtz::PAlphaDecomposition zero_decomposition(const RadialGrid& grid, double lambda, double holder_alpha) {
  return {0.0, helmholtz::extract_phase(3, lambda).zeta, lambda, RadialProfile(grid), 0.0, holder_alpha, 0.0};
}

// (1 - t) a + t b for profiles and, when present, for decompositions.
HSolution blend(const HSolution& a, const HSolution& b, double t) {
  std::vector<double> h(a.h.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = (1.0 - t) * a.h[i] + t * b.h[i];
  HSolution out{RadialProfile(a.h.grid(), std::move(h)), std::nullopt, b.k1, b.k2, b.k3, b.split_residual};
  if (a.decomposition && b.decomposition) {
    auto d = *b.decomposition;
    d.c1 = (1.0 - t) * a.decomposition->c1 + t * b.decomposition->c1;
    d.K = 0.0;
    for (std::size_t i = 0; i < d.remainder.size(); ++i) {
      d.remainder[i] = (1.0 - t) * a.decomposition->remainder[i] + t * b.decomposition->remainder[i];
      const double r = d.remainder.grid().node(i);
      d.K = std::max(d.K, (1.0 + r) * (1.0 + r) * std::abs(d.remainder[i]));
    }
    out.decomposition = std::move(d);
  }
  return out;
}

// Norm of a - b in the space of h: sharp norm for n = 3, hat norm otherwise.
double h_increment_norm(const HSolution& a, const HSolution& b, int n, double holder_alpha) {
  if (a.decomposition && b.decomposition) {
    auto d = *a.decomposition;
    d.c1 -= b.decomposition->c1;
    for (std::size_t i = 0; i < d.remainder.size(); ++i) d.remainder[i] -= b.decomposition->remainder[i];
    return norms::norm_sharp(d);
  }
  std::vector<double> diff(a.h.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.h[i] - b.h[i];
  return norms::norm_hat(RadialProfile(a.h.grid(), std::move(diff)), 0.5 * (n - 1), holder_alpha);
}

}  // namespace

void ReductionInput::validate(double epsilon_max) const {
  if (n < 3) throw InvalidArgument("n must be >= 3");
  if (!std::isfinite(epsilon) || std::abs(epsilon) > epsilon_max)
    throw InvalidArgument("|epsilon| = " + std::to_string(std::abs(epsilon)) + " exceeds epsilon_max = " +
                          std::to_string(epsilon_max));
  if (spectrum.pairs.empty() || !(lambda1() > 0.0))
    throw InvalidArgument("the linearized operator has no negative eigenvalue");
}

ReductionInput make_input(const radial::BoundState& state, int n, double epsilon, const ReductionGrids& grids) {
  auto w = restrict_to(state.profile, grids.s_grid);
  auto op = spectrum::assemble_linearized(w, state.params, 0);
  auto spec = spectrum::eigenpairs(op, 1);
  return ReductionInput{state, std::move(w), std::move(op), std::move(spec), n, epsilon, grids};
}

double nonlinearity(double w_val, double z_val, double f_val, double phi_val, double p) {
  const double t = z_val * f_val + phi_val;
  if (t == 0.0) return 0.0;
  if (std::abs(t) < 0.5 * std::abs(w_val)) {
    // Σ_{k>=2} C(p, k) x^k, |x| < 1/2; terminates for integer p.
    const double x = t / w_val;
    double coeff = p * (p - 1.0) / 2.0, power = x * x, sum = 0.0;
    for (int k = 2; k < 200; ++k) {
      const double term = coeff * power;
      sum += term;
      if (coeff == 0.0 || std::abs(term) <= 1e-17 * std::abs(sum)) break;
      coeff *= (p - k) / (k + 1.0);
      power *= x;
    }
    return power_signed(w_val, p) * sum;
  }
  return power_signed(w_val + t, p) - power_signed(w_val, p) - p * std::pow(std::abs(w_val), p - 1.0) * t;
}

Projection project(const Field2D& xi, const RadialProfile& z, int m) {
  if (!(xi.s_grid() == z.grid())) throw InvalidArgument("Z does not live on the field's s-grid");
  const auto weights = radial_weights(z.grid(), m);
  const double area = sphere_area(m);
  std::vector<double> g(xi.cols(), 0.0);
  for (std::size_t i = 0; i < xi.rows(); ++i) {
    const double wz = area * weights[i] * z[i];
    if (wz == 0.0) continue;
    for (std::size_t j = 0; j < xi.cols(); ++j) g[j] += wz * xi(i, j);
  }
  Field2D perp = xi;
  for (std::size_t i = 0; i < xi.rows(); ++i)
    for (std::size_t j = 0; j < xi.cols(); ++j) perp(i, j) -= z[i] * g[j];
  return {RadialProfile(xi.r_grid(), std::move(g)), std::move(perp)};
}

double orthogonality_defect(const Field2D& phi, const RadialProfile& z, int m) {
  return project(phi, z, m).g.max_abs();
}

struct PhiSolver::Impl {
  spectrum::LinearizedOperator op;
  RadialProfile z;
  RadialGrid r_grid;
  int n;
  std::size_t ns = 0, nr = 0;  // unknowns in s and r
  Eigen::MatrixXd q;
  Eigen::VectorXd mu;
  Eigen::VectorXd sqrt_w;
  Tridiagonal lap_r;

  Impl(const spectrum::LinearizedOperator& o, const RadialProfile& zz, const RadialGrid& rg, int nn)
      : op(o), z(zz), r_grid(rg), n(nn) {}

  // Mode-wise inverse on the unknowns; the Z mode is dropped.
  Field2D base_solve(const Field2D& xi) const {
    Eigen::MatrixXd y(ns, nr);
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t j = 0; j < nr; ++j) y(i, j) = sqrt_w[i] * xi(i, j);
    Eigen::MatrixXd c = q.transpose() * y;
    c.row(0).setZero();
    Tridiagonal shifted = lap_r;
    std::vector<double> rhs(nr);
    for (std::size_t k = 1; k < ns; ++k) {
      for (std::size_t j = 0; j < nr; ++j) {
        shifted.diag[j] = lap_r.diag[j] + mu[static_cast<Eigen::Index>(k)];
        rhs[j] = c(k, j);
      }
      const auto sol = solve_tridiagonal(shifted, rhs);
      for (std::size_t j = 0; j < nr; ++j) c(k, j) = sol[j];
    }
    const Eigen::MatrixXd phi_y = q * c;
    Field2D out(xi.s_grid(), xi.r_grid());
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t j = 0; j < nr; ++j) out(i, j) = phi_y(i, j) / sqrt_w[i];
    return out;
  }
};

PhiSolver::PhiSolver(const spectrum::LinearizedOperator& op, const RadialProfile& z, const RadialGrid& r_grid, int n)
    : impl_(std::make_unique<Impl>(op, z, r_grid, n)) {
  if (op.sector != 0 || op.first != 0) throw InvalidArgument("the corrector solve needs the radial sector");
  if (!(z.grid() == op.potential.grid())) throw InvalidArgument("Z does not live on the operator grid");
  auto& im = *impl_;
  im.ns = op.unknowns();
  im.nr = r_grid.size() - 1;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(im.ns), static_cast<Eigen::Index>(im.ns));
  for (std::size_t k = 0; k < im.ns; ++k) {
    const auto e = static_cast<Eigen::Index>(k);
    s(e, e) = op.matrix.diag[k];
    if (k + 1 < im.ns) s(e, e + 1) = s(e + 1, e) = op.matrix.off[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition of the s-operator failed");
  im.q = eig.eigenvectors();
  im.mu = eig.eigenvalues();
  if (im.ns < 2 || !(im.mu[0] < 0.0)) throw IllPosedError("the s-operator has no negative direction");
  if (!(im.mu[1] > 0.0))
    throw IllPosedError("the s-operator has a second nonpositive direction (" + std::to_string(im.mu[1]) +
                        "); a single channel cannot absorb it");
  im.sqrt_w.resize(static_cast<Eigen::Index>(im.ns));
  for (std::size_t k = 0; k < im.ns; ++k) im.sqrt_w[static_cast<Eigen::Index>(k)] = std::sqrt(op.weights[k]);
  const auto lap = radial_laplacian(r_grid, n, 0);
  im.lap_r = lap.matrix;
}

PhiSolver::~PhiSolver() = default;
PhiSolver::PhiSolver(PhiSolver&&) noexcept = default;
PhiSolver& PhiSolver::operator=(PhiSolver&&) noexcept = default;

Field2D PhiSolver::apply(const Field2D& phi) const {
  const auto& im = *impl_;
  Field2D out(phi.s_grid(), phi.r_grid());
  std::vector<double> column(phi.rows());
  for (std::size_t j = 0; j < im.nr; ++j) {
    for (std::size_t i = 0; i < phi.rows(); ++i) column[i] = phi(i, j);
    const auto ls = im.op.apply(column);
    for (std::size_t i = 0; i < im.ns; ++i) out(i, j) = ls[i];
  }
  const double coupling = im.lap_r.upper[im.nr - 1];
  for (std::size_t i = 0; i < im.ns; ++i) {
    for (std::size_t j = 0; j < im.nr; ++j) {
      double v = im.lap_r.diag[j] * phi(i, j);
      if (j > 0) v += im.lap_r.lower[j] * phi(i, j - 1);
      v += (j + 1 < im.nr ? im.lap_r.upper[j] : coupling) * phi(i, j + 1);
      out(i, j) += v;
    }
  }
  return out;
}

Field2D PhiSolver::solve(const Field2D& xi_perp) const {
  const auto& im = *impl_;
  if (!(xi_perp.s_grid() == im.z.grid()) || !(xi_perp.r_grid() == im.r_grid))
    throw InvalidArgument("forcing does not live on the solver grids");
  const int m = im.op.m;
  const double scale = xi_perp.max_abs();
  Field2D phi(xi_perp.s_grid(), xi_perp.r_grid());
  last_residual_ = 0.0;
  if (scale == 0.0) return phi;
  phi = im.base_solve(xi_perp);
  std::vector<double> history;
  for (int sweep = 0; sweep < 4; ++sweep) {
    Field2D residual = xi_perp - apply(phi);
    for (std::size_t i = 0; i < residual.rows(); ++i) residual(i, residual.cols() - 1) = 0.0;
    for (std::size_t j = 0; j < residual.cols(); ++j) residual(residual.rows() - 1, j) = 0.0;
    residual = project(residual, im.z, m).xi_perp;
    history.push_back(residual.max_abs() / scale);
    if (history.back() <= 1e-13) break;
    phi += im.base_solve(residual);
  }
  last_residual_ = history.back();
  if (last_residual_ > 1e-10) throw NumericalError("corrector solve did not reach its tolerance", history);
  phi = project(phi, im.z, m).xi_perp;
  return phi;
}

Field2D solve_phi(const Field2D& xi_perp, const spectrum::LinearizedOperator& op, const RadialProfile& z, int n) {
  return PhiSolver(op, z, xi_perp.r_grid(), n).solve(xi_perp);
}

HSolution solve_h(const RadialProfile& g, int n, double lambda, const SplitOptions& options) {
  if (n < 3) throw InvalidArgument("n must be >= 3");
  const auto& grid = g.grid();
  std::vector<double> eta(g.size());
  for (std::size_t i = 0; i < eta.size(); ++i) eta[i] = -g[i];
  const RadialProfile forcing(grid, std::move(eta));
  if (n >= 4) return HSolution{helmholtz::solve_inhomogeneous(n, lambda, forcing).h, std::nullopt, 0, 0, 0, 0};

  if (forcing.max_abs() == 0.0)
    return HSolution{RadialProfile(grid), zero_decomposition(grid, lambda, options.holder_alpha), 0, 0, 0, 0};

  const double zeta = helmholtz::extract_phase(3, lambda).zeta;
  const double k = std::sqrt(lambda);
  const std::size_t lo = grid.index_of(0.5 * grid.r_max()), hi = grid.index_of(0.75 * grid.r_max());
  const auto rows = static_cast<Eigen::Index>(hi - lo + 1);
  Eigen::MatrixXd basis(rows, 10);
  Eigen::VectorXd target(rows);
  for (std::size_t i = lo; i <= hi; ++i) {
    const auto row = static_cast<Eigen::Index>(i - lo);
    const double r = grid.node(i);
    const double th = k * r - zeta;
    const double sn = std::sin(th), cs = std::cos(th);
    const double quad[3] = {sn * sn, cs * cs, sn * cs};
    for (int c = 0; c < 3; ++c) {
      basis(row, c) = quad[c];
      basis(row, 3 + c) = quad[c] / r;
    }
    basis(row, 6) = sn / r;
    basis(row, 7) = cs / r;
    basis(row, 8) = std::sin(3.0 * th) / r;
    basis(row, 9) = std::cos(3.0 * th) / r;
    target[row] = r * r * forcing[i];
  }
  const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(target);
  const double norm = target.norm();
  const double split_residual = norm > 0.0 ? (basis * coef - target).norm() / norm : 0.0;
  if (split_residual > options.tolerance)
    throw DecompositionError("far-field split residual " + std::to_string(split_residual) + " exceeds " +
                                 std::to_string(options.tolerance),
                             {split_residual});
  const double k1 = coef[0], k2 = coef[1], k3 = coef[2];

  std::vector<double> bar(g.size());
  for (std::size_t i = 0; i < bar.size(); ++i) {
    const double r = grid.node(i);
    if (r == 0.0) {
      bar[i] = forcing[i];
      continue;
    }
    const double th = k * r - zeta;
    const double sn = std::sin(th), cs = std::cos(th);
    bar[i] = forcing[i] - helmholtz::cutoff_rho(r) * (k1 * sn * sn + k2 * cs * cs + k3 * sn * cs) / (r * r);
  }
  helmholtz::ResonantOptions resonant;
  resonant.holder_alpha = options.holder_alpha;
  auto decomposition = helmholtz::resonant_solve_n3(lambda, k1, k2, k3, RadialProfile(grid, std::move(bar)), resonant);
  auto h = decomposition.reconstruct();
  return HSolution{std::move(h), std::move(decomposition), k1, k2, k3, split_residual};
}

RadialProfile leading_profile(const ReductionInput& input) {
  const double lambda = input.lambda1();
  return RadialProfile::sample(input.grids.r_grid, [&](double r) {
    return helmholtz::radial_solution(helmholtz::Kind::regular, input.n, 0.0, lambda, r);
  });
}

Field2D assemble_solution(const ReductionInput& input, const CorrectorPair& pair) {
  const auto j = leading_profile(input);
  const auto& z = input.z();
  Field2D u(input.grids.s_grid, input.grids.r_grid);
  for (std::size_t a = 0; a < u.rows(); ++a)
    for (std::size_t b = 0; b < u.cols(); ++b)
      u(a, b) = input.w[a] + z[a] * (input.epsilon * j[b] + pair.h.h[b]) + pair.phi(a, b);
  return u;
}

double pde_residual(const Field2D& u, const ProblemParams& params) {
  const std::size_t rows = u.rows(), cols = u.cols();
  std::vector<double> column(rows), row(cols);
  std::vector<double> lap(rows * cols, 0.0);
  for (std::size_t b = 0; b + 1 < cols; ++b) {
    for (std::size_t a = 0; a < rows; ++a) column[a] = u(a, b);
    for (std::size_t a = 0; a + 1 < rows; ++a) lap[a * cols + b] += minus_laplacian_at(column, u.s_grid(), params.m, a);
  }
  double worst = 0.0;
  for (std::size_t a = 0; a + 1 < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) row[b] = u(a, b);
    for (std::size_t b = 0; b + 1 < cols; ++b) {
      const double v = u(a, b);
      const double res = lap[a * cols + b] + minus_laplacian_at(row, u.r_grid(), params.n, b) + v -
                         power_signed(v, params.p);
      worst = std::max(worst, std::abs(res));
    }
  }
  return worst;
}

double asymptotic_ratio(const ReductionInput& input, const Field2D& u) {
  if (input.epsilon == 0.0) return 0.0;
  const auto j = leading_profile(input);
  const auto& z = input.z();
  double worst = 0.0;
  for (std::size_t a = 0; a < u.rows(); ++a)
    for (std::size_t b = 0; b < u.cols(); ++b)
      worst = std::max(worst, std::abs(u(a, b) - input.w[a] - input.epsilon * z[a] * j[b]));
  return worst / std::abs(input.epsilon);
}

std::vector<AsymptoticRow> asymptotic_check(std::vector<AsymptoticRow> rows) {
  if (rows.size() < 2) throw InvalidArgument("the asymptotic check needs at least two epsilon values");
  std::sort(rows.begin(), rows.end(),
            [](const AsymptoticRow& a, const AsymptoticRow& b) { return std::abs(a.epsilon) > std::abs(b.epsilon); });
  std::vector<double> ratios;
  for (const auto& row : rows) ratios.push_back(row.ratio);
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].ratio < rows[i - 1].ratio))
      throw AsymptoticsViolation("asymptotic ratio does not decrease between epsilon = " +
                                     std::to_string(rows[i - 1].epsilon) + " and " + std::to_string(rows[i].epsilon),
                                 ratios);
  return rows;
}

std::pair<CorrectorPair, IterationReport> picard_iterate(const ReductionInput& input, const PicardConfig& config) {
  input.validate(config.epsilon_max);
  const ProblemParams& params = input.state.params;
  const auto& sg = input.grids.s_grid;
  const auto& rg = input.grids.r_grid;
  const auto& z = input.z();
  const double lambda = input.lambda1();
  const int n = input.n;
  const double beta = 0.5 * (n - 1);
  const auto j = leading_profile(input);
  const PhiSolver solver(input.op, z, rg, n);

  auto nonlinear_field = [&](const RadialProfile& h, const Field2D& phi) {
    Field2D out(sg, rg);
    for (std::size_t a = 0; a < out.rows(); ++a)
      for (std::size_t b = 0; b < out.cols(); ++b)
        out(a, b) = nonlinearity(input.w[a], z[a], input.epsilon * j[b] + h[b], phi(a, b), params.p);
    return out;
  };

  HSolution h{RadialProfile(rg), std::nullopt, 0, 0, 0, 0};
  if (n == 3) h.decomposition = zero_decomposition(rg, lambda, config.holder_alpha);
  Field2D phi(sg, rg);
  IterationReport report;
  double damping = config.damping;
  bool damped = false;
  int growth = 0;

  for (int outer = 1; outer <= config.max_outer; ++outer) {
    const Field2D phi_before = phi;
    int inner = 0;
    bool inner_done = false;
    while (inner < config.max_inner && !inner_done) {
      ++inner;
      const auto proj = project(nonlinear_field(h.h, phi), z, params.m);
      Field2D next = solver.solve(proj.xi_perp);
      inner_done = sup_difference(next.values(), phi.values()) <= config.tolerance;
      phi = std::move(next);
    }
    if (!inner_done) {
      report.failure = "corrector iteration did not converge within " + std::to_string(config.max_inner) + " steps";
      report.iterations = outer;
      throw PicardError(report.failure, report);
    }
    const auto g = project(nonlinear_field(h.h, phi), z, params.m).g;
    HSolution next = blend(h, solve_h(g, n, lambda, config.split), damping);

    IterationRecord rec;
    rec.outer = outer;
    rec.inner_iterations = inner;
    rec.dh_norm = h_increment_norm(next, h, n, config.holder_alpha);
    rec.dh_sup = sup_difference(next.h.values(), h.h.values());
    rec.dphi_sup = sup_difference(phi.values(), phi_before.values());
    rec.dphi_norm = norms::norm_weighted_holder(phi - phi_before, beta, config.holder_alpha);
    rec.orthogonality_defect = orthogonality_defect(phi, z, params.m);
    rec.damping = damping;
    if (!report.records.empty() && report.records.back().dh_norm > 0.0)
      rec.contraction = rec.dh_norm / report.records.back().dh_norm;
    growth = (!report.records.empty() && rec.dh_sup > report.records.back().dh_sup) ? growth + 1 : 0;
    report.records.push_back(rec);
    report.iterations = outer;
    h = std::move(next);

    if (rec.dh_sup <= config.tolerance && rec.dphi_sup <= config.tolerance) {
      report.converged = true;
      break;
    }
    if (growth >= 3) {
      if (damped) {
        report.failure = "fixed-point increments grew over three consecutive steps";
        throw PicardError(report.failure, report);
      }
      damped = true;
      damping = 0.5 * config.damping;
      growth = 0;
    }
  }
  if (!report.converged) {
    report.failure = "no convergence within " + std::to_string(config.max_outer) + " outer iterations";
    throw PicardError(report.failure, report);
  }
  if (report.records.size() >= 2) report.contraction_estimate = report.records[1].contraction;

  CorrectorPair pair{std::move(h), std::move(phi), 0.0};
  pair.orthogonality_defect = orthogonality_defect(pair.phi, z, params.m);
  Field2D base(sg, rg);
  for (std::size_t a = 0; a < base.rows(); ++a)
    for (std::size_t b = 0; b < base.cols(); ++b) base(a, b) = input.w[a];
  report.baseline_residual = pde_residual(base, params);
  report.pde_residual = pde_residual(assemble_solution(input, pair), params);
  return {std::move(pair), std::move(report)};
}

}  // namespace dancer::reduction
