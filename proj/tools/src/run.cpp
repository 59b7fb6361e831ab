#include "dancer/cli/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "dancer/cli/errors.hpp"
#include "dancer/cli/exponents.hpp"
#include "dancer/cli/svg.hpp"
#include "dancer/helmholtz.hpp"
#include "dancer/norms.hpp"
#include "dancer/reduction.hpp"
#include "dancer/spectrum.hpp"

namespace dancer::cli {

namespace fs = std::filesystem;

namespace {

std::string provenance(const RunConfig& c, const std::string& what) {
  return "dancer-forge " + command_name(c.command) + ": " + what + "; m=" + std::to_string(c.params.m) +
         " n=" + std::to_string(c.params.n) + " p=" + format_double(c.params.p);
}

svg::Series series_of(const std::string& name, const RadialProfile& f) {
  svg::Series s{name, {}, {}};
  for (std::size_t i = 0; i < f.size(); ++i) {
    s.x.push_back(f.grid().node(i));
    s.y.push_back(f[i]);
  }
  return s;
}

Json exponent_json(const ExponentReport& r) {
  return {{"main0", r.main0},
          {"corollary", r.corollary},
          {"main1", r.main1},
          {"main1_prime", r.main1_prime},
          {"theorem", r.theorem()}};
}

void write_config(const RunConfig& c, const fs::path& dir) { write_text(dir / "config.json", dump(snapshot(c))); }

void check_exponents(const RunConfig& c) {
  const auto report = validate_exponents(c.params);
  if (!construct_admissible(report) && !c.override_exponents)
    throw ExponentRefusal("(n, p) = (" + std::to_string(c.params.n) + ", " + format_double(c.params.p) +
                              ") lies outside every window covered by the radial construction",
                          exponent_json(report));
}

Json run_ground_state(const RunConfig& c) {
  const auto state = bound_state(c);
  write_config(c, c.out);
  write_text(c.out / "bound_state.json", dump(to_json(state)));
  write_text(c.out / "w.csv", profile_csv(state.profile));
  write_text(c.out / "profiles.svg",
             svg::line_plot({series_of("w", state.profile)},
                            {"Bound state", "r", "w(r)", false, false, provenance(c, "bound state profile")}));
  return to_json(state);
}

Json run_spectrum(const RunConfig& c) {
  const auto state = bound_state(c);
  const auto op = spectrum::assemble_linearized(state, c.sector);
  const auto result = spectrum::eigenpairs(op, c.eigen_count);
  write_config(c, c.out);
  write_text(c.out / "bound_state.json", dump(to_json(state)));
  write_text(c.out / "spectrum.json", dump(to_json(result)));
  std::vector<svg::Series> curves;
  for (std::size_t k = 0; k < result.pairs.size(); ++k) {
    const auto& f = result.pairs[k].eigenfunction;
    write_text(c.out / ("eigenfunction_" + std::to_string(k) + ".csv"), profile_csv(f));
    curves.push_back(series_of("mode " + std::to_string(k) + " (" + format_double(result.pairs[k].eigenvalue).substr(0, 8) + ")", f));
  }
  write_text(c.out / "profiles.svg",
             svg::line_plot(curves, {"Eigenfunctions of the linearized operator", "r", "Z", false, false,
                                     provenance(c, "sector " + std::to_string(c.sector))}));
  return to_json(result);
}

double default_lambda(const RunConfig& c) {
  if (c.helmholtz.lambda) return *c.helmholtz.lambda;
  const auto state = bound_state(c);
  const auto spec = spectrum::eigenpairs(spectrum::assemble_linearized(state, 0), 1);
  if (!(spec.pairs.front().eigenvalue < 0.0))
    throw IllPosedError("the linearized operator has no negative eigenvalue to supply lambda");
  return -spec.pairs.front().eigenvalue;
}

Json run_helmholtz(const RunConfig& c) {
  const int n = c.params.n;
  const double lambda = default_lambda(c);
  const auto& grid = c.grids.r_grid;
  const auto& h = c.helmholtz;
  write_config(c, c.out);

  const auto j = RadialProfile::sample(
      grid, [&](double r) { return helmholtz::radial_solution(helmholtz::Kind::regular, n, 0.0, lambda, r); });
  write_text(c.out / "J.csv", profile_csv(j));
  std::vector<std::vector<double>> singular;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double r = grid.node(i);
    singular.push_back({r, helmholtz::radial_solution(helmholtz::Kind::singular, n, 0.0, lambda, r)});
  }
  write_text(c.out / "N.csv", table_csv({"r", "value"}, singular));

  helmholtz::SourceSet sources{n, lambda, h.sources};
  sources.validate();
  std::vector<std::vector<double>> points;
  const auto half = static_cast<long>(std::floor(h.half_width / h.slice_step + 1e-9));
  for (long a = -half; a <= half; ++a)
    for (long b = -half; b <= half; ++b) {
      std::vector<double> y(static_cast<std::size_t>(n), 0.0);
      y[0] = static_cast<double>(a) * h.slice_step;
      y[1] = static_cast<double>(b) * h.slice_step;
      points.push_back(std::move(y));
    }
  write_text(c.out / "superposition.csv", superposition_csv(sources, points));

  const auto eta = RadialProfile::sample(grid, [&](double r) { return std::pow(1.0 + r * r, -0.5 * h.forcing_power); });
  Json summary = {{"lambda", lambda}, {"n", n}};
  std::vector<svg::Series> curves{series_of("J", j)};
  if (n == 3) {
    helmholtz::ResonantOptions options;
    options.holder_alpha = c.picard.holder_alpha;
    const auto decomp = helmholtz::resonant_solve_n3(lambda, h.k1, h.k2, h.k3, eta, options);
    const auto sol = decomp.reconstruct();
    write_text(c.out / "decomposition.json", dump(to_json(decomp)));
    write_text(c.out / "remainder.csv", profile_csv(decomp.remainder));
    write_text(c.out / "h.csv", profile_csv(sol));
    write_text(c.out / "norms.json", dump(Json::array({to_json(norms::report_sharp(decomp))})));
    summary["decomposition"] = to_json(decomp);
    curves.push_back(series_of("h", sol));
  } else {
    const auto sol = helmholtz::solve_inhomogeneous(n, lambda, eta);
    write_text(c.out / "h.csv", profile_csv(sol.h));
    const auto report = norms::report_hat(sol.h, 0.5 * (n - 1), c.picard.holder_alpha);
    write_text(c.out / "norms.json", dump(Json::array({to_json(report)})));
    summary["hat_norm"] = report.value;
    summary["decay_warning"] = sol.decay_warning;
    curves.push_back(series_of("h", sol.h));
  }
  const auto phase = helmholtz::extract_phase(n, lambda);
  summary["phase"] = {{"zeta", phase.zeta}, {"amplitude", phase.amplitude}, {"residual", phase.residual}};
  write_text(c.out / "phase.json", dump(summary["phase"]));
  write_text(c.out / "profiles.svg",
             svg::line_plot(curves, {"Radial Helmholtz solutions", "r", "value", false, false,
                                     provenance(c, "lambda=" + format_double(lambda))}));
  return summary;
}

std::string convergence_svg(const RunConfig& c, const std::vector<reduction::IterationRecord>& records,
                            const std::string& what) {
  svg::Series dh{"|dh|", {}, {}}, dphi{"|dPhi|", {}, {}};
  for (const auto& r : records) {
    dh.x.push_back(r.outer);
    dh.y.push_back(r.dh_norm);
    dphi.x.push_back(r.outer);
    dphi.y.push_back(r.dphi_norm);
  }
  return svg::line_plot({dh, dphi}, {"Fixed-point increments", "outer iteration", "increment norm", true, false,
                                     provenance(c, what)});
}

std::string ratio_svg(const RunConfig& c, const std::vector<RunSummary>& runs) {
  svg::Series s{"ratio", {}, {}};
  for (const auto& r : runs) {
    s.x.push_back(r.epsilon);
    s.y.push_back(r.asymptotic_ratio);
  }
  return svg::line_plot({s}, {"Asymptotic ratio |u - w - eps Z J|_inf / eps", "epsilon", "ratio", true, true,
                              provenance(c, "asymptotic ratio")});
}

std::vector<std::string> asymptotic_header(bool with_c1) {
  std::vector<std::string> h{"epsilon",      "ratio",       "iterations", "contraction_estimate",
                             "pde_residual", "baseline_residual", "min_value"};
  if (with_c1) h.push_back("c1");
  return h;
}

std::vector<double> asymptotic_row(const RunSummary& s) {
  std::vector<double> row{s.epsilon,      s.asymptotic_ratio,  static_cast<double>(s.iterations),
                          s.contraction_estimate, s.pde_residual, s.baseline_residual, s.min_value};
  if (s.c1) row.push_back(*s.c1);
  return row;
}

Json run_construct(const RunConfig& c) {
  check_exponents(c);
  const auto state = bound_state(c);
  return construct_run(c, state, c.out).to_json();
}

Json run_sweep(const RunConfig& c) {
  check_exponents(c);
  const auto state = bound_state(c);
  write_config(c, c.out);
  const std::size_t count = c.epsilons.size();
  std::vector<std::optional<RunSummary>> results(count);
  std::vector<Json> failures(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < count;) {
      RunConfig member = c;
      member.command = Command::construct;
      member.epsilon = c.epsilons[k];
      member.epsilons = {};
      const fs::path dir = c.out / ("run_" + std::to_string(k));
      try {
        results[k] = construct_run(member, state, dir);
      } catch (const std::exception& e) {
        failures[k] = {{"epsilon", member.epsilon}, {"message", e.what()}};
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(c.workers), count);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<RunSummary> done;
  Json runs = Json::array(), failed = Json::array();
  for (std::size_t k = 0; k < count; ++k) {
    if (results[k]) {
      done.push_back(*results[k]);
      runs.push_back(results[k]->to_json());
    } else {
      failed.push_back(failures[k]);
    }
  }
  std::vector<std::vector<double>> rows;
  for (const auto& s : done) rows.push_back(asymptotic_row(s));
  write_text(c.out / "asymptotics.csv", table_csv(asymptotic_header(c.params.n == 3), rows));
  write_text(c.out / "asymptotic_ratio.svg", ratio_svg(c, done));

  Json summary = {{"runs", runs}, {"failed", failed}};
  std::optional<AsymptoticsViolation> violation;
  if (failed.empty()) {
    std::vector<reduction::AsymptoticRow> table;
    for (const auto& s : done) table.push_back({s.epsilon, s.asymptotic_ratio});
    try {
      reduction::asymptotic_check(table);
      summary["asymptotics"] = "decreasing";
    } catch (const AsymptoticsViolation& e) {
      summary["asymptotics"] = e.what();
      violation = e;
    }
  }
  write_text(c.out / "sweep.json", dump(summary));
  if (!failed.empty()) throw ConvergenceError(std::to_string(failed.size()) + " sweep run(s) failed; see sweep.json");
  if (violation) throw *violation;
  return summary;
}

Json run_validate(const RunConfig& c) {
  const auto report = exponent_json(validate_exponents(c.params));
  write_config(c, c.out);
  write_text(c.out / "exponents.json", dump(report));
  return report;
}

const char* error_kind(const NumericalError& e) {
  if (dynamic_cast<const reduction::PicardError*>(&e)) return "picard";
  if (dynamic_cast<const NoBracketError*>(&e)) return "no_bracket";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
  if (dynamic_cast<const IllPosedError*>(&e)) return "ill_posed";
  if (dynamic_cast<const ResolutionError*>(&e)) return "resolution";
  if (dynamic_cast<const ContractViolation*>(&e)) return "contract_violation";
  if (dynamic_cast<const DecompositionError*>(&e)) return "decomposition";
  if (dynamic_cast<const AsymptoticsViolation*>(&e)) return "asymptotics_violation";
  return "numerical";
}

}  // namespace

Json RunSummary::to_json() const {
  Json j = {{"epsilon", epsilon},
            {"lambda1", lambda1},
            {"iterations", iterations},
            {"contraction_estimate", contraction_estimate},
            {"asymptotic_ratio", asymptotic_ratio},
            {"pde_residual", pde_residual},
            {"baseline_residual", baseline_residual},
            {"orthogonality_defect", orthogonality_defect},
            {"min_value", min_value},
            {"positive", min_value > 0.0}};
  if (c1) j["c1"] = *c1;
  return j;
}

radial::BoundState bound_state(const RunConfig& config) {
  radial::BoundStateOptions options;
  options.tol = config.bound_tolerance;
  return radial::find_bound_state(config.params, config.node_count, config.ode_grid, options);
}

RunSummary construct_run(const RunConfig& c, const radial::BoundState& state, const fs::path& dir) {
  write_config(c, dir);
  write_text(dir / "exponents.json", dump(exponent_json(validate_exponents(c.params))));
  const auto input = reduction::make_input(state, c.params.n, c.epsilon, c.grids);
  auto [pair, report] = [&] {
    try {
      return reduction::picard_iterate(input, c.picard);
    } catch (const reduction::PicardError& e) {
      write_text(dir / "iteration_report.json", dump(to_json(e.report())));
      throw;
    }
  }();
  const auto u = reduction::assemble_solution(input, pair);
  const auto j = reduction::leading_profile(input);

  RunSummary s;
  s.epsilon = c.epsilon;
  s.lambda1 = input.lambda1();
  s.iterations = report.iterations;
  s.contraction_estimate = report.contraction_estimate;
  s.asymptotic_ratio = reduction::asymptotic_ratio(input, u);
  s.pde_residual = report.pde_residual;
  s.baseline_residual = report.baseline_residual;
  s.orthogonality_defect = pair.orthogonality_defect;
  s.min_value = *std::min_element(u.values().begin(), u.values().end());
  if (pair.h.decomposition) s.c1 = pair.h.decomposition->c1;

  write_text(dir / "bound_state.json", dump(to_json(state)));
  write_text(dir / "w.csv", profile_csv(input.w));
  write_text(dir / "Z.csv", profile_csv(input.z()));
  write_text(dir / "J.csv", profile_csv(j));
  write_text(dir / "h.csv", profile_csv(pair.h.h));
  write_text(dir / "phi.csv", field_csv(pair.phi));
  write_text(dir / "u.csv", field_csv(u));
  write_text(dir / "iteration_report.json", dump(to_json(report)));
  write_text(dir / "summary.json", dump(s.to_json()));

  std::vector<std::vector<double>> residual_rows;
  for (const auto& r : report.records)
    residual_rows.push_back({static_cast<double>(r.outer), static_cast<double>(r.inner_iterations), r.dh_norm,
                             r.dphi_norm, r.dh_sup, r.dphi_sup, r.contraction, r.orthogonality_defect, r.damping});
  write_text(dir / "residuals.csv",
             table_csv({"outer", "inner_iterations", "dh_norm", "dphi_norm", "dh_sup", "dphi_sup", "contraction",
                        "orthogonality_defect", "damping"},
                       residual_rows));
  write_text(dir / "asymptotics.csv", table_csv(asymptotic_header(s.c1.has_value()), {asymptotic_row(s)}));

  const double beta = 0.5 * (c.params.n - 1);
  Json norm_reports = Json::array();
  if (pair.h.decomposition) {
    write_text(dir / "decomposition.json", dump(to_json(*pair.h.decomposition)));
    write_text(dir / "remainder.csv", profile_csv(pair.h.decomposition->remainder));
    norm_reports.push_back(to_json(norms::report_sharp(*pair.h.decomposition)));
  } else {
    norm_reports.push_back(to_json(norms::report_hat(pair.h.h, beta, c.picard.holder_alpha)));
  }
  norm_reports.push_back(to_json(norms::report_weighted_holder(pair.phi, beta, c.picard.holder_alpha)));
  write_text(dir / "norms.json", dump(norm_reports));

  const std::string tag = "epsilon=" + format_double(c.epsilon);
  auto scaled_j = j;
  for (std::size_t i = 0; i < scaled_j.size(); ++i) scaled_j[i] *= c.epsilon;
  write_text(dir / "profiles.svg",
             svg::line_plot({series_of("w(s)", input.w), series_of("Z(s)", input.z()), series_of("eps J(r)", scaled_j),
                             series_of("h(r)", pair.h.h)},
                            {"Radial profiles", "s or r", "value", false, false, provenance(c, tag)}));
  write_text(dir / "phi_heatmap.svg",
             svg::heatmap(pair.phi, {"Corrector Phi(s, r)", "r", "s", false, false, provenance(c, tag)}));
  write_text(dir / "convergence.svg", convergence_svg(c, report.records, tag));
  write_text(dir / "asymptotic_ratio.svg", ratio_svg(c, {s}));
  return s;
}

Json run(const RunConfig& config) {
  switch (config.command) {
    case Command::ground_state: return run_ground_state(config);
    case Command::spectrum: return run_spectrum(config);
    case Command::helmholtz: return run_helmholtz(config);
    case Command::construct: return run_construct(config);
    case Command::sweep: return run_sweep(config);
    case Command::validate_exponents: return run_validate(config);
  }
  throw ConfigError("command", "unhandled command");
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dancer-type entire solutions by Lyapunov-Schmidt reduction", "dancer-forge"};
  std::string command, config_path;
  Overrides overrides;
  std::optional<std::string> out_dir;
  app.add_option("command", command,
                 "ground-state | spectrum | helmholtz | construct | sweep | validate-exponents")
      ->required();
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "artifact directory (overrides the config's out)");
  app.add_option("--epsilon", overrides.epsilon, "amplitude (overrides the config's epsilon)");
  app.add_flag("--override-exponents", overrides.override_exponents,
               "run construct/sweep outside the admissible exponent windows");

  auto fail = [&](int code, Json diag) {
    err << dump(diag);
    return code;
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ExitCode::ok;
  } catch (const CLI::ParseError& e) {
    return fail(ExitCode::config_error, {{"error", "config"}, {"field", "<argv>"}, {"message", e.what()}});
  }
  if (out_dir) overrides.out = *out_dir;

  try {
    const Command cmd = parse_command(command);
    const RunConfig config = load_config(cmd, config_path, overrides);
    out << dump(run(config));
    return ExitCode::ok;
  } catch (const ConfigError& e) {
    return fail(ExitCode::config_error, {{"error", "config"}, {"field", e.field()}, {"message", e.what()}});
  } catch (const ExponentRefusal& e) {
    return fail(ExitCode::exponent_refusal,
                {{"error", "exponent_window"}, {"message", e.what()}, {"exponents", e.report()}});
  } catch (const NumericalError& e) {
    Json diag = {{"error", "numerical"}, {"kind", error_kind(e)}, {"message", e.what()}, {"history", e.history()}};
    if (const auto* p = dynamic_cast<const reduction::PicardError*>(&e)) diag["report"] = to_json(p->report());
    return fail(ExitCode::numerical_failure, diag);
  } catch (const InvalidArgument& e) {
    return fail(ExitCode::config_error, {{"error", "config"}, {"field", "<pipeline>"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    return fail(1, {{"error", "internal"}, {"message", e.what()}});
  }
}

}  // namespace dancer::cli
