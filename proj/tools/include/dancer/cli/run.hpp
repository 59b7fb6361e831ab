#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "dancer/cli/config.hpp"
#include "dancer/cli/io.hpp"
#include "dancer/radial_ode.hpp"

namespace dancer::cli {

/// Headline numbers of one construct run.
struct RunSummary {
  double epsilon = 0.0;
  double lambda1 = 0.0;
  int iterations = 0;
  double contraction_estimate = 0.0;
  double asymptotic_ratio = 0.0;
  double pde_residual = 0.0;
  double baseline_residual = 0.0;
  double orthogonality_defect = 0.0;
  double min_value = 0.0;
  /// Present for n = 3.
  std::optional<double> c1;

  Json to_json() const;
};

/// Bound state for the configured parameters and ODE grid.
radial::BoundState bound_state(const RunConfig& config);

/// Runs one construct pipeline on a precomputed bound state and writes every
/// artifact into dir. Throws the pipeline's error after writing whatever
/// diagnostics exist (the iteration report of a failed fixed point).
RunSummary construct_run(const RunConfig& config, const radial::BoundState& state, const std::filesystem::path& dir);

/// Executes the configured command, writing artifacts under config.out, and
/// returns a JSON summary. Throws ConfigError, ExponentRefusal, NumericalError.
Json run(const RunConfig& config);

/// Raised when no existence statement admits (n, p) and no override is set.
class ExponentRefusal : public Error {
 public:
  ExponentRefusal(const std::string& what, Json report) : Error(what), report_(std::move(report)) {}
  const Json& report() const noexcept { return report_; }

 private:
  Json report_;
};

/// Full command-line entry: parses argv, runs, prints the summary JSON to out
/// or a diagnostic JSON to err, and returns the exit code
/// (0 ok, 2 config, 3 numerical, 4 exponent refusal, 1 anything else).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dancer::cli
