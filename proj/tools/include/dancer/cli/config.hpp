#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dancer/grid.hpp"
#include "dancer/params.hpp"
#include "dancer/reduction.hpp"

#include "json.hpp"

namespace dancer::cli {

enum class Command { ground_state, spectrum, helmholtz, construct, sweep, validate_exponents };

/// Parses "ground-state", "spectrum", ...; throws ConfigError on anything else.
Command parse_command(const std::string& name);
std::string command_name(Command command);

struct HelmholtzConfig {
  /// Spectral parameter; when absent, λ1 of the configured bound state is used.
  std::optional<double> lambda;
  /// Source points a_k of the superposition Σ J(√λ |y - a_k|).
  std::vector<std::vector<double>> sources;
  /// Superposition samples on the (y1, y2) square [-half_width, half_width]².
  double half_width = 8.0;
  double slice_step = 0.5;
  /// Forcing (1 + r²)^{-power/2} of the inhomogeneous solve.
  double forcing_power = 4.0;
  /// Resonant coefficients for n = 3.
  double k1 = 0.0, k2 = 0.0, k3 = 0.0;
};

struct RunConfig {
  Command command = Command::ground_state;
  ProblemParams params;
  int node_count = 0;
  RadialGrid ode_grid{20.0, 1.0 / 128.0};
  double bound_tolerance = 1e-12;
  int eigen_count = 3;
  int sector = 0;
  reduction::ReductionGrids grids;
  double epsilon = 0.01;
  std::vector<double> epsilons{0.02, 0.01, 0.005};
  reduction::PicardConfig picard;
  HelmholtzConfig helmholtz;
  int workers = 2;
  bool override_exponents = false;
  std::filesystem::path out = "dancer-out";
};

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::filesystem::path> out;
  std::optional<double> epsilon;
  bool override_exponents = false;
};

/// Builds a RunConfig from a JSON document. Unknown keys, wrong types and
/// out-of-range values raise ConfigError naming the dotted field path.
RunConfig parse_config(Command command, const nlohmann::json& doc, const Overrides& overrides = {});

/// Reads and parses a config file; a syntax error is reported against "<root>".
RunConfig load_config(Command command, const std::filesystem::path& path, const Overrides& overrides = {});

/// Full effective configuration, sufficient to reproduce a run.
nlohmann::json snapshot(const RunConfig& config);

}  // namespace dancer::cli
