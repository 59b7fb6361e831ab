#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dancer/grid.hpp"
#include "dancer/helmholtz.hpp"
#include "dancer/norms.hpp"
#include "dancer/radial_ode.hpp"
#include "dancer/reduction.hpp"
#include "dancer/spectrum.hpp"

#include "json.hpp"

namespace dancer::cli {

using Json = nlohmann::json;

/// 17 significant digits ("%.17g").
std::string format_double(double v);

/// CSV with header "r,value", one row per node.
std::string profile_csv(const RadialProfile& profile);

/// CSV with header "s,r,value", s as the slow index.
std::string field_csv(const Field2D& field);

/// CSV with header "y1,...,yn,value".
std::string superposition_csv(const helmholtz::SourceSet& sources, std::span<const std::vector<double>> points);

/// CSV with a header row and one row per record, all values at 17 digits.
std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

Json to_json(const RadialGrid& grid);
Json to_json(const ProblemParams& params);
/// {m, n, p, node_count, center_value, ode_residual, r_max, step}
Json to_json(const radial::BoundState& state);
/// {eigenvalues, k, l}
Json to_json(const spectrum::SpectrumResult& result);
/// {c1, zeta, K, holder_alpha}
Json to_json(const helmholtz::PAlphaDecomposition& decomp);
/// {kind, parameter, value, tail_bound, grid}; an infinite tail bound is "inf".
Json to_json(const norms::NormReport& report);
Json to_json(const reduction::IterationReport& report);

/// Pretty-printed, key-sorted, newline-terminated.
std::string dump(const Json& json);

/// Writes text to path, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace dancer::cli
