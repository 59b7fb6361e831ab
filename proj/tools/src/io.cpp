#include "dancer/cli/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dancer/cli/errors.hpp"

namespace dancer::cli {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string profile_csv(const RadialProfile& profile) {
  std::string out = "r,value\n";
  for (std::size_t i = 0; i < profile.size(); ++i)
    out += format_double(profile.grid().node(i)) + "," + format_double(profile[i]) + "\n";
  return out;
}

std::string field_csv(const Field2D& field) {
  std::string out = "s,r,value\n";
  for (std::size_t a = 0; a < field.rows(); ++a) {
    const std::string s = format_double(field.s_grid().node(a)) + ",";
    for (std::size_t b = 0; b < field.cols(); ++b)
      out += s + format_double(field.r_grid().node(b)) + "," + format_double(field(a, b)) + "\n";
  }
  return out;
}

std::string superposition_csv(const helmholtz::SourceSet& sources, std::span<const std::vector<double>> points) {
  std::string out;
  for (int k = 1; k <= sources.n; ++k) out += "y" + std::to_string(k) + ",";
  out += "value\n";
  for (const auto& y : points) {
    for (double c : y) out += format_double(c) + ",";
    out += format_double(helmholtz::superpose(sources, y)) + "\n";
  }
  return out;
}

std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + format_double(row[k]);
    out += "\n";
  }
  return out;
}

Json to_json(const RadialGrid& grid) { return {{"r_max", grid.r_max()}, {"step", grid.step()}}; }

Json to_json(const ProblemParams& params) { return {{"m", params.m}, {"n", params.n}, {"p", params.p}}; }

Json to_json(const radial::BoundState& state) {
  return {{"m", state.params.m},
          {"n", state.params.n},
          {"p", state.params.p},
          {"node_count", state.node_count},
          {"center_value", state.center_value},
          {"ode_residual", state.ode_residual},
          {"r_max", state.profile.grid().r_max()},
          {"step", state.profile.grid().step()}};
}

Json to_json(const spectrum::SpectrumResult& result) {
  Json values = Json::array();
  for (const auto& pair : result.pairs) values.push_back(pair.eigenvalue);
  return {{"eigenvalues", values}, {"k", result.k}, {"l", result.l}};
}

Json to_json(const helmholtz::PAlphaDecomposition& decomp) {
  return {{"c1", decomp.c1}, {"zeta", decomp.zeta}, {"K", decomp.K}, {"holder_alpha", decomp.holder_alpha}};
}

Json to_json(const norms::NormReport& report) {
  Json grids = Json::array();
  for (const auto& g : report.grids) grids.push_back(to_json(g));
  return {{"kind", std::string(norms::tag_name(report.kind.tag))},
          {"parameter", report.kind.parameter},
          {"value", report.value},
          {"tail_bound", std::isfinite(report.tail_bound) ? Json(report.tail_bound) : Json("inf")},
          {"grid", grids}};
}

Json to_json(const reduction::IterationReport& report) {
  Json records = Json::array();
  for (const auto& r : report.records)
    records.push_back({{"outer", r.outer},
                       {"inner_iterations", r.inner_iterations},
                       {"dh_norm", r.dh_norm},
                       {"dphi_norm", r.dphi_norm},
                       {"dh_sup", r.dh_sup},
                       {"dphi_sup", r.dphi_sup},
                       {"contraction", r.contraction},
                       {"orthogonality_defect", r.orthogonality_defect},
                       {"damping", r.damping}});
  return {{"records", records},
          {"iterations", report.iterations},
          {"converged", report.converged},
          {"pde_residual", report.pde_residual},
          {"baseline_residual", report.baseline_residual},
          {"contraction_estimate", report.contraction_estimate},
          {"failure", report.failure}};
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace dancer::cli
