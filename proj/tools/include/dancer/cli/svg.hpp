#pragma once

#include <string>
#include <vector>

#include "dancer/grid.hpp"

namespace dancer::cli::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  /// Plot log10 |y|; points with y = 0 are dropped.
  bool log_y = false;
  bool log_x = false;
  /// Written verbatim into a leading XML comment.
  std::string provenance;
};

/// Standalone SVG line chart with axes, ticks and a legend.
std::string line_plot(const std::vector<Series>& series, const PlotOptions& options);

/// Standalone SVG heat map of a field over (r, s), r horizontal, with a
/// diverging colour scale symmetric about 0. Fields larger than
/// max_cells per axis are subsampled.
std::string heatmap(const Field2D& field, const PlotOptions& options, std::size_t max_cells = 120);

}  // namespace dancer::cli::svg
