#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "panelscope/panel.hpp"
#include "panelscope/sampling.hpp"

namespace panelscope {

struct PlotSpec {
  std::string y_col;
  /// Empty means the panel index.
  std::string x_col;
  int width_px = 960;
  int height_px = 720;
  int n_cols = 4;
  std::string title;
  /// Replaces the five evenly spaced x ticks when non-empty.
  std::vector<double> x_breaks;
  /// When non-empty, these keys are drawn in colour over grey background lines.
  std::vector<std::string> highlight;
  std::string stroke = "#2b2b2b";
};

/// Faceted line plot as a standalone SVG 1.1 document.
///
/// One `<g class="panel">` per facet laid out n_cols wide, each with a facet
/// label, axis ticks and one `<polyline>` per allocated key (vertices in
/// index order, rows with a missing x or y skipped). Every panel shares the
/// same x and y ranges.
///
/// Throws InvalidArgument for a bad spec, UnknownColumn/TypeMismatch for the
/// plotted columns, and KeyMismatch for an allocated key absent from `table`.
std::string render_facets_svg(const PanelTable& table, const KeyAllocation& alloc,
                              const PlotSpec& spec);

/// render_facets_svg written to `path`; throws IoError.
void render_facets(const PanelTable& table, const KeyAllocation& alloc, const PlotSpec& spec,
                   const std::filesystem::path& path);

}  // namespace panelscope
