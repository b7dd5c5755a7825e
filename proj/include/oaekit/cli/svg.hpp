#pragma once

#include <string>
#include <vector>

#include "oaekit/analysis/tables.hpp"

namespace oaekit::cli {

enum class ChartKind { line, bar };

struct ChartLabels {
  std::string title;
  std::string x;
  std::string y;
};

// Self-contained SVG: one polyline (or bar group) per series with error bars.
std::string render_svg(const std::vector<analysis::PlotPoint>& points, ChartKind kind, const ChartLabels& labels);

// Parses the TSV written by analysis::format_tsv.
std::vector<analysis::PlotPoint> parse_tsv(const std::string& text, const std::string& source);

}  // namespace oaekit::cli
