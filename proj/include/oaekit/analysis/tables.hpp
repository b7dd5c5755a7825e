#pragma once

#include <string>
#include <vector>

#include "oaekit/analysis/demographics.hpp"
#include "oaekit/analysis/ols.hpp"
#include "oaekit/analysis/stats.hpp"

namespace oaekit::analysis {

// One row of a plot-data TSV: series, x, y, err_low, err_high.
struct PlotPoint {
  std::string series;
  double x = 0.0;
  double y = 0.0;
  double err_low = 0.0;
  double err_high = 0.0;
};

std::string format_tsv(const std::vector<PlotPoint>& points);

// "1000Hz"
std::string frequency_series(double f_s);

// Mean SED per task (task 1 = 0) and probe frequency with CI bounds.
std::vector<PlotPoint> sed_vs_task(const SedTable& seds, const StatsOptions& stats = {});

// Slope per participant (x = 1-based participant position) and frequency.
std::vector<PlotPoint> sensitivity_bars(const std::vector<SensitivityResult>& results);

// Mean SED per task for each group of one dimension; series "<group>@<f>Hz".
std::vector<PlotPoint> group_panel(const std::vector<GroupSummary>& groups, const std::string& dimension);

// "75.0±18.3 [63.2, 86.8]"
std::string format_cell(const Summary& s, int decimals = 1);

}  // namespace oaekit::analysis
