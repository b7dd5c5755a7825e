#include "oaekit/analysis/tables.hpp"

#include <cstdio>
#include <map>

#include "oaekit/csv.hpp"

namespace oaekit::analysis {

std::string format_tsv(const std::vector<PlotPoint>& points) {
  std::string out = "series\tx\ty\terr_low\terr_high\n";
  for (const auto& p : points) {
    out += p.series + "\t" + csv::format_number(p.x) + "\t" + csv::format_number(p.y) + "\t" +
           csv::format_number(p.err_low) + "\t" + csv::format_number(p.err_high) + "\n";
  }
  return out;
}

std::string frequency_series(double f_s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%gHz", f_s);
  return buf;
}

std::vector<PlotPoint> sed_vs_task(const SedTable& seds, const StatsOptions& stats) {
  std::map<double, std::map<int, std::vector<double>>> cells;
  for (const auto& [pid, by_f] : seds) {
    for (const auto& [f, by_task] : by_f) {
      cells[f][1].push_back(0.0);
      for (const auto& [task, v] : by_task) cells[f][task].push_back(v);
    }
  }
  std::vector<PlotPoint> out;
  for (const auto& [f, by_task] : cells) {
    for (const auto& [task, values] : by_task) {
      const auto s = group_stats(values, stats);
      out.push_back({frequency_series(f), static_cast<double>(task), s.mean, s.ci_low, s.ci_high});
    }
  }
  return out;
}

std::vector<PlotPoint> sensitivity_bars(const std::vector<SensitivityResult>& results) {
  std::map<std::string, int> position;
  for (const auto& r : results) position.emplace(r.participant_id, 0);
  int next = 1;
  for (auto& [pid, pos] : position) pos = next++;
  std::vector<PlotPoint> out;
  for (const auto& r : results) {
    out.push_back({frequency_series(r.f_s_hz), static_cast<double>(position[r.participant_id]), r.slope, r.slope, r.slope});
  }
  return out;
}

std::vector<PlotPoint> group_panel(const std::vector<GroupSummary>& groups, const std::string& dimension) {
  std::vector<PlotPoint> out;
  for (const auto& g : groups) {
    if (g.dimension != dimension) continue;
    out.push_back({g.value + "@" + frequency_series(g.f_s_hz), static_cast<double>(g.task_id), g.summary.mean,
                   g.summary.ci_low, g.summary.ci_high});
  }
  return out;
}

std::string format_cell(const Summary& s, int decimals) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.*f±%.*f [%.*f, %.*f]", decimals, s.mean, decimals, s.std, decimals,
                s.ci_low, decimals, s.ci_high);
  return buf;
}

}  // namespace oaekit::analysis
