#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oaekit/oae/batch.hpp"

namespace oaekit::oae {

// One line of the results CSV: participant_id, task_id, f_s_hz, magnitude,
// noise_floor, sed (empty for task 1), window_count.
struct ResultRow {
  std::string participant_id;
  int task_id = 1;
  double f_s_hz = 0.0;
  double magnitude = 0.0;
  double noise_floor = 0.0;
  std::optional<double> sed;
  std::size_t window_count = 0;
};

std::vector<ResultRow> to_rows(const BatchResult& result);

// Sorted by participant, then f_s ascending, then task (stable otherwise).
void sort_rows(std::vector<ResultRow>& rows);

std::string format_results_csv(const std::vector<ResultRow>& rows);
void write_results_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

std::vector<ResultRow> parse_results_csv(const std::string& text, const std::string& source = "results.csv");
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

}  // namespace oaekit::oae
