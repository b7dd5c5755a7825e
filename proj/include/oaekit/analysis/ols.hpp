#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "oaekit/oae/results_csv.hpp"

namespace oaekit::analysis {

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;  // 1 by convention when SST = 0
  std::size_t n_points = 0;
};

// Closed-form simple regression. InvalidArgument for fewer than 2 points,
// mismatched lengths or zero variance in x.
OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

struct SensitivityOptions {
  bool baseline_zero = true;   // task 1 enters as (1, 0)
  bool max_normalize = false;  // divide each participant's SEDs by their maximum first
};

struct SensitivityResult {
  std::string participant_id;
  double f_s_hz = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  std::size_t n_points = 0;
};

// `sed_by_task` must hold tasks 2, 3 and 4.
SensitivityResult sensitivity(const std::string& participant_id, double f_s,
                              const std::map<int, double>& sed_by_task,
                              const SensitivityOptions& options = {});

// SED per participant, f_s and task (repetition rows collapse to one value).
using SedTable = std::map<std::string, std::map<double, std::map<int, double>>>;
SedTable sed_table(const std::vector<oae::ResultRow>& rows);

// One result per (participant, f_s), ordered by participant then f_s.
std::vector<SensitivityResult> sensitivities(const SedTable& table, const SensitivityOptions& options = {});

// f_s with the largest slope per participant; ties go to the higher
// frequency and are logged.
std::map<std::string, double> peak_frequencies(const std::vector<SensitivityResult>& results);

}  // namespace oaekit::analysis
