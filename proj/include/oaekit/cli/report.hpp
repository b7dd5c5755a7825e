#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oaekit/analysis/behavior.hpp"
#include "oaekit/analysis/demographics.hpp"
#include "oaekit/cli/config.hpp"
#include "oaekit/eeg/band_power.hpp"
#include "oaekit/json_util.hpp"
#include "oaekit/oae/results_csv.hpp"

namespace oaekit::cli {

inline constexpr int kReportSchemaVersion = 1;

json_util::Json summary_json(const analysis::Summary& s);
json_util::Json test_json(const analysis::TestResult& t);

struct AnalysisInputs {
  std::vector<oae::ResultRow> rows;
  std::optional<std::vector<analysis::ParticipantMeta>> participants;
  std::optional<std::vector<analysis::BehavioralRecord>> behavior;
  // File names recorded in the report.
  std::string results_name;
  std::string participants_name;
  std::string behavior_name;
};

struct AnalysisReport {
  json_util::Json json;
  std::map<std::string, std::string> plots;  // file name -> TSV text
  double p_value = 1.0;
};

AnalysisReport build_analysis_report(const AnalysisInputs& inputs, const RunConfig& config);

struct EegRecordingReport {
  std::string name;
  std::size_t channels = 0;
  int sample_rate = 0;
  std::size_t samples = 0;
  std::vector<eeg::SegmentPower> powers;
  std::optional<std::size_t> ica_components;
  int ica_iterations = 0;
  std::vector<std::size_t> rejected;
};

json_util::Json build_eeg_report(const std::vector<EegRecordingReport>& recordings, const RunConfig& config,
                                 const std::string& rejection_mode);

// Markdown tables in the layout of the study's summary table: tasks as rows,
// EEG bands and behavioural measures as columns, plus the acoustic results.
std::string render_summary(const json_util::Json& analysis, const json_util::Json* eeg_report);

}  // namespace oaekit::cli
