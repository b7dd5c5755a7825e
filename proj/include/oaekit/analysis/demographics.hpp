#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oaekit/analysis/ols.hpp"
#include "oaekit/analysis/stats.hpp"
#include "oaekit/sim/cohort.hpp"

namespace oaekit::analysis {

using sim::ParticipantMeta;

// "20-29", "30-39" or "40+"; InvalidArgument below 20.
std::string age_bin(int age);

// participants.csv: participant_id, gender, age. SchemaViolation with the
// line number on bad rows; an empty table is a violation too.
std::vector<ParticipantMeta> parse_participants_csv(const std::string& text, const std::string& source);
std::vector<ParticipantMeta> read_participants_csv(const std::filesystem::path& path);

struct GroupSummary {
  std::string dimension;  // gender or age_bin
  std::string value;
  int task_id = 1;
  double f_s_hz = 0.0;
  Summary summary;
};

// SED summaries per (dimension, group, task, f_s); task 1 enters as SED 0.
// SchemaViolation when a participant with SEDs has no meta.
std::vector<GroupSummary> demographic_report(const SedTable& seds, const std::vector<ParticipantMeta>& meta,
                                             const StatsOptions& stats = {});

}  // namespace oaekit::analysis
