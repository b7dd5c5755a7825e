#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oaekit/analysis/stats.hpp"
#include "oaekit/sim/cohort.hpp"

namespace oaekit::analysis {

using sim::BehavioralRecord;

// behavior.csv: participant_id, task_id, response_time_min, correct (0/1,
// true/false). Task 1 rows are rejected: the baseline has no questions.
std::vector<BehavioralRecord> parse_behavior_csv(const std::string& text, const std::string& source);
std::vector<BehavioralRecord> read_behavior_csv(const std::filesystem::path& path);

struct TaskBehaviorSummary {
  int task_id = 2;
  Summary time_min;      // per-participant mean response time
  Summary accuracy_pct;  // per-participant 100 * correct / answered
};

// InvalidArgument on an empty set or a task 1 record.
std::vector<TaskBehaviorSummary> behavioral_summary(const std::vector<BehavioralRecord>& records,
                                                    const StatsOptions& stats = {});

}  // namespace oaekit::analysis
