#include "oaekit/analysis/behavior.hpp"

#include <map>

#include "oaekit/csv.hpp"
#include "oaekit/error.hpp"

namespace oaekit::analysis {

std::vector<BehavioralRecord> parse_behavior_csv(const std::string& text, const std::string& source) {
  const auto t = csv::parse(text, source);
  if (t.rows.empty()) throw SchemaViolation(source + ": no behavioural records");
  std::vector<BehavioralRecord> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string where = source + ": line " + std::to_string(csv::Table::line_of(i));
    BehavioralRecord r;
    r.participant_id = t.cell(i, "participant_id");
    if (r.participant_id.empty()) throw SchemaViolation(where + ": empty participant_id");
    const auto task = t.integer(i, "task_id");
    if (task == 1) throw SchemaViolation(where + ": task 1 is the baseline and has no questions");
    if (task < 2 || task > 4) throw SchemaViolation(where + ": task_id must be 2..4");
    r.task_id = static_cast<int>(task);
    r.response_time_min = t.number(i, "response_time_min");
    if (!(r.response_time_min > 0.0)) throw SchemaViolation(where + ": response_time_min must be positive");
    const auto& c = t.cell(i, "correct");
    if (c == "1" || c == "true") {
      r.correct = true;
    } else if (c == "0" || c == "false") {
      r.correct = false;
    } else {
      throw SchemaViolation(where + ": correct must be 0/1 or true/false");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BehavioralRecord> read_behavior_csv(const std::filesystem::path& path) {
  return parse_behavior_csv(csv::read_text(path), path.string());
}

std::vector<TaskBehaviorSummary> behavioral_summary(const std::vector<BehavioralRecord>& records,
                                                    const StatsOptions& stats) {
  if (records.empty()) throw InvalidArgument("behavioral_summary: no records");
  struct Acc {
    double time = 0.0;
    int answered = 0, correct = 0;
  };
  std::map<int, std::map<std::string, Acc>> by_task;
  for (const auto& r : records) {
    if (r.task_id == 1) throw InvalidArgument("behavioral_summary: task 1 has no questions");
    if (r.task_id < 2 || r.task_id > 4) throw InvalidArgument("behavioral_summary: task_id must be 2..4");
    auto& a = by_task[r.task_id][r.participant_id];
    a.time += r.response_time_min;
    a.answered += 1;
    a.correct += r.correct ? 1 : 0;
  }
  std::vector<TaskBehaviorSummary> out;
  for (const auto& [task, people] : by_task) {
    std::vector<double> time, acc;
    for (const auto& [pid, a] : people) {
      time.push_back(a.time / a.answered);
      acc.push_back(100.0 * a.correct / a.answered);
    }
    out.push_back({task, group_stats(time, stats), group_stats(acc, stats)});
  }
  return out;
}

}  // namespace oaekit::analysis
