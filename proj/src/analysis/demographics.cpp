#include "oaekit/analysis/demographics.hpp"

#include <map>
#include <set>

#include "oaekit/csv.hpp"
#include "oaekit/error.hpp"

namespace oaekit::analysis {

std::string age_bin(int age) {
  if (age < 20) throw InvalidArgument("age " + std::to_string(age) + " is below the youngest bin (20-29)");
  if (age < 30) return "20-29";
  if (age < 40) return "30-39";
  return "40+";
}

std::vector<ParticipantMeta> parse_participants_csv(const std::string& text, const std::string& source) {
  const auto t = csv::parse(text, source);
  if (t.rows.empty()) throw SchemaViolation(source + ": no participants");
  std::vector<ParticipantMeta> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string where = source + ": line " + std::to_string(csv::Table::line_of(i));
    ParticipantMeta m;
    m.participant_id = t.cell(i, "participant_id");
    if (m.participant_id.empty()) throw SchemaViolation(where + ": empty participant_id");
    if (!seen.insert(m.participant_id).second) throw SchemaViolation(where + ": duplicate participant " + m.participant_id);
    m.gender = t.cell(i, "gender");
    if (m.gender != "female" && m.gender != "male" && m.gender != "unspecified" && m.gender != "other") {
      throw SchemaViolation(where + ": gender must be female, male, other or unspecified");
    }
    const auto age = t.integer(i, "age");
    if (age <= 0) throw SchemaViolation(where + ": age must be positive");
    m.age = static_cast<int>(age);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<ParticipantMeta> read_participants_csv(const std::filesystem::path& path) {
  return parse_participants_csv(csv::read_text(path), path.string());
}

std::vector<GroupSummary> demographic_report(const SedTable& seds, const std::vector<ParticipantMeta>& meta,
                                             const StatsOptions& stats) {
  std::map<std::string, const ParticipantMeta*> by_id;
  for (const auto& m : meta) by_id[m.participant_id] = &m;
  // dimension -> group -> f -> task -> values
  std::map<std::string, std::map<std::string, std::map<double, std::map<int, std::vector<double>>>>> acc;
  for (const auto& [pid, by_f] : seds) {
    const auto it = by_id.find(pid);
    if (it == by_id.end()) throw SchemaViolation("participant " + pid + " has no demographic record");
    const std::string groups[2][2] = {{"gender", it->second->gender}, {"age_bin", age_bin(it->second->age)}};
    for (const auto& g : groups) {
      for (const auto& [f, by_task] : by_f) {
        auto& cell = acc[g[0]][g[1]][f];
        cell[1].push_back(0.0);
        for (const auto& [task, v] : by_task) cell[task].push_back(v);
      }
    }
  }
  std::vector<GroupSummary> out;
  for (const auto& [dim, groups] : acc) {
    for (const auto& [value, by_f] : groups) {
      for (const auto& [f, by_task] : by_f) {
        for (const auto& [task, values] : by_task) {
          out.push_back({dim, value, task, f, group_stats(values, stats)});
        }
      }
    }
  }
  return out;
}

}  // namespace oaekit::analysis
