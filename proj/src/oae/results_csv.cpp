#include "oaekit/oae/results_csv.hpp"

#include <algorithm>
#include <map>

#include "oaekit/csv.hpp"
#include "oaekit/error.hpp"

namespace oaekit::oae {

std::vector<ResultRow> to_rows(const BatchResult& result) {
  std::map<std::pair<double, int>, double> seds;
  for (const auto& s : result.seds) seds[{s.f_s_hz, s.task_id}] = s.sed;
  std::vector<ResultRow> rows;
  for (const auto& m : result.magnitudes) {
    ResultRow r;
    r.participant_id = m.participant_id;
    r.task_id = m.task_id;
    r.f_s_hz = m.f_s_hz;
    r.magnitude = m.magnitude;
    r.noise_floor = m.noise_floor;
    r.window_count = m.window_count;
    if (m.task_id != 1) r.sed = seds.at({m.f_s_hz, m.task_id});
    rows.push_back(std::move(r));
  }
  sort_rows(rows);
  return rows;
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.participant_id != b.participant_id) return a.participant_id < b.participant_id;
    if (a.f_s_hz != b.f_s_hz) return a.f_s_hz < b.f_s_hz;
    return a.task_id < b.task_id;
  });
}

std::string format_results_csv(const std::vector<ResultRow>& rows) {
  std::string out = "participant_id,task_id,f_s_hz,magnitude,noise_floor,sed,window_count\n";
  for (const auto& r : rows) {
    out += r.participant_id + "," + std::to_string(r.task_id) + "," + csv::format_number(r.f_s_hz) + "," +
           csv::format_number(r.magnitude) + "," + csv::format_number(r.noise_floor) + "," +
           (r.sed ? csv::format_number(*r.sed) : std::string()) + "," +
           std::to_string(r.window_count) + "\n";
  }
  return out;
}

void write_results_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  csv::write_text(path, format_results_csv(rows));
}

std::vector<ResultRow> parse_results_csv(const std::string& text, const std::string& source) {
  const auto t = csv::parse(text, source);
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string where = source + ": line " + std::to_string(csv::Table::line_of(i));
    ResultRow r;
    r.participant_id = t.cell(i, "participant_id");
    if (r.participant_id.empty()) throw SchemaViolation(where + ": empty participant_id");
    const auto task = t.integer(i, "task_id");
    if (task < 1 || task > 4) throw SchemaViolation(where + ": task_id must be 1..4");
    r.task_id = static_cast<int>(task);
    r.f_s_hz = t.number(i, "f_s_hz");
    r.magnitude = t.number(i, "magnitude");
    r.noise_floor = t.number(i, "noise_floor");
    if (r.magnitude < 0.0 || r.noise_floor < 0.0) {
      throw SchemaViolation(where + ": magnitude and noise_floor must be non-negative");
    }
    if (!t.cell(i, "sed").empty()) {
      r.sed = t.number(i, "sed");
      if (*r.sed < 0.0) throw SchemaViolation(where + ": sed must be non-negative");
    }
    if (r.task_id == 1 && r.sed) throw SchemaViolation(where + ": task 1 rows carry no sed");
    if (r.task_id != 1 && !r.sed) throw SchemaViolation(where + ": sed missing for task " + std::to_string(r.task_id));
    const auto wc = t.integer(i, "window_count");
    if (wc < 1) throw SchemaViolation(where + ": window_count must be at least 1");
    r.window_count = static_cast<std::size_t>(wc);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
  return parse_results_csv(csv::read_text(path), path.string());
}

}  // namespace oaekit::oae
