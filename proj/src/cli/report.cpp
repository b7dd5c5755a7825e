#include "oaekit/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "oaekit/analysis/load_effect.hpp"
#include "oaekit/analysis/ols.hpp"
#include "oaekit/analysis/tables.hpp"
#include "oaekit/error.hpp"

namespace oaekit::cli {

using json_util::Json;

Json summary_json(const analysis::Summary& s) {
  Json j;
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["std"] = s.std_defined ? Json(s.std) : Json(nullptr);
  j["ci_low"] = s.ci_low;
  j["ci_high"] = s.ci_high;
  return j;
}

Json test_json(const analysis::TestResult& t) {
  Json j;
  j["method"] = t.method;
  j["statistic"] = t.statistic;
  j["p_value"] = t.p_value;
  j["n"] = t.n;
  j["exact"] = t.exact;
  j["degenerate"] = t.degenerate;
  return j;
}

AnalysisReport build_analysis_report(const AnalysisInputs& in, const RunConfig& config) {
  const auto stats = stats_options(config);
  const auto load = load_effect_options(config);
  const auto table = analysis::sed_table(in.rows);
  if (table.empty()) throw SchemaViolation(in.results_name + ": no rows");

  AnalysisReport out;
  Json& j = out.json;
  j["schema_version"] = kReportSchemaVersion;
  j["seed"] = config.seed;
  j["inputs"] = {{"results", in.results_name},
                 {"participants", in.participants ? Json(in.participants_name) : Json(nullptr)},
                 {"behavior", in.behavior ? Json(in.behavior_name) : Json(nullptr)}};
  j["participants"] = table.size();
  std::set<double> freqs;
  for (const auto& [pid, by_f] : table) {
    for (const auto& [f, by_t] : by_f) freqs.insert(f);
  }
  j["frequencies_hz"] = Json(std::vector<double>(freqs.begin(), freqs.end()));

  // SED per task and frequency (task 1 is the zero reference).
  Json sed = Json::array();
  for (double f : freqs) {
    for (int task = 1; task <= 4; ++task) {
      std::vector<double> v;
      for (const auto& [pid, by_f] : table) {
        const auto it = by_f.find(f);
        if (it == by_f.end()) continue;
        if (task == 1) {
          v.push_back(0.0);
        } else if (const auto t = it->second.find(task); t != it->second.end()) {
          v.push_back(t->second);
        }
      }
      if (v.empty()) continue;
      Json row = {{"task_id", task}, {"f_s_hz", f}};
      row.update(summary_json(analysis::group_stats(v, stats)));
      sed.push_back(row);
    }
  }
  j["sed_summary"] = sed;

  const auto sens = analysis::sensitivities(table, load.sensitivity);
  Json sj = Json::array();
  for (const auto& s : sens) {
    sj.push_back({{"participant_id", s.participant_id},
                  {"f_s_hz", s.f_s_hz},
                  {"slope", s.slope},
                  {"intercept", s.intercept},
                  {"r_squared", s.r_squared},
                  {"n_points", s.n_points}});
  }
  j["sensitivity"] = {{"baseline_zero", load.sensitivity.baseline_zero},
                      {"max_normalize", load.sensitivity.max_normalize},
                      {"fits", sj}};
  Json by_f = Json::array();
  for (double f : freqs) {
    std::vector<double> v;
    for (const auto& s : sens) {
      if (s.f_s_hz == f) v.push_back(s.slope);
    }
    Json row = {{"f_s_hz", f}};
    row.update(summary_json(analysis::group_stats(v, stats)));
    by_f.push_back(row);
  }
  j["sensitivity"]["per_frequency"] = by_f;

  const auto peaks = analysis::peak_frequencies(sens);
  Json pk = Json::array();
  for (double f : freqs) {
    std::size_t count = 0;
    for (const auto& [pid, pf] : peaks) count += pf == f;
    pk.push_back({{"f_s_hz", f},
                  {"count", count},
                  {"proportion", static_cast<double>(count) / static_cast<double>(peaks.size())}});
  }
  Json per_participant = Json::object();
  for (const auto& [pid, pf] : peaks) per_participant[pid] = pf;
  j["peak_frequency"] = {{"counts", pk}, {"by_participant", per_participant}};

  const auto effect = analysis::load_effect_test(table, load);
  out.p_value = effect.overall.p_value;
  Json le = test_json(effect.overall);
  le["test"] = analysis::to_string(load.method);
  le["alternative"] = analysis::to_string(load.alternative);
  le["alpha"] = config.analysis.alpha;
  le["significant"] = effect.overall.p_value < config.analysis.alpha;
  Json pf = Json::array();
  for (const auto& [f, r] : effect.per_frequency) {
    Json row = {{"f_s_hz", f}};
    row.update(test_json(r));
    pf.push_back(row);
  }
  le["per_frequency"] = pf;
  j["load_effect"] = le;

  out.plots["sed_vs_task.tsv"] = analysis::format_tsv(analysis::sed_vs_task(table, stats));
  out.plots["sensitivity_bars.tsv"] = analysis::format_tsv(analysis::sensitivity_bars(sens));

  if (in.participants) {
    const auto groups = analysis::demographic_report(table, *in.participants, stats);
    Json gj = Json::array();
    for (const auto& g : groups) {
      Json row = {{"dimension", g.dimension}, {"value", g.value}, {"task_id", g.task_id}, {"f_s_hz", g.f_s_hz}};
      row.update(summary_json(g.summary));
      gj.push_back(row);
    }
    j["demographics"] = gj;
    out.plots["gender_panel.tsv"] = analysis::format_tsv(analysis::group_panel(groups, "gender"));
    out.plots["age_panel.tsv"] = analysis::format_tsv(analysis::group_panel(groups, "age_bin"));
  } else {
    j["demographics"] = nullptr;
  }

  if (in.behavior) {
    Json bj = Json::array();
    for (const auto& b : analysis::behavioral_summary(*in.behavior, stats)) {
      bj.push_back({{"task_id", b.task_id},
                    {"time_min", summary_json(b.time_min)},
                    {"accuracy_pct", summary_json(b.accuracy_pct)},
                    {"time_cell", analysis::format_cell(b.time_min)},
                    {"accuracy_cell", analysis::format_cell(b.accuracy_pct)}});
    }
    j["behavior"] = bj;
  } else {
    j["behavior"] = nullptr;
  }
  j["ci"] = {{"method", analysis::to_string(stats.method)}, {"level", stats.level}};
  return out;
}

Json build_eeg_report(const std::vector<EegRecordingReport>& recordings, const RunConfig& config,
                      const std::string& rejection_mode) {
  const auto stats = stats_options(config);
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["units"] = "kuV^2";
  Json bands = Json::array();
  for (const auto& b : eeg::kBands) bands.push_back({{"name", b.name}, {"low_hz", b.low}, {"high_hz", b.high}});
  bands.push_back({{"name", eeg::kTotalBand.name}, {"low_hz", eeg::kTotalBand.low}, {"high_hz", eeg::kTotalBand.high}});
  j["bands"] = bands;
  j["preprocessing"] = {{"band_pass_hz", {config.eeg.low_hz, config.eeg.high_hz}},
                        {"notch_hz", config.eeg.notch_hz},
                        {"notch_q", config.eeg.notch_q},
                        {"reference", "common_average"}};
  j["artifact_rejection"] = rejection_mode;

  std::vector<eeg::SegmentPower> pooled;
  Json recs = Json::array();
  Json segs = Json::array();
  for (const auto& r : recordings) {
    Json rj = {{"file", r.name},
               {"channels", r.channels},
               {"sample_rate", r.sample_rate},
               {"samples", r.samples},
               {"segments", r.powers.size()}};
    if (r.ica_components) {
      rj["ica"] = {{"components", *r.ica_components}, {"iterations", r.ica_iterations}, {"rejected", r.rejected}};
    } else {
      rj["ica"] = nullptr;
    }
    recs.push_back(rj);
    for (const auto& p : r.powers) {
      Json sj = {{"file", r.name},
                 {"index", p.segment.index},
                 {"task_id", p.segment.task_id},
                 {"begin", p.segment.begin},
                 {"end", p.segment.end}};
      for (const char* b : eeg::kReportBands) sj[b] = p.mean.get(b) * eeg::kMicroToKilo;
      segs.push_back(sj);
      pooled.push_back(p);
    }
  }
  j["recordings"] = recs;

  Json tasks = Json::array();
  for (const auto& t : eeg::task_summary(pooled, stats)) {
    Json tj = {{"task_id", t.task_id}, {"segments", t.segments}};
    for (std::size_t b = 0; b < eeg::kReportBands.size(); ++b) {
      tj[eeg::kReportBands[b]] = summary_json(t.bands[b]);
      tj[std::string(eeg::kReportBands[b]) + "_cell"] = analysis::format_cell(t.bands[b], 3);
    }
    tasks.push_back(tj);
  }
  j["tasks"] = tasks;
  j["segments"] = segs;
  return j;
}

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string fmt_number(double v) {
  if (v != 0.0 && (std::abs(v) < 1e-3 || std::abs(v) >= 1e5)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
  }
  return fixed(v, 4);
}

}  // namespace

std::string render_summary(const Json& analysis, const Json* eeg_report) {
  std::ostringstream out;
  out << "# Summary\n\n";
  if (!analysis.is_null()) {
    const auto& le = analysis.at("load_effect");
    out << "Participants: " << analysis.at("participants").get<std::size_t>() << "\n\n";
    out << "Load effect (" << le.at("test").get<std::string>() << ", " << le.at("alternative").get<std::string>()
        << "): p = " << fmt_number(le.at("p_value").get<double>())
        << (le.at("significant").get<bool>() ? " (significant" : " (not significant") << " at alpha "
        << fmt_number(le.at("alpha").get<double>()) << ")\n\n";

    out << "## SED by task\n\n| f_s (Hz) | Task 1 | Task 2 | Task 3 | Task 4 |\n|---|---|---|---|---|\n";
    std::map<double, std::map<int, double>> sed;
    for (const auto& r : analysis.at("sed_summary")) {
      sed[r.at("f_s_hz").get<double>()][r.at("task_id").get<int>()] = r.at("mean").get<double>();
    }
    for (const auto& [f, by_t] : sed) {
      out << "| " << fixed(f, 0);
      for (int t = 1; t <= 4; ++t) out << " | " << (by_t.count(t) ? fmt_number(by_t.at(t)) : "-");
      out << " |\n";
    }

    out << "\n## Sensitivity and peak frequency\n\n| f_s (Hz) | mean slope | std | peak count | proportion |\n"
           "|---|---|---|---|---|\n";
    const auto& per_f = analysis.at("sensitivity").at("per_frequency");
    const auto& counts = analysis.at("peak_frequency").at("counts");
    for (std::size_t i = 0; i < per_f.size(); ++i) {
      const auto& s = per_f[i];
      out << "| " << fixed(s.at("f_s_hz").get<double>(), 0) << " | " << fmt_number(s.at("mean").get<double>())
          << " | " << (s.at("std").is_null() ? "-" : fmt_number(s.at("std").get<double>())) << " | "
          << counts[i].at("count").get<std::size_t>() << " | "
          << fixed(100.0 * counts[i].at("proportion").get<double>(), 1) << "% |\n";
    }
  }

  std::map<int, std::map<std::string, std::string>> rows;
  std::vector<std::string> columns;
  if (eeg_report) {
    for (const char* b : eeg::kReportBands) columns.push_back(std::string(b) + " (kuV^2)");
    for (const auto& t : eeg_report->at("tasks")) {
      for (const char* b : eeg::kReportBands) {
        rows[t.at("task_id").get<int>()][std::string(b) + " (kuV^2)"] =
            t.at(std::string(b) + "_cell").get<std::string>();
      }
    }
  }
  if (!analysis.is_null() && !analysis.at("behavior").is_null()) {
    columns.push_back("time (min)");
    columns.push_back("accuracy (%)");
    for (const auto& b : analysis.at("behavior")) {
      rows[b.at("task_id").get<int>()]["time (min)"] = b.at("time_cell").get<std::string>();
      rows[b.at("task_id").get<int>()]["accuracy (%)"] = b.at("accuracy_cell").get<std::string>();
    }
  }
  if (!columns.empty()) {
    out << "\n## EEG band power and behaviour by task (mean±std [CI])\n\n| Task";
    for (const auto& c : columns) out << " | " << c;
    out << " |\n|---";
    for (std::size_t i = 0; i < columns.size(); ++i) out << "|---";
    out << "|\n";
    for (const auto& [task, cells] : rows) {
      out << "| " << task;
      for (const auto& c : columns) out << " | " << (cells.count(c) ? cells.at(c) : "-");
      out << " |\n";
    }
  }
  return out.str();
}

}  // namespace oaekit::cli
