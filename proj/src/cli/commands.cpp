#include "oaekit/cli/commands.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>

#include "oaekit/analysis/ols.hpp"
#include "oaekit/cli/config.hpp"
#include "oaekit/cli/report.hpp"
#include "oaekit/cli/svg.hpp"
#include "oaekit/csv.hpp"
#include "oaekit/eeg/io.hpp"
#include "oaekit/eeg/synthetic.hpp"
#include "oaekit/error.hpp"
#include "oaekit/log.hpp"
#include "oaekit/oae/batch.hpp"
#include "oaekit/sim/ground_truth.hpp"
#include "oaekit/stimulus/bundle.hpp"
#include "oaekit/stimulus/fixtures.hpp"

namespace fs = std::filesystem;

namespace oaekit::cli {

int exit_code(const std::exception& e) {
  if (dynamic_cast<const InvalidArgument*>(&e)) return kExitUsage;
  if (dynamic_cast<const MissingInput*>(&e)) return kExitMissing;
  if (dynamic_cast<const SchemaViolation*>(&e)) return kExitSchema;
  return kExitProcessing;
}

StagedDir::StagedDir(fs::path target) : target_(std::move(target)) {
  if (target_.filename().empty()) target_ = target_.parent_path();
  const auto parent = target_.parent_path().empty() ? fs::path(".") : target_.parent_path();
  fs::create_directories(parent);
  stage_ = parent / ("." + target_.filename().string() + ".partial-" + std::to_string(::getpid()));
  fs::remove_all(stage_);
  fs::create_directories(stage_);
}

StagedDir::~StagedDir() {
  if (!committed_) {
    std::error_code ec;
    fs::remove_all(stage_, ec);
  }
}

void StagedDir::commit() {
  if (!fs::exists(target_)) {
    fs::rename(stage_, target_);
  } else {
    if (!fs::is_directory(target_)) throw InvalidArgument(target_.string() + " exists and is not a directory");
    for (const auto& entry : fs::directory_iterator(stage_)) {
      const auto dest = target_ / entry.path().filename();
      fs::remove_all(dest);
      fs::rename(entry.path(), dest);
    }
    fs::remove_all(stage_);
  }
  committed_ = true;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<fs::path> participant_dirs(const fs::path& root) {
  if (!fs::is_directory(root)) throw MissingInput("cohort directory not found: " + root.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw MissingInput("no participant directories with manifest.json under " + root.string());
  return out;
}

void write_config_echo(const RunConfig& config, const StagedDir& dir) {
  csv::write_text(dir / kConfigEcho, format_config(config));
}

void write_figures(const std::map<std::string, std::string>& plots, const fs::path& dir) {
  struct Figure {
    const char* tsv;
    ChartKind kind;
    ChartLabels labels;
  };
  const Figure figures[] = {
      {"sed_vs_task.tsv", ChartKind::line, {"SED by task", "task", "SED (mean, 95% CI)"}},
      {"sensitivity_bars.tsv", ChartKind::bar, {"Sensitivity by participant", "participant", "OLS slope"}},
      {"gender_panel.tsv", ChartKind::line, {"SED by gender", "task", "SED"}},
      {"age_panel.tsv", ChartKind::line, {"SED by age group", "task", "SED"}},
  };
  for (const auto& f : figures) {
    const auto it = plots.find(f.tsv);
    if (it == plots.end()) continue;
    auto name = fs::path(f.tsv).replace_extension(".svg");
    csv::write_text(dir / name, render_svg(parse_tsv(it->second, f.tsv), f.kind, f.labels));
  }
}

void print_extract_summary(const std::vector<oae::ResultRow>& rows, std::ostream& out) {
  std::map<double, std::map<int, std::vector<double>>> by_f;
  std::map<double, std::size_t> participants;
  for (const auto& r : rows) {
    if (r.task_id == 1) ++participants[r.f_s_hz];
    if (r.sed) by_f[r.f_s_hz][r.task_id].push_back(*r.sed);
  }
  for (const auto& [f, by_t] : by_f) {
    out << "f_s = " << fmt(f) << " Hz: n = " << participants[f];
    for (const auto& [t, v] : by_t) {
      double m = 0.0;
      for (double x : v) m += x;
      out << ", mean SED task " << t << " = " << fmt(m / static_cast<double>(v.size()));
    }
    out << "\n";
  }
}

void verify_seds(const std::vector<oae::ResultRow>& rows, const sim::GroundTruth& truth, const std::string& source) {
  constexpr double kTolerance = 1e-3;
  std::size_t checked = 0;
  for (const auto& e : sim::expected_seds(truth)) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const oae::ResultRow& r) {
      return r.participant_id == truth.participant_id && r.task_id == e.task_id && r.f_s_hz == e.f_s_hz;
    });
    if (it == rows.end() || !it->sed) {
      throw ProcessingFailure("verify: " + truth.participant_id + " task " + std::to_string(e.task_id) + " at " +
                              fmt(e.f_s_hz) + " Hz has no extracted SED");
    }
    const double rel = std::abs(*it->sed - e.sed) / std::max(std::abs(e.sed), 1e-300);
    if (rel > kTolerance) {
      throw ProcessingFailure("verify (" + source + "): " + truth.participant_id + " task " +
                              std::to_string(e.task_id) + " at " + fmt(e.f_s_hz) + " Hz: SED " + fmt(*it->sed) +
                              " vs expected " + fmt(e.sed) + " (" + fmt(100.0 * rel) + "% off, limit 0.1%)");
    }
    ++checked;
  }
  if (checked == 0) throw ProcessingFailure("verify: " + source + " lists no task segments");
}

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

// Finds --config before CLI11 runs so flags can override file values.
std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InvalidArgument("--config needs a file");
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

struct Paths {
  std::string out, session, clips, recordings, playback, verify, results, participants, behavior, analysis_dir,
      eeg_report;
  std::vector<std::string> eeg_files, markers;
};

struct Flags {
  bool cohort_mode = false;
  bool verify_cohort = false;
  bool expect_null = false;
  bool svg = false;
  bool no_baseline_zero = false;
  double fixture_duration = 10.0;
  eeg::SyntheticEegSpec eeg_synth;
};

void add_session_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--rate", c.session.sample_rate, "Sample rate in Hz")->capture_default_str();
  cmd->add_option("--frequencies", c.session.frequencies, "Probe frequencies in Hz, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--amplitude", c.session.probe_amplitude, "Probe amplitude (full scale)")->capture_default_str();
  cmd->add_option("--notch-width", c.session.notch_width_hz, "Width of the band-stop around each probe, Hz")
      ->capture_default_str();
  cmd->add_option("--segment-duration", c.session.segment_duration_s, "Seconds per (task, frequency) segment")
      ->capture_default_str();
  cmd->add_option("--gap", c.session.gap_s, "Seconds of silence between segments")->capture_default_str();
  cmd->add_option("--repetitions", c.session.repetitions, "Repetitions per (task, frequency)")->capture_default_str();
  cmd->add_option("--participant", c.session.participant_id, "Participant id")->capture_default_str();
}

int cmd_fixtures(const RunConfig& c, const Paths& p, const Flags& f, std::ostream& out) {
  if (f.fixture_duration <= 0.0) throw InvalidArgument("--duration must be positive");
  StagedDir stage(p.out);
  stimulus::fixtures::write_clips(stage.path(), f.fixture_duration, c.session.sample_rate, c.seed);
  write_config_echo(c, stage);
  stage.commit();
  for (const auto& n : stimulus::fixtures::clip_names()) out << (fs::path(p.out) / n).string() << "\n";
  return kExitOk;
}

int cmd_synth(const RunConfig& c, const Paths& p, std::ostream& out) {
  const auto plan = session_plan(c);
  stimulus::validate(plan);
  stimulus::ClipSource clips;
  if (c.session.clips_dir.empty()) {
    clips = [&](const std::string& name) {
      return stimulus::fixtures::make_clip(name, plan.segment_duration, plan.sample_rate, c.seed);
    };
  } else {
    clips = stimulus::directory_clips(c.session.clips_dir);
  }
  const auto bundle = stimulus::build_session(plan, clips);
  StagedDir stage(p.out);
  stimulus::write_session(bundle, stage.path());
  write_config_echo(c, stage);
  stage.commit();
  out << "segments: " << bundle.manifest.segments.size() << "\n";
  out << "manifest: " << (fs::path(p.out) / "manifest.json").string() << "\n";
  return kExitOk;
}

int cmd_simulate(const RunConfig& c, const Paths& p, std::ostream& out) {
  const auto bundle = stimulus::read_session(p.session);
  const long offset = std::lround(c.simulate.offset_ms * 1e-3 * bundle.manifest.sample_rate);
  if (c.simulate.cohort > 0) {
    const auto cohort = sim::simulate_cohort(cohort_spec(c), bundle);
    StagedDir stage(p.out);
    sim::write_cohort(cohort, stage.path());
    write_config_echo(c, stage);
    stage.commit();
    out << "participants: " << cohort.members.size() << "\n";
    out << "cohort: " << p.out << "\n";
    return kExitOk;
  }
  const auto model = ear_model(c);
  sim::validate(model);
  const auto session = c.simulate.continuous ? sim::simulate_session_continuous(bundle, model, offset)
                                             : sim::simulate_session(bundle, model);
  StagedDir stage(p.out);
  const auto rdir = stage / oae::kRecordingsDir;
  fs::create_directories(rdir);
  if (c.simulate.continuous) {
    audio::save_wav(session.continuous, rdir / oae::kContinuousRecording);
  } else {
    for (std::size_t i = 0; i < bundle.manifest.segments.size(); ++i) {
      audio::save_wav(session.recordings[i], rdir / bundle.manifest.segments[i].file);
    }
  }
  stimulus::write_manifest(bundle.manifest, stage / "manifest.json");
  sim::write_ground_truth({bundle.manifest.participant_id, model, session.ground_truth}, stage / "ground_truth.json");
  write_config_echo(c, stage);
  stage.commit();
  out << "recordings: " << (fs::path(p.out) / oae::kRecordingsDir).string() << "\n";
  out << "ground truth: " << (fs::path(p.out) / "ground_truth.json").string() << "\n";
  return kExitOk;
}

int cmd_extract(const RunConfig& c, const Paths& p, const Flags& f, std::ostream& out) {
  oae::BatchOptions opts;
  opts.extract = extract_options(c);
  opts.align = c.extract.align;
  opts.playback_dir = optional_path(p.playback);
  std::vector<oae::ResultRow> rows;
  std::vector<std::pair<sim::GroundTruth, std::string>> truths;
  if (f.cohort_mode) {
    if (!p.recordings.empty()) throw InvalidArgument("--recordings does not apply to --cohort");
    for (const auto& dir : participant_dirs(p.session)) {
      const auto r = oae::to_rows(oae::extract_session(dir, std::nullopt, opts));
      rows.insert(rows.end(), r.begin(), r.end());
      if (f.verify_cohort) {
        truths.emplace_back(sim::read_ground_truth(dir / "ground_truth.json"), (dir / "ground_truth.json").string());
      }
    }
  } else {
    if (f.verify_cohort) throw InvalidArgument("--verify-cohort needs --cohort");
    rows = oae::to_rows(oae::extract_session(p.session, optional_path(p.recordings), opts));
  }
  if (!p.verify.empty()) truths.emplace_back(sim::read_ground_truth(p.verify), p.verify);
  oae::sort_rows(rows);
  for (const auto& [truth, source] : truths) verify_seds(rows, truth, source);

  StagedDir stage(p.out);
  oae::write_results_csv(rows, stage / "results.csv");
  write_config_echo(c, stage);
  stage.commit();
  print_extract_summary(rows, out);
  if (!truths.empty()) out << "verified against " << truths.size() << " ground truth file(s)\n";
  out << "results: " << (fs::path(p.out) / "results.csv").string() << "\n";
  return kExitOk;
}

int cmd_analyze(const RunConfig& c, const Paths& p, const Flags& f, std::ostream& out, std::ostream& err) {
  AnalysisInputs in;
  in.rows = oae::read_results_csv(p.results);
  in.results_name = fs::path(p.results).filename().string();
  if (!p.participants.empty()) {
    in.participants = analysis::read_participants_csv(p.participants);
    in.participants_name = fs::path(p.participants).filename().string();
  }
  if (!p.behavior.empty()) {
    in.behavior = analysis::read_behavior_csv(p.behavior);
    in.behavior_name = fs::path(p.behavior).filename().string();
  }
  const auto report = build_analysis_report(in, c);

  StagedDir stage(p.out);
  csv::write_text(stage / "report.json", json_util::dump(report.json));
  for (const auto& [name, text] : report.plots) csv::write_text(stage / name, text);
  if (f.svg) write_figures(report.plots, stage.path());
  write_config_echo(c, stage);
  stage.commit();

  const bool significant = report.p_value < c.analysis.alpha;
  out << "participants: " << report.json["participants"].get<std::size_t>() << "\n";
  out << "load effect p = " << fmt(report.p_value) << (significant ? " (significant)" : " (not significant)")
      << " at alpha " << fmt(c.analysis.alpha) << "\n";
  out << "report: " << (fs::path(p.out) / "report.json").string() << "\n";
  if (f.expect_null && significant) {
    err << "error: expected no significant load effect, got p = " << fmt(report.p_value) << " < "
        << fmt(c.analysis.alpha) << "\n";
    return kExitProcessing;
  }
  return kExitOk;
}

int cmd_eeg(const RunConfig& c, const Paths& p, std::ostream& out) {
  if (p.eeg_files.empty()) throw InvalidArgument("--eeg needs at least one file");
  if (!p.markers.empty() && p.markers.size() != p.eeg_files.size()) {
    throw InvalidArgument("give one --markers file per --eeg file");
  }
  std::optional<stimulus::Manifest> manifest;
  if (!p.session.empty()) manifest = stimulus::read_manifest(fs::path(p.session) / "manifest.json");
  const bool use_ica = c.eeg.heuristic || !c.eeg.reject.empty();
  std::string mode = c.eeg.heuristic ? "heuristic" : use_ica ? "manual" : "none";

  // Load and check every input first.
  std::vector<std::pair<std::string, eeg::EegRecording>> inputs;
  std::vector<std::vector<eeg::EegSegment>> layouts;
  for (std::size_t i = 0; i < p.eeg_files.size(); ++i) {
    const fs::path csv_path = p.eeg_files[i];
    fs::path markers = p.markers.empty() ? csv_path.parent_path() / eeg::kMarkersFile : fs::path(p.markers[i]);
    if (p.markers.empty()) {
      auto sidecar = csv_path;
      sidecar.replace_extension(".markers.json");
      if (fs::exists(sidecar)) markers = sidecar;
    }
    auto rec = eeg::read_eeg(csv_path, markers);
    auto segments = eeg::segments_from_markers(rec.markers);
    if (manifest) eeg::check_against_manifest(segments, *manifest);
    inputs.emplace_back(csv_path.filename().string(), std::move(rec));
    layouts.push_back(std::move(segments));
  }

  std::vector<EegRecordingReport> reports;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& [name, raw] = inputs[i];
    auto clean = eeg::preprocess(raw, preprocess_options(c));
    EegRecordingReport r{name, raw.channels(), raw.sample_rate, raw.samples(), {}, std::nullopt, 0, {}};
    if (use_ica) {
      const auto ica = eeg::fastica(clean, ica_options(c));
      eeg::RejectionPolicy policy;
      policy.mode = c.eeg.heuristic ? eeg::RejectionPolicy::Mode::heuristic : eeg::RejectionPolicy::Mode::manual;
      policy.indices = c.eeg.reject;
      auto cleaned = eeg::reject_components(ica, policy);
      r.ica_components = ica.components();
      r.ica_iterations = ica.iterations;
      r.rejected = cleaned.rejected;
      clean = std::move(cleaned.recording);
    }
    r.powers = eeg::segment_and_power(clean, layouts[i]);
    reports.push_back(std::move(r));
  }
  const auto report = build_eeg_report(reports, c, mode);

  StagedDir stage(p.out);
  csv::write_text(stage / "eeg_report.json", json_util::dump(report));
  write_config_echo(c, stage);
  stage.commit();
  for (const auto& t : report["tasks"]) {
    out << "task " << t["task_id"].get<int>() << ": total " << t["total_cell"].get<std::string>() << " kuV^2\n";
  }
  for (const auto& r : reports) {
    if (r.ica_components) {
      out << r.name << ": rejected components [";
      for (std::size_t k = 0; k < r.rejected.size(); ++k) out << (k ? "," : "") << r.rejected[k];
      out << "] of " << *r.ica_components << "\n";
    }
  }
  out << "report: " << (fs::path(p.out) / "eeg_report.json").string() << "\n";
  return kExitOk;
}

int cmd_eeg_synth(const RunConfig& c, const Paths& p, const Flags& f, std::ostream& out) {
  auto spec = f.eeg_synth;
  spec.seed = c.seed;
  std::vector<eeg::EegSegment> layout;
  if (!p.session.empty()) {
    layout = eeg::segments_from_manifest(stimulus::read_manifest(fs::path(p.session) / "manifest.json"),
                                         spec.sample_rate);
  } else {
    layout = eeg::default_layout(spec);
  }
  const auto rec = eeg::synthesize_eeg(spec, layout);
  StagedDir stage(p.out);
  eeg::write_eeg(rec, stage / "eeg.csv", stage / eeg::kMarkersFile);
  write_config_echo(c, stage);
  stage.commit();
  out << "eeg: " << (fs::path(p.out) / "eeg.csv").string() << " (" << rec.channels() << " channels, "
      << rec.samples() << " samples, " << layout.size() << " segments)\n";
  return kExitOk;
}

int cmd_report(const RunConfig& c, const Paths& p, std::ostream& out) {
  if (p.analysis_dir.empty() && p.eeg_report.empty()) {
    throw InvalidArgument("report needs --analysis and/or --eeg-report");
  }
  json_util::Json analysis_json;
  std::map<std::string, std::string> plots;
  if (!p.analysis_dir.empty()) {
    const fs::path dir = p.analysis_dir;
    analysis_json = json_util::parse(csv::read_text(dir / "report.json"), (dir / "report.json").string());
    if (!analysis_json.contains("schema_version") || analysis_json["schema_version"] != kReportSchemaVersion) {
      throw SchemaViolation((dir / "report.json").string() + ": $.schema_version: expected 1");
    }
    for (const char* name : {"sed_vs_task.tsv", "sensitivity_bars.tsv", "gender_panel.tsv", "age_panel.tsv"}) {
      if (fs::exists(dir / name)) plots[name] = csv::read_text(dir / name);
    }
  }
  std::optional<json_util::Json> eeg_json;
  if (!p.eeg_report.empty()) {
    eeg_json = json_util::parse(csv::read_text(p.eeg_report), p.eeg_report);
    if (!eeg_json->contains("tasks")) throw SchemaViolation(p.eeg_report + ": $.tasks: missing");
  }
  std::string summary;
  try {
    summary = render_summary(analysis_json, eeg_json ? &*eeg_json : nullptr);
  } catch (const json_util::Json::exception& e) {
    throw SchemaViolation(std::string("report input: ") + e.what());
  }
  StagedDir stage(p.out);
  csv::write_text(stage / "summary.md", summary);
  write_figures(plots, stage.path());
  write_config_echo(c, stage);
  stage.commit();
  out << "summary: " << (fs::path(p.out) / "summary.md").string() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto previous = log::set_sink([&err](std::string_view level, std::string_view message) {
    err << level << ": " << message << "\n";
  });
  struct Restore {
    log::Sink sink;
    ~Restore() { log::set_sink(std::move(sink)); }
  } restore{previous};

  try {
    RunConfig config;
    const auto config_file = find_config(args);
    if (config_file) config = load_config(*config_file);

    Paths p;
    Flags f;
    CLI::App app{"Otoacoustic-emission cognitive-load toolkit", "oaekit"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_arg;
    app.add_option("--config", config_arg, "INI configuration; flags override its values");
    app.add_option("--seed", config.seed, "Root seed for every random stream")->capture_default_str();

    auto* fixtures = app.add_subcommand("fixtures", "Write the bundled synthetic task clips as WAV files");
    fixtures->add_option("--out", p.out, "Output directory")->required();
    fixtures->add_option("--duration", f.fixture_duration, "Clip length in seconds")->capture_default_str();
    fixtures->add_option("--rate", config.session.sample_rate, "Sample rate in Hz")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "Build a session bundle: embedded playback files plus manifest.json");
    synth->add_option("--out", p.out, "Session directory to write")->required();
    synth->add_option("--clips", config.session.clips_dir, "Directory of task clips (default: built-in fixtures)");
    add_session_options(synth, config);

    auto* simulate = app.add_subcommand("simulate", "Simulate ear-canal recordings for a session");
    simulate->add_option("--session", p.session, "Session directory (manifest.json and playback)")->required();
    simulate->add_option("--out", p.out, "Output directory")->required();
    simulate->add_flag("--artificial", config.simulate.artificial, "Artificial ear: no OAE, passive reflection only");
    simulate->add_option("--cohort", config.simulate.cohort, "Simulate a cohort of N participants (0: one ear)")
        ->capture_default_str();
    simulate->add_option("--gains", config.simulate.gains, "OAE gain per task 1-4, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--phase", config.simulate.oae_phase_rad, "OAE phase in radians")->capture_default_str();
    simulate->add_option("--latency-ms", config.simulate.latency_ms, "OAE onset latency")->capture_default_str();
    simulate->add_option("--reflectance", config.simulate.reflectance, "Passive reflectance")->capture_default_str();
    simulate
        ->add_option_function<std::string>(
            "--noise-dbfs",
            [&config](const std::string& v) { config.simulate.noise_dbfs = parse_noise_dbfs(v, "--noise-dbfs"); },
            "White-noise RMS in dBFS, or none")
        ->default_str(format_double(config.simulate.noise_dbfs));
    simulate->add_flag("--continuous", config.simulate.continuous, "One recording of the whole timeline");
    simulate->add_option("--offset-ms", config.simulate.offset_ms, "Recording delay in continuous mode")
        ->capture_default_str();

    auto* extract = app.add_subcommand("extract", "Extract probe magnitudes and SEDs into results.csv");
    extract->add_option("--session", p.session, "Session directory, or cohort root with --cohort")->required();
    extract->add_option("--recordings", p.recordings, "Recordings directory (default: <session>/recordings)");
    extract->add_option("--out", p.out, "Output directory")->required();
    extract->add_flag("--cohort", f.cohort_mode, "Treat --session as a cohort root holding P*/ directories");
    extract->add_flag("--align", config.extract.align, "Align a continuous recording to the playback first");
    extract->add_option("--playback", p.playback, "Playback directory for alignment (default: the session)");
    extract->add_flag("--complex-average", config.extract.complex_average, "Average frames coherently");
    extract->add_option("--band-half-width", config.extract.band_half_width_hz, "Band-pass half width in Hz")
        ->capture_default_str();
    extract->add_option("--band-order", config.extract.band_order, "Band-pass prototype order")
        ->capture_default_str();
    extract->add_option("--verify", p.verify, "ground_truth.json to check SEDs against (0.1%)");
    extract->add_flag("--verify-cohort", f.verify_cohort, "Check every participant against its ground_truth.json");

    auto* analyze = app.add_subcommand("analyze", "Sensitivity, load-effect test, group and behavioural summaries");
    analyze->add_option("--results", p.results, "results.csv from extract")->required();
    analyze->add_option("--participants", p.participants, "participants.csv (participant_id,gender,age)");
    analyze->add_option("--behavior", p.behavior, "behavior.csv (participant_id,task_id,response_time_min,correct)");
    analyze->add_option("--out", p.out, "Output directory")->required();
    analyze->add_option("--ci", config.analysis.ci_method, "Confidence interval: t or bootstrap")
        ->capture_default_str();
    analyze->add_option("--ci-level", config.analysis.ci_level, "Confidence level")->capture_default_str();
    analyze->add_option("--resamples", config.analysis.resamples, "Bootstrap resamples")->capture_default_str();
    analyze->add_option("--test", config.analysis.test_method, "Load-effect test: wilcoxon or permutation")
        ->capture_default_str();
    analyze->add_option("--alternative", config.analysis.alternative, "greater, less or two-sided")
        ->capture_default_str();
    analyze->add_option("--permutations", config.analysis.permutations, "Sign-flip permutations")
        ->capture_default_str();
    analyze->add_option("--alpha", config.analysis.alpha, "Significance level")->capture_default_str();
    analyze->add_flag("--no-baseline-zero", f.no_baseline_zero, "Regress SED on tasks 2-4 only");
    analyze->add_flag("--max-normalize", config.analysis.max_normalize, "Divide each participant's SEDs by their max");
    analyze->add_flag("--expect-null", f.expect_null, "Exit 5 if the load effect is significant");
    analyze->add_flag("--svg", f.svg, "Also render the plot data as SVG");

    auto* eeg_cmd = app.add_subcommand("eeg", "EEG band powers per task from CSV recordings");
    eeg_cmd->add_option("--eeg", p.eeg_files, "EEG CSV file(s)")->required();
    eeg_cmd->add_option("--markers", p.markers, "markers.json per EEG file (default: sidecar)");
    eeg_cmd->add_option("--session", p.session, "Session directory whose manifest the markers must match");
    eeg_cmd->add_option("--out", p.out, "Output directory")->required();
    eeg_cmd->add_option("--reject", config.eeg.reject, "ICA components to remove, comma separated")->delimiter(',');
    eeg_cmd->add_flag("--heuristic", config.eeg.heuristic, "Remove components flagged by kurtosis / slow frontal power");
    eeg_cmd->add_option("--components", config.eeg.components, "ICA components (0: data rank)")->capture_default_str();
    eeg_cmd->add_option("--ica-seed", config.eeg.ica_seed, "Random ICA start (< 0: identity)")->capture_default_str();
    eeg_cmd->add_option("--low", config.eeg.low_hz, "Band-pass low edge, Hz")->capture_default_str();
    eeg_cmd->add_option("--high", config.eeg.high_hz, "Band-pass high edge, Hz")->capture_default_str();
    eeg_cmd->add_option("--notch", config.eeg.notch_hz, "Notch frequency, Hz (0 disables)")->capture_default_str();
    eeg_cmd->add_option("--notch-q", config.eeg.notch_q, "Notch quality factor")->capture_default_str();
    eeg_cmd->add_option("--ci", config.analysis.ci_method, "Confidence interval: t or bootstrap")
        ->capture_default_str();

    auto* eeg_synth = app.add_subcommand("eeg-synth", "Write a synthetic task-scaled EEG recording with markers");
    eeg_synth->add_option("--out", p.out, "Output directory")->required();
    eeg_synth->add_option("--session", p.session, "Take the segment layout from this session's manifest");
    eeg_synth->add_option("--channels", f.eeg_synth.channels, "Channel count")->capture_default_str();
    eeg_synth->add_option("--rate", f.eeg_synth.sample_rate, "Sample rate in Hz")->capture_default_str();
    eeg_synth->add_option("--segment-s", f.eeg_synth.segment_s, "Segment length without --session")
        ->capture_default_str();
    eeg_synth->add_option("--segments-per-task", f.eeg_synth.segments_per_task, "Segments per task without --session")
        ->capture_default_str();
    eeg_synth->add_option("--blink-uv", f.eeg_synth.blink_uv, "Blink artifact peak (0: none)")->capture_default_str();
    eeg_synth->add_option("--line-noise-uv", f.eeg_synth.line_noise_uv, "50 Hz amplitude")->capture_default_str();

    auto* report = app.add_subcommand("report", "Markdown summary and SVG figures from analyze/eeg outputs");
    report->add_option("--analysis", p.analysis_dir, "Directory written by analyze");
    report->add_option("--eeg-report", p.eeg_report, "eeg_report.json written by eeg");
    report->add_option("--out", p.out, "Output directory")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }
    if (f.no_baseline_zero) config.analysis.baseline_zero = false;
    validate(config);

    if (fixtures->parsed()) return cmd_fixtures(config, p, f, out);
    if (synth->parsed()) return cmd_synth(config, p, out);
    if (simulate->parsed()) return cmd_simulate(config, p, out);
    if (extract->parsed()) return cmd_extract(config, p, f, out);
    if (analyze->parsed()) return cmd_analyze(config, p, f, out, err);
    if (eeg_cmd->parsed()) return cmd_eeg(config, p, out);
    if (eeg_synth->parsed()) return cmd_eeg_synth(config, p, f, out);
    if (report->parsed()) return cmd_report(config, p, out);
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitProcessing;
  }
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace oaekit::cli
