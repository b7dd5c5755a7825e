#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "oaekit/analysis/load_effect.hpp"
#include "oaekit/analysis/stats.hpp"
#include "oaekit/eeg/ica.hpp"
#include "oaekit/eeg/preprocess.hpp"
#include "oaekit/oae/batch.hpp"
#include "oaekit/sim/cohort.hpp"
#include "oaekit/stimulus/session.hpp"

namespace oaekit::cli {

inline constexpr const char* kConfigEcho = "config.ini";

struct SessionConfig {
  std::string participant_id = "P01";
  int sample_rate = audio::kDefaultSampleRate;
  std::vector<double> frequencies = {1000.0, 2000.0, 3000.0};
  double probe_amplitude = stimulus::kDefaultProbeAmplitude;
  double notch_width_hz = stimulus::kNotchWidth;
  double segment_duration_s = 10.0;
  double gap_s = 1.0;
  int repetitions = 1;
  std::string clips_dir;  // empty: built-in fixture clips

  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

struct SimulateConfig {
  std::vector<double> gains = {0.05, 0.08, 0.12, 0.18};  // tasks 1-4
  double oae_phase_rad = 0.0;
  double latency_ms = 0.0;
  double reflectance = 1.0;
  double noise_dbfs = sim::kNoNoise;
  bool artificial = false;
  bool continuous = false;
  double offset_ms = 0.0;
  std::size_t cohort = 0;  // 0: one ear

  friend bool operator==(const SimulateConfig&, const SimulateConfig&) = default;
};

struct ExtractConfig {
  double band_half_width_hz = 100.0;
  int band_order = 4;
  bool complex_average = false;
  bool align = false;

  friend bool operator==(const ExtractConfig&, const ExtractConfig&) = default;
};

struct AnalysisConfig {
  std::string ci_method = "t";
  double ci_level = 0.95;
  int resamples = 10000;
  std::string test_method = "wilcoxon";
  std::string alternative = "greater";
  int permutations = 10000;
  double alpha = 0.01;
  bool baseline_zero = true;
  bool max_normalize = false;

  friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

struct EegConfig {
  double low_hz = 1.0;
  double high_hz = 30.0;
  double notch_hz = 50.0;
  double notch_q = 30.0;
  std::vector<std::size_t> reject;
  bool heuristic = false;
  std::size_t components = 0;
  std::int64_t ica_seed = -1;  // < 0: identity start

  friend bool operator==(const EegConfig&, const EegConfig&) = default;
};

struct RunConfig {
  std::uint64_t seed = 1;
  SessionConfig session;
  SimulateConfig simulate;
  ExtractConfig extract;
  AnalysisConfig analysis;
  EegConfig eeg;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// INI text with one level of sections ([run], [session], [simulate],
// [extract], [analysis], [eeg]). Numbers use the shortest round-trip form.
std::string format_config(const RunConfig& config);
// Unknown sections or keys and unparsable values throw InvalidArgument
// naming "<source>: <section>.<key>".
RunConfig parse_config(const std::string& text, const std::string& source, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

// Range checks that do not need the session itself.
void validate(const RunConfig& config);

stimulus::SessionPlan session_plan(const RunConfig& config);
sim::EarModel ear_model(const RunConfig& config);
sim::CohortSpec cohort_spec(const RunConfig& config);
oae::ExtractOptions extract_options(const RunConfig& config);
analysis::StatsOptions stats_options(const RunConfig& config);
analysis::LoadEffectOptions load_effect_options(const RunConfig& config);
eeg::PreprocessOptions preprocess_options(const RunConfig& config);
eeg::IcaOptions ica_options(const RunConfig& config);

// "1000,2000" <-> {1000, 2000}
std::vector<double> parse_number_list(const std::string& text, const std::string& what);
std::string format_number_list(const std::vector<double>& values);
std::string format_double(double v);
// A number in dBFS, or "none" / "-inf" for no noise.
double parse_noise_dbfs(const std::string& text, const std::string& what);

}  // namespace oaekit::cli
