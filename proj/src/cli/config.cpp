#include "oaekit/cli/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "oaekit/csv.hpp"
#include "oaekit/error.hpp"

namespace oaekit::cli {

std::string format_double(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string format_number_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_double(values[i]);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double to_double(const std::string& raw, const std::string& what) {
  const auto s = trim(raw);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidArgument(what + ": not a number: \"" + raw + "\"");
  }
  return v;
}

template <typename Int>
Int to_integer(const std::string& raw, const std::string& what) {
  const auto s = trim(raw);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument(what + ": not an integer: \"" + raw + "\"");
  }
  return v;
}

bool to_bool(const std::string& raw, const std::string& what) {
  const auto s = trim(raw);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw InvalidArgument(what + ": expected true or false, got \"" + raw + "\"");
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

struct Field {
  const char* section;
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
};

const std::vector<Field>& fields() {
  using C = RunConfig;
  using S = const std::string&;
  static const std::vector<Field> table = {
      {"run", "seed", [](const C& c) { return std::to_string(c.seed); },
       [](C& c, S v, S w) { c.seed = to_integer<std::uint64_t>(v, w); }},

      {"session", "participant_id", [](const C& c) { return c.session.participant_id; },
       [](C& c, S v, S) { c.session.participant_id = trim(v); }},
      {"session", "sample_rate", [](const C& c) { return std::to_string(c.session.sample_rate); },
       [](C& c, S v, S w) { c.session.sample_rate = to_integer<int>(v, w); }},
      {"session", "frequencies", [](const C& c) { return format_number_list(c.session.frequencies); },
       [](C& c, S v, S w) { c.session.frequencies = parse_number_list(v, w); }},
      {"session", "probe_amplitude", [](const C& c) { return format_double(c.session.probe_amplitude); },
       [](C& c, S v, S w) { c.session.probe_amplitude = to_double(v, w); }},
      {"session", "notch_width_hz", [](const C& c) { return format_double(c.session.notch_width_hz); },
       [](C& c, S v, S w) { c.session.notch_width_hz = to_double(v, w); }},
      {"session", "segment_duration_s", [](const C& c) { return format_double(c.session.segment_duration_s); },
       [](C& c, S v, S w) { c.session.segment_duration_s = to_double(v, w); }},
      {"session", "gap_s", [](const C& c) { return format_double(c.session.gap_s); },
       [](C& c, S v, S w) { c.session.gap_s = to_double(v, w); }},
      {"session", "repetitions", [](const C& c) { return std::to_string(c.session.repetitions); },
       [](C& c, S v, S w) { c.session.repetitions = to_integer<int>(v, w); }},
      {"session", "clips_dir", [](const C& c) { return c.session.clips_dir; },
       [](C& c, S v, S) { c.session.clips_dir = trim(v); }},

      {"simulate", "gains", [](const C& c) { return format_number_list(c.simulate.gains); },
       [](C& c, S v, S w) { c.simulate.gains = parse_number_list(v, w); }},
      {"simulate", "oae_phase_rad", [](const C& c) { return format_double(c.simulate.oae_phase_rad); },
       [](C& c, S v, S w) { c.simulate.oae_phase_rad = to_double(v, w); }},
      {"simulate", "latency_ms", [](const C& c) { return format_double(c.simulate.latency_ms); },
       [](C& c, S v, S w) { c.simulate.latency_ms = to_double(v, w); }},
      {"simulate", "reflectance", [](const C& c) { return format_double(c.simulate.reflectance); },
       [](C& c, S v, S w) { c.simulate.reflectance = to_double(v, w); }},
      {"simulate", "noise_dbfs", [](const C& c) { return format_double(c.simulate.noise_dbfs); },
       [](C& c, S v, S w) { c.simulate.noise_dbfs = parse_noise_dbfs(v, w); }},
      {"simulate", "artificial", [](const C& c) { return std::string(c.simulate.artificial ? "true" : "false"); },
       [](C& c, S v, S w) { c.simulate.artificial = to_bool(v, w); }},
      {"simulate", "continuous", [](const C& c) { return std::string(c.simulate.continuous ? "true" : "false"); },
       [](C& c, S v, S w) { c.simulate.continuous = to_bool(v, w); }},
      {"simulate", "offset_ms", [](const C& c) { return format_double(c.simulate.offset_ms); },
       [](C& c, S v, S w) { c.simulate.offset_ms = to_double(v, w); }},
      {"simulate", "cohort", [](const C& c) { return std::to_string(c.simulate.cohort); },
       [](C& c, S v, S w) { c.simulate.cohort = to_integer<std::size_t>(v, w); }},

      {"extract", "band_half_width_hz", [](const C& c) { return format_double(c.extract.band_half_width_hz); },
       [](C& c, S v, S w) { c.extract.band_half_width_hz = to_double(v, w); }},
      {"extract", "band_order", [](const C& c) { return std::to_string(c.extract.band_order); },
       [](C& c, S v, S w) { c.extract.band_order = to_integer<int>(v, w); }},
      {"extract", "complex_average",
       [](const C& c) { return std::string(c.extract.complex_average ? "true" : "false"); },
       [](C& c, S v, S w) { c.extract.complex_average = to_bool(v, w); }},
      {"extract", "align", [](const C& c) { return std::string(c.extract.align ? "true" : "false"); },
       [](C& c, S v, S w) { c.extract.align = to_bool(v, w); }},

      {"analysis", "ci_method", [](const C& c) { return c.analysis.ci_method; },
       [](C& c, S v, S) { c.analysis.ci_method = trim(v); }},
      {"analysis", "ci_level", [](const C& c) { return format_double(c.analysis.ci_level); },
       [](C& c, S v, S w) { c.analysis.ci_level = to_double(v, w); }},
      {"analysis", "resamples", [](const C& c) { return std::to_string(c.analysis.resamples); },
       [](C& c, S v, S w) { c.analysis.resamples = to_integer<int>(v, w); }},
      {"analysis", "test_method", [](const C& c) { return c.analysis.test_method; },
       [](C& c, S v, S) { c.analysis.test_method = trim(v); }},
      {"analysis", "alternative", [](const C& c) { return c.analysis.alternative; },
       [](C& c, S v, S) { c.analysis.alternative = trim(v); }},
      {"analysis", "permutations", [](const C& c) { return std::to_string(c.analysis.permutations); },
       [](C& c, S v, S w) { c.analysis.permutations = to_integer<int>(v, w); }},
      {"analysis", "alpha", [](const C& c) { return format_double(c.analysis.alpha); },
       [](C& c, S v, S w) { c.analysis.alpha = to_double(v, w); }},
      {"analysis", "baseline_zero",
       [](const C& c) { return std::string(c.analysis.baseline_zero ? "true" : "false"); },
       [](C& c, S v, S w) { c.analysis.baseline_zero = to_bool(v, w); }},
      {"analysis", "max_normalize",
       [](const C& c) { return std::string(c.analysis.max_normalize ? "true" : "false"); },
       [](C& c, S v, S w) { c.analysis.max_normalize = to_bool(v, w); }},

      {"eeg", "low_hz", [](const C& c) { return format_double(c.eeg.low_hz); },
       [](C& c, S v, S w) { c.eeg.low_hz = to_double(v, w); }},
      {"eeg", "high_hz", [](const C& c) { return format_double(c.eeg.high_hz); },
       [](C& c, S v, S w) { c.eeg.high_hz = to_double(v, w); }},
      {"eeg", "notch_hz", [](const C& c) { return format_double(c.eeg.notch_hz); },
       [](C& c, S v, S w) { c.eeg.notch_hz = to_double(v, w); }},
      {"eeg", "notch_q", [](const C& c) { return format_double(c.eeg.notch_q); },
       [](C& c, S v, S w) { c.eeg.notch_q = to_double(v, w); }},
      {"eeg", "reject",
       [](const C& c) {
         std::string out;
         for (std::size_t i = 0; i < c.eeg.reject.size(); ++i) out += (i ? "," : "") + std::to_string(c.eeg.reject[i]);
         return out;
       },
       [](C& c, S v, S w) {
         c.eeg.reject.clear();
         for (const auto& item : split(v)) c.eeg.reject.push_back(to_integer<std::size_t>(item, w));
       }},
      {"eeg", "heuristic", [](const C& c) { return std::string(c.eeg.heuristic ? "true" : "false"); },
       [](C& c, S v, S w) { c.eeg.heuristic = to_bool(v, w); }},
      {"eeg", "components", [](const C& c) { return std::to_string(c.eeg.components); },
       [](C& c, S v, S w) { c.eeg.components = to_integer<std::size_t>(v, w); }},
      {"eeg", "ica_seed", [](const C& c) { return std::to_string(c.eeg.ica_seed); },
       [](C& c, S v, S w) { c.eeg.ica_seed = to_integer<std::int64_t>(v, w); }},
  };
  return table;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split(text)) out.push_back(to_double(item, what));
  return out;
}

double parse_noise_dbfs(const std::string& text, const std::string& what) {
  if (trim(text) == "none") return sim::kNoNoise;
  const double x = to_double(text, what);
  if (x == std::numeric_limits<double>::infinity()) throw InvalidArgument(what + ": +inf is not a noise level");
  return x;
}

std::string format_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += std::string(f.key) + " = " + f.get(config) + "\n";
  }
  return out;
}

RunConfig parse_config(const std::string& text, const std::string& source, RunConfig base) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidArgument(source + ": line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, entries] : tree) {
    if (entries.empty() && !entries.data().empty()) {
      throw InvalidArgument(source + ": " + section + ": keys must be inside a section");
    }
    for (const auto& [key, value] : entries) {
      const auto where = source + ": " + section + "." + key;
      const auto it = std::find_if(fields().begin(), fields().end(),
                                   [&](const Field& f) { return section == f.section && key == f.key; });
      if (it == fields().end()) throw InvalidArgument(where + ": unknown setting");
      it->set(base, value.data(), where);
    }
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  return parse_config(csv::read_text(path), path.string(), std::move(base));
}

void validate(const RunConfig& c) {
  const auto fail = [](const std::string& m) { throw InvalidArgument("config: " + m); };
  if (c.session.sample_rate <= 0) fail("session.sample_rate must be positive");
  if (c.session.frequencies.empty()) fail("session.frequencies is empty");
  if (c.simulate.gains.size() != 4) fail("simulate.gains needs one value per task (4)");
  for (double g : c.simulate.gains) {
    if (g < 0.0) fail("simulate.gains must be non-negative");
  }
  if (c.simulate.reflectance < 0.0) fail("simulate.reflectance must be non-negative");
  if (c.extract.band_half_width_hz <= 0.0) fail("extract.band_half_width_hz must be positive");
  if (c.extract.band_order < 1) fail("extract.band_order must be at least 1");
  if (!(c.analysis.ci_level > 0.0 && c.analysis.ci_level < 1.0)) fail("analysis.ci_level must be in (0, 1)");
  if (!(c.analysis.alpha > 0.0 && c.analysis.alpha < 1.0)) fail("analysis.alpha must be in (0, 1)");
  if (c.analysis.resamples < 1) fail("analysis.resamples must be positive");
  if (c.analysis.permutations < 1) fail("analysis.permutations must be positive");
  analysis::parse_ci_method(c.analysis.ci_method);
  analysis::parse_test_method(c.analysis.test_method);
  analysis::parse_alternative(c.analysis.alternative);
  if (!(c.eeg.low_hz > 0.0 && c.eeg.low_hz < c.eeg.high_hz)) fail("eeg band edges must satisfy 0 < low_hz < high_hz");
  if (c.eeg.notch_q <= 0.0) fail("eeg.notch_q must be positive");
}

stimulus::SessionPlan session_plan(const RunConfig& c) {
  stimulus::SessionPlan plan;
  plan.participant_id = c.session.participant_id;
  plan.sample_rate = c.session.sample_rate;
  plan.stimulus_frequencies = c.session.frequencies;
  plan.stimulus_amplitude = c.session.probe_amplitude;
  plan.segment_duration = c.session.segment_duration_s;
  plan.gap = c.session.gap_s;
  plan.repetitions = c.session.repetitions;
  plan.embed.notch_width = c.session.notch_width_hz;
  return plan;
}

sim::EarModel ear_model(const RunConfig& c) {
  if (c.simulate.artificial) {
    return sim::artificial_ear_model(c.simulate.reflectance, c.simulate.noise_dbfs, c.seed);
  }
  sim::EarModel m;
  for (int t = 1; t <= 4; ++t) m.oae_gain_per_load[t] = c.simulate.gains[static_cast<std::size_t>(t - 1)];
  m.oae_phase = c.simulate.oae_phase_rad;
  m.oae_latency_ms = c.simulate.latency_ms;
  m.passive_reflectance = c.simulate.reflectance;
  m.noise_floor_dbfs = c.simulate.noise_dbfs;
  m.seed = c.seed;
  return m;
}

sim::CohortSpec cohort_spec(const RunConfig& c) {
  sim::CohortSpec spec;
  spec.participants = c.simulate.cohort;
  spec.seed = c.seed;
  spec.noise_floor_dbfs = c.simulate.noise_dbfs;
  spec.oae_phase = c.simulate.oae_phase_rad;
  spec.oae_latency_ms = c.simulate.latency_ms;
  spec.reflectance = c.simulate.reflectance;
  spec.artificial = c.simulate.artificial;
  spec.continuous = c.simulate.continuous;
  spec.offset_samples = std::lround(c.simulate.offset_ms * 1e-3 * c.session.sample_rate);
  return spec;
}

oae::ExtractOptions extract_options(const RunConfig& c) {
  oae::ExtractOptions o;
  o.band_half_width = c.extract.band_half_width_hz;
  o.band_order = c.extract.band_order;
  o.complex_average = c.extract.complex_average;
  return o;
}

analysis::StatsOptions stats_options(const RunConfig& c) {
  analysis::StatsOptions o;
  o.method = analysis::parse_ci_method(c.analysis.ci_method);
  o.level = c.analysis.ci_level;
  o.resamples = static_cast<std::size_t>(c.analysis.resamples);
  o.seed = c.seed;
  return o;
}

analysis::LoadEffectOptions load_effect_options(const RunConfig& c) {
  analysis::LoadEffectOptions o;
  o.method = analysis::parse_test_method(c.analysis.test_method);
  o.alternative = analysis::parse_alternative(c.analysis.alternative);
  o.permutations = static_cast<std::size_t>(c.analysis.permutations);
  o.seed = c.seed;
  o.sensitivity.baseline_zero = c.analysis.baseline_zero;
  o.sensitivity.max_normalize = c.analysis.max_normalize;
  return o;
}

eeg::PreprocessOptions preprocess_options(const RunConfig& c) {
  eeg::PreprocessOptions o;
  o.low_hz = c.eeg.low_hz;
  o.high_hz = c.eeg.high_hz;
  o.notch_hz = c.eeg.notch_hz;
  o.notch_q = c.eeg.notch_q;
  return o;
}

eeg::IcaOptions ica_options(const RunConfig& c) {
  eeg::IcaOptions o;
  o.n_components = c.eeg.components;
  if (c.eeg.ica_seed >= 0) o.seed = static_cast<std::uint64_t>(c.eeg.ica_seed);
  return o;
}

}  // namespace oaekit::cli
