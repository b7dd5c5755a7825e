#include "oaekit/stimulus/manifest.hpp"

#include <fstream>
#include <sstream>

#include "oaekit/json_util.hpp"

namespace oaekit::stimulus {

using json_util::Json;

std::size_t Manifest::timeline_length() const {
  std::size_t end = 0;
  for (const auto& s : segments) end = std::max(end, s.end_sample);
  return end;
}

EmbedOptions Manifest::embed_options() const {
  EmbedOptions o;
  o.notch_width = notch_width_hz;
  o.transition = notch_transition_hz;
  o.notch_order = notch_order;
  o.fade = fade_ms / 1000.0;
  return o;
}

std::string manifest_to_json(const Manifest& m) {
  Json j;
  j["schema_version"] = m.schema_version;
  j["participant_id"] = m.participant_id;
  j["sample_rate"] = m.sample_rate;
  j["probe_amplitude"] = m.probe_amplitude;
  j["notch_width_hz"] = m.notch_width_hz;
  j["notch_transition_hz"] = m.notch_transition_hz;
  j["notch_order"] = m.notch_order;
  j["fade_ms"] = m.fade_ms;
  j["segment_duration_s"] = m.segment_duration_s;
  j["gap_s"] = m.gap_s;
  j["repetitions"] = m.repetitions;
  j["frequencies_hz"] = m.frequencies;
  Json tasks = Json::array();
  for (const auto& t : m.tasks) {
    Json jt;
    jt["task_id"] = t.task_id;
    jt["source_clips"] = t.source_clips;
    jt["clip_order"] = t.clip_order;
    jt["prompt_text"] = t.prompt_text;
    jt["question_text"] = t.question_text;
    jt["expected_answer"] = t.expected_answer;
    tasks.push_back(std::move(jt));
  }
  j["tasks"] = std::move(tasks);
  Json segs = Json::array();
  for (const auto& s : m.segments) {
    Json js;
    js["index"] = s.index;
    js["task_id"] = s.task_id;
    js["f_s_hz"] = s.f_s_hz;
    js["repetition"] = s.repetition;
    js["file"] = s.file;
    js["start_sample"] = s.start_sample;
    js["end_sample"] = s.end_sample;
    js["norm_gain_db"] = s.norm_gain_db;
    segs.push_back(std::move(js));
  }
  j["segments"] = std::move(segs);
  return json_util::dump(j);
}

Manifest manifest_from_json(const std::string& text) {
  using namespace json_util;
  const Json j = parse(text, "manifest");
  const std::string root = "$";
  Manifest m;
  m.schema_version = static_cast<int>(integer(j, root, "schema_version"));
  if (m.schema_version != kManifestSchemaVersion) {
    throw SchemaViolation("$.schema_version: unsupported version " +
                          std::to_string(m.schema_version));
  }
  m.participant_id = string(j, root, "participant_id");
  m.sample_rate = static_cast<int>(integer(j, root, "sample_rate"));
  if (m.sample_rate <= 0) throw SchemaViolation("$.sample_rate: must be positive");
  m.probe_amplitude = number(j, root, "probe_amplitude");
  if (!(m.probe_amplitude > 0.0) || m.probe_amplitude > 1.0) {
    throw SchemaViolation("$.probe_amplitude: must be in (0, 1]");
  }
  m.notch_width_hz = number(j, root, "notch_width_hz");
  m.notch_transition_hz = number(j, root, "notch_transition_hz");
  m.notch_order = static_cast<int>(integer(j, root, "notch_order"));
  m.fade_ms = number(j, root, "fade_ms");
  m.segment_duration_s = number(j, root, "segment_duration_s");
  m.gap_s = number(j, root, "gap_s");
  m.repetitions = static_cast<int>(integer(j, root, "repetitions"));
  const Json& freqs = array(j, root, "frequencies_hz");
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!freqs[i].is_number()) throw SchemaViolation(child("$.frequencies_hz", i) + ": expected a number");
    m.frequencies.push_back(freqs[i].get<double>());
  }

  const Json& tasks = array(j, root, "tasks");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string p = child("$.tasks", i);
    TaskSpec t;
    t.task_id = static_cast<int>(integer(tasks[i], p, "task_id"));
    const Json& clips = array(tasks[i], p, "source_clips");
    for (std::size_t c = 0; c < clips.size(); ++c) {
      if (!clips[c].is_string()) throw SchemaViolation(child(child(p, "source_clips"), c) + ": expected a string");
      t.source_clips.push_back(clips[c].get<std::string>());
    }
    const Json& order = array(tasks[i], p, "clip_order");
    for (std::size_t c = 0; c < order.size(); ++c) {
      if (!order[c].is_number_integer()) throw SchemaViolation(child(child(p, "clip_order"), c) + ": expected an integer");
      t.clip_order.push_back(order[c].get<int>());
    }
    t.prompt_text = string(tasks[i], p, "prompt_text");
    t.question_text = string(tasks[i], p, "question_text");
    t.expected_answer = string(tasks[i], p, "expected_answer");
    try {
      validate(t);
    } catch (const InvalidArgument& e) {
      throw SchemaViolation(p + ": " + e.what());
    }
    m.tasks.push_back(std::move(t));
  }

  const Json& segs = array(j, root, "segments");
  if (segs.empty()) throw SchemaViolation("$.segments: no segments");
  std::size_t previous_end = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string p = child("$.segments", i);
    Segment s;
    s.index = static_cast<int>(integer(segs[i], p, "index"));
    if (s.index != static_cast<int>(i)) throw SchemaViolation(child(p, "index") + ": expected " + std::to_string(i));
    s.task_id = static_cast<int>(integer(segs[i], p, "task_id"));
    if (s.task_id < 1 || s.task_id > 4) throw SchemaViolation(child(p, "task_id") + ": must be 1..4");
    s.f_s_hz = number(segs[i], p, "f_s_hz");
    if (!(s.f_s_hz > 0.0) || s.f_s_hz >= m.sample_rate / 2.0) {
      throw SchemaViolation(child(p, "f_s_hz") + ": must lie in (0, Nyquist)");
    }
    s.repetition = static_cast<int>(integer(segs[i], p, "repetition"));
    s.file = string(segs[i], p, "file");
    if (s.file.empty() || s.file.find('/') != std::string::npos || s.file.find("..") != std::string::npos) {
      throw SchemaViolation(child(p, "file") + ": must be a plain file name");
    }
    s.start_sample = count(segs[i], p, "start_sample");
    s.end_sample = count(segs[i], p, "end_sample");
    if (s.end_sample <= s.start_sample) throw SchemaViolation(child(p, "end_sample") + ": must exceed start_sample");
    if (i > 0 && s.start_sample < previous_end) {
      throw SchemaViolation(child(p, "start_sample") + ": segments overlap or are out of order");
    }
    previous_end = s.end_sample;
    s.norm_gain_db = number(segs[i], p, "norm_gain_db");
    if (s.norm_gain_db > 1e-9) throw SchemaViolation(child(p, "norm_gain_db") + ": normalization never amplifies");
    m.segments.push_back(std::move(s));
  }
  return m;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write manifest: " + path.string());
  out << manifest_to_json(manifest);
  if (!out) throw InvalidArgument("failed writing manifest: " + path.string());
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("manifest not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return manifest_from_json(ss.str());
  } catch (const SchemaViolation& e) {
    throw SchemaViolation(path.string() + ": " + e.what());
  }
}

}  // namespace oaekit::stimulus
