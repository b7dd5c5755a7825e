#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oaekit/stimulus/session.hpp"

namespace oaekit::stimulus {

inline constexpr int kManifestSchemaVersion = 1;

// The on-disk description of a session bundle (manifest.json).
struct Manifest {
  int schema_version = kManifestSchemaVersion;
  std::string participant_id;
  int sample_rate = audio::kDefaultSampleRate;
  double probe_amplitude = kDefaultProbeAmplitude;
  double notch_width_hz = kNotchWidth;
  double notch_transition_hz = 50.0;
  int notch_order = 8;
  double fade_ms = 10.0;
  double segment_duration_s = 10.0;
  double gap_s = 1.0;
  int repetitions = 1;
  std::vector<double> frequencies;
  std::vector<TaskSpec> tasks;
  std::vector<Segment> segments;

  [[nodiscard]] std::size_t timeline_length() const;
  [[nodiscard]] EmbedOptions embed_options() const;
};

std::string manifest_to_json(const Manifest& manifest);

// Parses and validates. Schema problems throw SchemaViolation whose message
// starts with the JSON path of the first violation, e.g. "$.segments[2].f_s_hz".
Manifest manifest_from_json(const std::string& text);

void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& path);

}  // namespace oaekit::stimulus
