#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "oaekit/stimulus/manifest.hpp"

namespace oaekit::eeg {

// Labels are "<task_id>:start" and "<task_id>:end".
struct Marker {
  std::size_t sample = 0;
  std::string label;
  friend bool operator==(const Marker&, const Marker&) = default;
};

struct EegRecording {
  Eigen::MatrixXd data;  // channels x samples, microvolts
  int sample_rate = 0;
  std::vector<std::string> channel_names;
  std::vector<Marker> markers;

  [[nodiscard]] std::size_t channels() const { return static_cast<std::size_t>(data.rows()); }
  [[nodiscard]] std::size_t samples() const { return static_cast<std::size_t>(data.cols()); }
};

// Throws InvalidArgument on a non-positive rate, a name count that does not
// match the channel count, or markers that are unsorted or past the end.
void validate(const EegRecording& rec);

struct EegSegment {
  std::size_t index = 0;
  int task_id = 1;
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

std::string start_label(int task_id);
std::string end_label(int task_id);
std::vector<Marker> markers_for(const std::vector<EegSegment>& segments);

// Pairs start/end markers into segments. Malformed labels, unmatched pairs and
// nesting throw SchemaViolation.
std::vector<EegSegment> segments_from_markers(const std::vector<Marker>& markers);

// Maps each manifest segment onto the EEG sample clock.
std::vector<EegSegment> segments_from_manifest(const stimulus::Manifest& manifest, int eeg_rate);

// The EEG segments must follow the manifest's segment order task for task;
// otherwise SchemaViolation.
void check_against_manifest(const std::vector<EegSegment>& segments, const stimulus::Manifest& manifest);

bool is_frontal(const std::string& channel_name);

}  // namespace oaekit::eeg
