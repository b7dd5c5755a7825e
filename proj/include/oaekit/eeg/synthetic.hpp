#pragma once

#include <cstdint>
#include <map>

#include "oaekit/eeg/recording.hpp"

namespace oaekit::eeg {

// First n names of the 10-20 montage, then "Ch<k>".
std::vector<std::string> standard_montage(std::size_t n);

struct SyntheticEegSpec {
  std::size_t channels = 16;
  int sample_rate = 250;
  double segment_s = 4.0;
  double gap_s = 1.0;
  int segments_per_task = 3;
  // Amplitude multiplier of the broadband background inside each task's segments.
  std::map<int, double> task_scale = {{1, 1.0}, {2, 1.15}, {3, 1.3}, {4, 1.45}};
  double background_uv = 10.0;  // RMS of each background source
  double alpha_uv = 5.0;        // 10 Hz rhythm amplitude
  double line_noise_uv = 0.0;   // 50 Hz
  double blink_uv = 0.0;        // peak of frontal blink bumps; 0 disables
  std::uint64_t seed = 1;
};

// Tasks 1..4 in order, segments_per_task each, separated by gaps.
std::vector<EegSegment> default_layout(const SyntheticEegSpec& spec);

// Background sources are white noise mixed across channels by a seeded
// matrix and scaled per task; the recording carries start/end markers for
// `layout` and extends one gap past its last segment.
EegRecording synthesize_eeg(const SyntheticEegSpec& spec, const std::vector<EegSegment>& layout);
EegRecording synthesize_eeg(const SyntheticEegSpec& spec);

}  // namespace oaekit::eeg
