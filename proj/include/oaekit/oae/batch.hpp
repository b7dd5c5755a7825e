#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "oaekit/audio/sample_buffer.hpp"
#include "oaekit/oae/extract.hpp"
#include "oaekit/stimulus/manifest.hpp"

namespace oaekit::oae {

// Recording layout next to a session: either one file per segment under
// recordings/ (same names as the playback files) or one continuous
// recordings/recording.wav covering the manifest timeline.
inline constexpr const char* kRecordingsDir = "recordings";
inline constexpr const char* kContinuousRecording = "recording.wav";

struct BatchOptions {
  ExtractOptions extract;
  bool align = false;  // continuous recordings only
  double align_window = 0.050;
  // Where the playback files live for alignment; default is the session dir.
  std::optional<std::filesystem::path> playback_dir;
};

struct BatchResult {
  std::vector<MagnitudeRecord> magnitudes;  // one per segment
  std::vector<SedRecord> seds;              // one per (task 2..4, f_s)
  std::optional<long> alignment_lag;
};

// Recordings indexed like manifest.segments.
BatchResult batch_extract(const stimulus::Manifest& manifest,
                          const std::vector<audio::SampleBuffer>& recordings,
                          const BatchOptions& options = {});

// One recording of the whole timeline. With options.align, `reference` (the
// continuous playback) must be given and a constant offset is removed first.
BatchResult batch_extract_continuous(const stimulus::Manifest& manifest,
                                     const audio::SampleBuffer& recording,
                                     const BatchOptions& options = {},
                                     const audio::SampleBuffer* reference = nullptr);

// Reads `session_dir`/manifest.json and the recordings under
// `recordings_dir` (default: session_dir/recordings).
BatchResult extract_session(const std::filesystem::path& session_dir,
                            const std::optional<std::filesystem::path>& recordings_dir = std::nullopt,
                            const BatchOptions& options = {});

// Throws MissingInput naming the absent baseline when some probe frequency
// used by a task segment has no task 1 segment.
void require_baselines(const stimulus::Manifest& manifest);

}  // namespace oaekit::oae
