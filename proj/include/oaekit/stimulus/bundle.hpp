#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "oaekit/audio/sample_buffer.hpp"
#include "oaekit/audio/wav.hpp"
#include "oaekit/stimulus/embed.hpp"
#include "oaekit/stimulus/manifest.hpp"
#include "oaekit/stimulus/session.hpp"

namespace oaekit::stimulus {

// Resolves a clip name to audio.
using ClipSource = std::function<audio::SampleBuffer(const std::string& clip)>;

// Loads `<dir>/<clip>` as WAV; MissingInput when absent.
ClipSource directory_clips(const std::filesystem::path& dir);

// A session in memory: the manifest plus one playback per manifest segment.
struct SessionBundle {
  Manifest manifest;
  std::vector<EmbeddedPlayback> playbacks;
};

// Task audio for one segment: the task's clips concatenated in clip order,
// looped or truncated to `length` samples. Task 1 yields silence.
audio::SampleBuffer assemble_task_audio(const TaskSpec& task, const ClipSource& clips,
                                        std::size_t length, int sample_rate);

// Validates the plan, resolves every clip up front (MissingInput when one is
// absent, InvalidArgument on a rate mismatch) and embeds the probe for every
// segment.
SessionBundle build_session(const SessionPlan& plan, const ClipSource& clips);

// Playback files plus manifest.json into `dir` (created if needed).
void write_session(const SessionBundle& bundle, const std::filesystem::path& dir,
                   audio::WavEncoding encoding = audio::WavEncoding::float32);

// Reads manifest.json and every playback file referenced by it.
SessionBundle read_session(const std::filesystem::path& dir);

// The whole session timeline with every segment's playback at its offset and
// silence in the gaps.
audio::SampleBuffer continuous_playback(const SessionBundle& bundle);

}  // namespace oaekit::stimulus
