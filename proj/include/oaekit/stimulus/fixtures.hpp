#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "oaekit/audio/sample_buffer.hpp"

namespace oaekit::stimulus::fixtures {

// Names of the bundled synthetic clips referenced by default_tasks().
inline const std::vector<std::string>& clip_names() {
  static const std::vector<std::string> names = {"animal_chirps.wav", "digits_single.wav",
                                                 "digits_dual.wav"};
  return names;
}

// Sweeping chirps over a low noise bed (stand-in for the animal-sound task).
audio::SampleBuffer animal_chirps(double duration, int rate, std::uint64_t seed);
// A digit sequence of DTMF-like two-tone beeps on one harmonic "voice" in noise.
audio::SampleBuffer digits_single(double duration, int rate, std::uint64_t seed);
// Two overlapping beep voices (low and high fundamental) in noise.
audio::SampleBuffer digits_dual(double duration, int rate, std::uint64_t seed);

audio::SampleBuffer make_clip(const std::string& name, double duration, int rate,
                              std::uint64_t seed = 1);

// Writes all clips into `dir` as float32 WAV.
void write_clips(const std::filesystem::path& dir, double duration, int rate,
                 std::uint64_t seed = 1);

}  // namespace oaekit::stimulus::fixtures
