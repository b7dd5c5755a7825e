#pragma once

#include <cstddef>
#include <vector>

#include "oaekit/audio/sample_buffer.hpp"

namespace oaekit::audio {

inline constexpr double kDefaultFadeSeconds = 0.010;

struct ToneSpec {
  double frequency = 1000.0;  // Hz, strictly inside (0, rate/2)
  double amplitude = 0.1;     // full scale, in (0, 1]
  double duration = 1.0;      // seconds
  int sample_rate = kDefaultSampleRate;
  double phase = 0.0;         // radians
  double fade = kDefaultFadeSeconds;  // raised-cosine ramp at each end, seconds
  std::size_t length = 0;             // samples; overrides `duration` when non-zero
};

// Raised-cosine onset gain for sample i of an n-sample ramp:
// 0.5 (1 - cos(pi i / n)); 1 when n == 0 or i >= n.
double fade_gain(std::size_t i, std::size_t ramp_length);

// Per-sample envelope of a buffer of `length` samples with ramps of
// `ramp_length` at both ends (ramps are clamped to half the length).
std::vector<double> fade_envelope(std::size_t length, std::size_t ramp_length);

std::size_t fade_samples(double fade_seconds, int sample_rate);

// samples[n] = amplitude * sin(2 pi f n / rate + phase) * envelope[n]
SampleBuffer synth_tone(const ToneSpec& spec);

}  // namespace oaekit::audio
