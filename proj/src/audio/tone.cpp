#include "oaekit/audio/tone.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oaekit/error.hpp"

namespace oaekit::audio {

double fade_gain(std::size_t i, std::size_t ramp_length) {
  if (ramp_length == 0 || i >= ramp_length) return 1.0;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) /
                               static_cast<double>(ramp_length)));
}

std::vector<double> fade_envelope(std::size_t length, std::size_t ramp_length) {
  ramp_length = std::min(ramp_length, length / 2);
  std::vector<double> env(length, 1.0);
  for (std::size_t i = 0; i < ramp_length; ++i) {
    const double g = fade_gain(i, ramp_length);
    env[i] = g;
    env[length - 1 - i] = g;
  }
  return env;
}

std::size_t fade_samples(double fade_seconds, int sample_rate) {
  if (fade_seconds < 0.0) throw InvalidArgument("fade length must be non-negative");
  return static_cast<std::size_t>(std::lround(fade_seconds * sample_rate));
}

SampleBuffer synth_tone(const ToneSpec& spec) {
  if (spec.sample_rate <= 0) throw InvalidArgument("synth_tone: sample rate must be positive");
  if (!(spec.frequency > 0.0) || spec.frequency >= spec.sample_rate / 2.0) {
    throw InvalidArgument("synth_tone: frequency " + std::to_string(spec.frequency) +
                          " Hz must lie strictly between 0 and Nyquist (" +
                          std::to_string(spec.sample_rate / 2.0) + " Hz)");
  }
  if (!(spec.amplitude > 0.0) || spec.amplitude > 1.0) {
    throw InvalidArgument("synth_tone: amplitude must be in (0, 1]");
  }
  if (spec.length == 0 && !(spec.duration > 0.0)) {
    throw InvalidArgument("synth_tone: duration must be positive");
  }

  const auto n = spec.length != 0
                     ? spec.length
                     : static_cast<std::size_t>(std::lround(spec.duration * spec.sample_rate));
  const auto env = fade_envelope(n, fade_samples(spec.fade, spec.sample_rate));
  // Phase is reduced modulo one period before scaling so that tones with an
  // integer number of cycles per frame repeat bit-exactly.
  const double rate = spec.sample_rate;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double cycles = std::fmod(spec.frequency * static_cast<double>(i), rate) / rate;
    out[i] = spec.amplitude * env[i] * std::sin(2.0 * std::numbers::pi * cycles + spec.phase);
  }
  return SampleBuffer(std::move(out), spec.sample_rate);
}

}  // namespace oaekit::audio
