#pragma once

#include <limits>

#include "oaekit/audio/filter.hpp"
#include "oaekit/audio/sample_buffer.hpp"
#include "oaekit/audio/tone.hpp"

namespace oaekit::stimulus {

inline constexpr double kDefaultProbeAmplitude = 0.1;
inline constexpr double kNotchWidth = 200.0;
inline constexpr double kGuardBand = 100.0;

// How the probe band is cleared. The whole [f_s - width/2, f_s + width/2]
// band has to sit in the stop band, so the -3 dB edges of the realized
// band-stop lie `transition` Hz outside it.
struct EmbedOptions {
  double notch_width = kNotchWidth;
  double transition = 50.0;
  int notch_order = 8;
  double fade = audio::kDefaultFadeSeconds;
  double peak_limit = 0.95;
};

// Task audio with its probe band replaced by the probe tone, possibly scaled
// down to respect the peak limit. The probe in `audio` has amplitude
// probe_amplitude * norm_gain.
struct EmbeddedPlayback {
  audio::SampleBuffer audio;
  double notch_center = 0.0;
  double notch_width = kNotchWidth;
  double probe_amplitude = kDefaultProbeAmplitude;
  double norm_gain = 1.0;
  double probe_fade = audio::kDefaultFadeSeconds;

  [[nodiscard]] double effective_probe_amplitude() const { return probe_amplitude * norm_gain; }

  // The probe component exactly as it appears in `audio` (zeros when the
  // probe amplitude is 0).
  [[nodiscard]] audio::SampleBuffer probe() const;
};

audio::IirFilter probe_band_stop(double f_s, int sample_rate, const EmbedOptions& options = {});

// bandstop(task_audio) + tone(f_s, probe_amplitude), then peak-normalized.
EmbeddedPlayback embed_stimulus(const audio::SampleBuffer& task_audio, double f_s,
                                double probe_amplitude, const EmbedOptions& options = {});

struct NotchReport {
  // 10 log10(E_band(original) / E_band(embedded - probe)); +inf when the
  // residual band is empty (including the 0/0 case).
  double in_band_attenuation_db = std::numeric_limits<double>::infinity();
  // Largest |dB| difference between the residual and the original outside the
  // notch plus guard, over bins within 60 dB of the original's peak.
  double out_of_band_distortion_db = 0.0;
};

NotchReport verify_notch(const EmbeddedPlayback& embedded, const audio::SampleBuffer& original,
                         double guard = kGuardBand);

}  // namespace oaekit::stimulus
