#include "oaekit/stimulus/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "oaekit/audio/spectrum.hpp"
#include "oaekit/error.hpp"

namespace oaekit::stimulus {

namespace {

std::string hz(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

using audio::SampleBuffer;

SampleBuffer EmbeddedPlayback::probe() const {
  const double amp = effective_probe_amplitude();
  if (amp == 0.0) return SampleBuffer::zeros(audio.size(), audio.sample_rate());
  audio::ToneSpec tone;
  tone.frequency = notch_center;
  tone.amplitude = amp;
  tone.sample_rate = audio.sample_rate();
  tone.fade = probe_fade;
  tone.length = audio.size();
  return audio::synth_tone(tone);
}

audio::IirFilter probe_band_stop(double f_s, int sample_rate, const EmbedOptions& options) {
  const double half = options.notch_width / 2.0;
  const double nyquist = sample_rate / 2.0;
  if (!(options.notch_width > 0.0)) throw InvalidArgument("notch width must be positive");
  if (!(f_s - half > 0.0)) {
    throw InvalidArgument("probe frequency " + hz(f_s) + " Hz too close to DC for a " +
                          std::to_string(options.notch_width) + " Hz notch (lower edge <= 0)");
  }
  if (!(f_s + half < nyquist)) {
    throw InvalidArgument("probe frequency " + hz(f_s) +
                          " Hz too close to Nyquist for a " +
                          std::to_string(options.notch_width) + " Hz notch");
  }
  const double low = f_s - half - options.transition;
  const double high = f_s + half + options.transition;
  if (!(low > 0.0) || !(high < nyquist)) {
    throw InvalidArgument("probe frequency " + hz(f_s) +
                          " Hz leaves no room for the notch transition band");
  }
  return audio::design_filter({audio::FilterKind::band_stop, {low, high}, options.notch_order},
                              sample_rate);
}

EmbeddedPlayback embed_stimulus(const SampleBuffer& task_audio, double f_s,
                                double probe_amplitude, const EmbedOptions& options) {
  task_audio.require_non_empty("embed_stimulus");
  if (!(probe_amplitude > 0.0) || probe_amplitude > 1.0) {
    throw InvalidArgument("probe amplitude must be in (0, 1]");
  }
  if (!(options.peak_limit > 0.0) || options.peak_limit > 1.0) {
    throw InvalidArgument("peak limit must be in (0, 1]");
  }
  const auto stop = probe_band_stop(f_s, task_audio.sample_rate(), options);

  EmbeddedPlayback out;
  out.notch_center = f_s;
  out.notch_width = options.notch_width;
  out.probe_amplitude = probe_amplitude;
  out.probe_fade = options.fade;
  out.audio = task_audio;  // for probe() below
  const auto probe = out.probe();

  auto mixed = audio::filtfilt(task_audio.samples(), stop);
  for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] += probe[i];
  const double peak = audio::peak_abs(mixed);
  if (peak > options.peak_limit) {
    out.norm_gain = options.peak_limit / peak;
    for (double& v : mixed) v *= out.norm_gain;
  }
  out.audio = SampleBuffer(std::move(mixed), task_audio.sample_rate());
  return out;
}

NotchReport verify_notch(const EmbeddedPlayback& embedded, const SampleBuffer& original,
                         double guard) {
  if (embedded.audio.sample_rate() != original.sample_rate() ||
      embedded.audio.size() != original.size()) {
    throw InvalidArgument("verify_notch: embedded and original differ in length or rate");
  }
  original.require_non_empty("verify_notch");
  const int rate = original.sample_rate();

  auto residual = audio::subtract(embedded.audio, embedded.probe());
  if (embedded.norm_gain != 1.0) residual = audio::scale(residual, 1.0 / embedded.norm_gain);

  audio::WelchOptions opts;
  opts.segment_length = std::min<std::size_t>(original.size(), static_cast<std::size_t>(rate));
  const auto p_orig = audio::welch(original.samples(), rate, opts);
  const auto p_res = audio::welch(residual.samples(), rate, opts);

  const double half = embedded.notch_width / 2.0;
  const double lo = embedded.notch_center - half, hi = embedded.notch_center + half;
  NotchReport report;
  double e_orig = 0.0, e_res = 0.0;
  for (std::size_t k = 0; k < p_orig.power.size(); ++k) {
    const double f = p_orig.frequencies[k];
    if (f >= lo && f <= hi) {
      e_orig += p_orig.power[k];
      e_res += p_res.power[k];
    }
  }
  if (e_res > 0.0 && e_orig > 0.0) {
    report.in_band_attenuation_db = 10.0 * std::log10(e_orig / e_res);
  } else if (e_res > 0.0) {
    report.in_band_attenuation_db = -std::numeric_limits<double>::infinity();
  }

  const double floor = 1e-6 * *std::max_element(p_orig.power.begin(), p_orig.power.end());
  // k = 0 is skipped: per-segment mean removal leaves only round-off there.
  for (std::size_t k = 1; k < p_orig.power.size(); ++k) {
    const double f = p_orig.frequencies[k];
    if (f >= lo - guard && f <= hi + guard) continue;
    if (!(p_orig.power[k] > floor) || p_orig.power[k] == 0.0) continue;
    const double dev = std::abs(10.0 * std::log10(std::max(p_res.power[k], 1e-300) / p_orig.power[k]));
    report.out_of_band_distortion_db = std::max(report.out_of_band_distortion_db, dev);
  }
  return report;
}

}  // namespace oaekit::stimulus
