#include "oaekit/sim/simulate.hpp"

#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "oaekit/audio/tone.hpp"
#include "oaekit/error.hpp"
#include "oaekit/random.hpp"

namespace oaekit::sim {

using audio::SampleBuffer;

double EarModel::gain(int task_id, double f_s) const {
  const auto it = oae_gain_per_load.find(task_id);
  if (it == oae_gain_per_load.end()) {
    throw InvalidArgument("no OAE gain for task " + std::to_string(task_id));
  }
  const auto base = oae_gain_per_load.find(1);
  const double g1 = base == oae_gain_per_load.end() ? 0.0 : base->second;
  const auto w = frequency_sensitivity.find(f_s);
  const double weight = w == frequency_sensitivity.end() ? 1.0 : w->second;
  return g1 + weight * (it->second - g1);
}

void validate(const EarModel& m) {
  for (const auto& [task, g] : m.oae_gain_per_load) {
    if (task < 1 || task > 4) throw InvalidArgument("gain map: task_id must be 1..4");
    if (!(g >= 0.0 && g <= 1.0)) {
      throw InvalidArgument("gain for task " + std::to_string(task) + " must be in [0, 1]");
    }
  }
  for (const auto& [f, w] : m.frequency_sensitivity) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("frequency sensitivity at " + std::to_string(f) + " Hz must be >= 0");
    }
  }
  if (!(m.oae_latency_ms >= 0.0)) throw InvalidArgument("oae_latency_ms must be >= 0");
  if (!(m.passive_reflectance >= 0.0 && m.passive_reflectance <= 1.0)) {
    throw InvalidArgument("passive_reflectance must be in [0, 1]");
  }
  if (!std::isfinite(m.oae_phase)) throw InvalidArgument("oae_phase must be finite");
  if (std::isnan(m.noise_floor_dbfs) || m.noise_floor_dbfs == std::numeric_limits<double>::infinity() ||
      m.noise_floor_dbfs > 0.0) {
    throw InvalidArgument("noise_floor_dbfs must be <= 0 dBFS or -inf");
  }
}

EarModel artificial_ear_model(double reflectance, double noise_floor_dbfs, std::uint64_t seed) {
  EarModel m;
  m.oae_gain_per_load = {{1, 0.0}, {2, 0.0}, {3, 0.0}, {4, 0.0}};
  m.passive_reflectance = reflectance;
  m.noise_floor_dbfs = noise_floor_dbfs;
  m.seed = seed;
  return m;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void add_noise(std::vector<double>& x, const EarModel& m, std::uint64_t stream) {
  if (m.noise_floor_dbfs == kNoNoise) return;
  const double sigma = std::pow(10.0, m.noise_floor_dbfs / 20.0);
  Rng rng(derive_seed(m.seed, {stream}));
  boost::random::normal_distribution<double> normal(0.0, sigma);
  for (double& v : x) v += normal(rng);
}

// Adds the delayed OAE tone to x[offset ...) over `length` samples and
// returns what was injected.
OaeTruth add_oae(std::vector<double>& x, std::size_t offset, std::size_t length,
                 const stimulus::EmbeddedPlayback& p, const EarModel& m, int task_id, int rate) {
  OaeTruth t;
  t.task_id = task_id;
  t.f_s_hz = p.notch_center;
  const double g = m.gain(task_id, p.notch_center);
  t.oae_amplitude = p.effective_probe_amplitude() * g;
  t.oae_phase_rad = m.oae_phase;
  // The latency gates the onset only; the phasor against the probe is the
  // model phase.
  const auto delay = static_cast<std::size_t>(std::lround(m.oae_latency_ms * 1e-3 * rate));
  t.expected_magnitude =
      p.probe_amplitude * std::abs(std::complex<double>(m.passive_reflectance, 0.0) +
                                   std::polar(g, m.oae_phase));
  if (t.oae_amplitude > 0.0 && delay < length) {
    audio::ToneSpec tone;
    tone.frequency = p.notch_center;
    tone.amplitude = t.oae_amplitude;
    tone.sample_rate = rate;
    tone.phase = m.oae_phase + kTwoPi * std::fmod(p.notch_center * static_cast<double>(delay), rate) / rate;
    tone.fade = p.probe_fade;
    tone.length = length - delay;
    const auto oae = audio::synth_tone(tone);
    for (std::size_t i = 0; i < oae.size(); ++i) x[offset + delay + i] += oae[i];
  }
  return t;
}

}  // namespace

SimulatedRecording simulate_ear(const stimulus::EmbeddedPlayback& playback, const EarModel& model,
                                int task_id, std::uint64_t stream) {
  validate(model);
  playback.audio.require_non_empty("simulate_ear");
  const int rate = playback.audio.sample_rate();
  std::vector<double> x(playback.audio.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = model.passive_reflectance * playback.audio[i];
  SimulatedRecording out;
  out.ground_truth = add_oae(x, 0, x.size(), playback, model, task_id, rate);
  add_noise(x, model, stream);
  out.audio = SampleBuffer(std::move(x), rate);
  return out;
}

SimulatedRecording artificial_ear(const stimulus::EmbeddedPlayback& playback, double reflectance,
                                  double noise_floor_dbfs, std::uint64_t seed, int task_id,
                                  std::uint64_t stream) {
  return simulate_ear(playback, artificial_ear_model(reflectance, noise_floor_dbfs, seed), task_id, stream);
}

SimulatedSession simulate_session(const stimulus::SessionBundle& bundle, const EarModel& model) {
  SimulatedSession s;
  const auto& segs = bundle.manifest.segments;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    auto r = simulate_ear(bundle.playbacks.at(i), model, segs[i].task_id, static_cast<std::uint64_t>(i));
    r.ground_truth.segment_index = segs[i].index;
    s.recordings.push_back(std::move(r.audio));
    s.ground_truth.push_back(r.ground_truth);
  }
  return s;
}

SimulatedSession simulate_session_continuous(const stimulus::SessionBundle& bundle,
                                             const EarModel& model, long offset_samples) {
  validate(model);
  const auto& m = bundle.manifest;
  const std::size_t timeline = m.timeline_length();
  const auto pad = static_cast<std::size_t>(std::abs(offset_samples));
  std::vector<double> x(timeline + pad, 0.0);
  SimulatedSession s;
  s.offset_samples = offset_samples;
  for (std::size_t i = 0; i < m.segments.size(); ++i) {
    const auto& seg = m.segments[i];
    const auto& p = bundle.playbacks.at(i);
    for (std::size_t n = 0; n < seg.length(); ++n) x[seg.start_sample + n] += model.passive_reflectance * p.audio[n];
    auto t = add_oae(x, seg.start_sample, seg.length(), p, model, seg.task_id, m.sample_rate);
    t.segment_index = seg.index;
    s.ground_truth.push_back(t);
  }
  // Shift: a positive offset means the recording lags the playback.
  std::vector<double> shifted(x.size(), 0.0);
  for (std::size_t n = 0; n < timeline; ++n) {
    const long j = static_cast<long>(n) + offset_samples;
    if (j >= 0 && static_cast<std::size_t>(j) < shifted.size()) shifted[static_cast<std::size_t>(j)] = x[n];
  }
  add_noise(shifted, model, ~std::uint64_t{0});
  s.continuous = SampleBuffer(std::move(shifted), m.sample_rate);
  return s;
}

}  // namespace oaekit::sim
