#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "oaekit/audio/sample_buffer.hpp"
#include "oaekit/stimulus/bundle.hpp"
#include "oaekit/stimulus/embed.hpp"

namespace oaekit::sim {

inline constexpr double kNoNoise = -std::numeric_limits<double>::infinity();

// OAE amplitude per task as a fraction of the probe amplitude, optionally
// scaled per probe frequency: gain(t, f) = g1 + w(f) (g_t - g1), w = 1 for
// frequencies absent from the map.
struct EarModel {
  std::map<int, double> oae_gain_per_load = {{1, 0.05}, {2, 0.08}, {3, 0.12}, {4, 0.18}};
  std::map<double, double> frequency_sensitivity;
  double oae_phase = 0.0;        // rad
  double oae_latency_ms = 0.0;
  double passive_reflectance = 1.0;
  double noise_floor_dbfs = kNoNoise;  // RMS of the white noise, dB re full scale
  std::uint64_t seed = 0;

  [[nodiscard]] double gain(int task_id, double f_s) const;
};

// Throws InvalidArgument naming the violated bound.
void validate(const EarModel& model);

EarModel artificial_ear_model(double reflectance, double noise_floor_dbfs, std::uint64_t seed);

// What was injected into one segment. expected_magnitude is the closed-form
// probe-bin amplitude |r + g e^{j phase}| * probe_amplitude once the
// normalization gain is compensated. The latency delays the OAE onset only.
struct OaeTruth {
  int segment_index = 0;
  int task_id = 1;
  double f_s_hz = 0.0;
  double oae_amplitude = 0.0;  // full scale, as present in the recording
  double oae_phase_rad = 0.0;
  double expected_magnitude = 0.0;
};

struct SimulatedRecording {
  audio::SampleBuffer audio;
  OaeTruth ground_truth;
};

// r * playback + OAE + white noise. The noise stream is derived from
// model.seed and `stream`.
SimulatedRecording simulate_ear(const stimulus::EmbeddedPlayback& playback, const EarModel& model,
                                int task_id, std::uint64_t stream = 0);

// simulate_ear with every gain zero.
SimulatedRecording artificial_ear(const stimulus::EmbeddedPlayback& playback, double reflectance,
                                  double noise_floor_dbfs, std::uint64_t seed, int task_id,
                                  std::uint64_t stream = 0);

struct SimulatedSession {
  std::vector<audio::SampleBuffer> recordings;  // per segment; empty in continuous mode
  audio::SampleBuffer continuous;               // continuous mode only
  std::vector<OaeTruth> ground_truth;           // 1:1 with manifest segments
  long offset_samples = 0;
};

// One recording per manifest segment (noise stream = segment index).
SimulatedSession simulate_session(const stimulus::SessionBundle& bundle, const EarModel& model);

// One recording of the whole timeline delayed by `offset_samples` (>= 0
// prepends silence plus noise, < 0 drops leading samples), padded by the same
// amount at the end.
SimulatedSession simulate_session_continuous(const stimulus::SessionBundle& bundle,
                                             const EarModel& model, long offset_samples);

}  // namespace oaekit::sim
