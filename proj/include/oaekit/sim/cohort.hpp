#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "oaekit/audio/wav.hpp"
#include "oaekit/sim/ground_truth.hpp"
#include "oaekit/sim/simulate.hpp"
#include "oaekit/stimulus/bundle.hpp"

namespace oaekit::sim {

struct ParticipantMeta {
  std::string participant_id;
  std::string gender;  // female, male or unspecified
  int age = 0;
};

struct BehavioralRecord {
  std::string participant_id;
  int task_id = 2;
  double response_time_min = 0.0;
  bool correct = false;
};

using Range = std::pair<double, double>;

struct CohortSpec {
  std::size_t participants = 19;
  std::uint64_t seed = 1;
  Range baseline_gain = {0.03, 0.07};  // g1
  Range gain_slope = {0.02, 0.06};     // g_t = g1 + s (t - 1)
  // Share of participants whose OAE modulation is strongest at each probe
  // frequency, parallel to the session frequencies. Empty: 1/19, 6/19,
  // 12/19 for three frequencies, uniform otherwise.
  std::vector<double> dominant_fractions;
  Range other_weight = {0.3, 0.7};  // w(f) away from the dominant frequency
  double older_task2_boost = 0.0;   // added to g2..g4 for ages 40+
  double noise_floor_dbfs = -40.0;
  double oae_phase = 0.0;
  double oae_latency_ms = 0.0;
  double reflectance = 1.0;
  bool artificial = false;
  bool continuous = false;
  long offset_samples = 0;  // continuous mode only
  std::pair<int, int> age_range = {20, 55};
  double female_share = 8.0 / 19.0;
  int questions_per_task = 4;
};

struct CohortMember {
  ParticipantMeta meta;
  EarModel model;
  double dominant_frequency = 0.0;
  double gain_slope = 0.0;
  stimulus::Manifest manifest;  // shared playback, participant's own id
  SimulatedSession simulation;
  std::vector<BehavioralRecord> behavior;

  [[nodiscard]] GroundTruth ground_truth() const;
};

struct Cohort {
  CohortSpec spec;
  std::vector<CohortMember> members;
};

// Participant ids P01, P02, ...
std::string participant_id(std::size_t index, std::size_t count);

// Per-frequency participant counts from fractions by largest remainder.
std::vector<std::size_t> allocate_counts(const std::vector<double>& fractions, std::size_t n);

Cohort simulate_cohort(const CohortSpec& spec, const stimulus::SessionBundle& session);

// Layout under `dir`: P01/ ... each with manifest.json, recordings/ and
// ground_truth.json; participants.csv and behavior.csv at the top.
void write_cohort(const Cohort& cohort, const std::filesystem::path& dir,
                  audio::WavEncoding encoding = audio::WavEncoding::float32);

std::string format_participants_csv(const std::vector<ParticipantMeta>& meta);
std::string format_behavior_csv(const std::vector<BehavioralRecord>& records);

}  // namespace oaekit::sim
