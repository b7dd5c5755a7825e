#include "oaekit/sim/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "oaekit/csv.hpp"
#include "oaekit/error.hpp"
#include "oaekit/log.hpp"
#include "oaekit/oae/batch.hpp"
#include "oaekit/random.hpp"

namespace oaekit::sim {

namespace {

// Synthetic behaviour per task 2..4: mean time per answer (min), its spread
// and the probability of a correct answer.
struct TaskBehaviour {
  double time, time_sd, accuracy;
};
constexpr TaskBehaviour kBehaviour[3] = {{2.7, 0.7, 0.750}, {5.2, 0.9, 0.733}, {5.4, 0.9, 0.692}};

double draw(Rng& rng, const Range& r) { return r.first == r.second ? r.first : rng.uniform(r.first, r.second); }

}  // namespace

GroundTruth CohortMember::ground_truth() const {
  return GroundTruth{meta.participant_id, model, simulation.ground_truth};
}

std::string participant_id(std::size_t index, std::size_t count) {
  const int width = std::max(2, static_cast<int>(std::to_string(count).size()));
  char buf[32];
  std::snprintf(buf, sizeof buf, "P%0*zu", width, index + 1);
  return buf;
}

std::vector<std::size_t> allocate_counts(const std::vector<double>& fractions, std::size_t n) {
  const double total = std::accumulate(fractions.begin(), fractions.end(), 0.0);
  if (fractions.empty() || !(total > 0.0)) throw InvalidArgument("dominant fractions must sum to > 0");
  for (double f : fractions) {
    if (!(f >= 0.0)) throw InvalidArgument("dominant fractions must be non-negative");
  }
  std::vector<std::size_t> counts(fractions.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = fractions[i] / total * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    used += counts[i];
    rem.push_back({exact - static_cast<double>(counts[i]), i});
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < n; ++k, ++used) ++counts[rem[k % rem.size()].second];
  return counts;
}

Cohort simulate_cohort(const CohortSpec& spec, const stimulus::SessionBundle& session) {
  if (spec.participants < 2) throw InvalidArgument("a cohort needs at least 2 participants");
  if (spec.age_range.first < 20 || spec.age_range.second < spec.age_range.first) {
    throw InvalidArgument("age range must start at 20 or later");
  }
  if (spec.questions_per_task < 1) throw InvalidArgument("questions_per_task must be >= 1");
  if (spec.baseline_gain.first == spec.baseline_gain.second &&
      spec.gain_slope.first == spec.gain_slope.second) {
    log::warn("cohort gain sampler has zero variance: every participant gets the same gains");
  }
  const auto& freqs = session.manifest.frequencies;
  std::vector<double> fractions = spec.dominant_fractions;
  if (fractions.empty()) {
    fractions = freqs.size() == 3 ? std::vector<double>{1.0, 6.0, 12.0}
                                  : std::vector<double>(freqs.size(), 1.0);
  }
  if (fractions.size() != freqs.size()) {
    throw InvalidArgument("dominant_fractions needs one entry per probe frequency");
  }
  const auto counts = allocate_counts(fractions, spec.participants);

  // Dominant frequency per participant, shuffled by the cohort seed.
  std::vector<double> dominant;
  for (std::size_t i = 0; i < freqs.size(); ++i) dominant.insert(dominant.end(), counts[i], freqs[i]);
  Rng order(derive_seed(spec.seed, {0}));
  for (std::size_t i = dominant.size(); i > 1; --i) std::swap(dominant[i - 1], dominant[order.below(i)]);

  Cohort cohort;
  cohort.spec = spec;
  for (std::size_t p = 0; p < spec.participants; ++p) {
    Rng rng(derive_seed(spec.seed, {1, p}));
    CohortMember m;
    m.meta.participant_id = participant_id(p, spec.participants);
    m.meta.gender = rng.bernoulli(spec.female_share) ? "female" : "male";
    m.meta.age = spec.age_range.first +
                 static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.age_range.second - spec.age_range.first + 1)));
    m.dominant_frequency = dominant[p];

    const double g1 = draw(rng, spec.baseline_gain);
    m.gain_slope = draw(rng, spec.gain_slope);
    const double boost = m.meta.age >= 40 ? spec.older_task2_boost : 0.0;
    EarModel& e = m.model;
    e.oae_gain_per_load.clear();
    for (int t = 1; t <= 4; ++t) {
      e.oae_gain_per_load[t] = std::min(1.0, g1 + m.gain_slope * (t - 1) + (t > 1 ? boost : 0.0));
    }
    for (double f : freqs) e.frequency_sensitivity[f] = f == m.dominant_frequency ? 1.0 : draw(rng, spec.other_weight);
    if (spec.artificial) {
      for (auto& [t, g] : e.oae_gain_per_load) g = 0.0;
    }
    e.oae_phase = spec.oae_phase;
    e.oae_latency_ms = spec.oae_latency_ms;
    e.passive_reflectance = spec.reflectance;
    e.noise_floor_dbfs = spec.noise_floor_dbfs;
    e.seed = derive_seed(spec.seed, {2, p});

    for (int t = 2; t <= 4; ++t) {
      const auto& b = kBehaviour[t - 2];
      for (int q = 0; q < spec.questions_per_task; ++q) {
        BehavioralRecord r;
        r.participant_id = m.meta.participant_id;
        r.task_id = t;
        r.response_time_min = std::max(0.2, b.time + b.time_sd * rng.normal());
        r.correct = rng.bernoulli(b.accuracy);
        m.behavior.push_back(r);
      }
    }

    stimulus::SessionBundle own{session.manifest, session.playbacks};
    own.manifest.participant_id = m.meta.participant_id;
    m.manifest = own.manifest;
    m.simulation = spec.continuous ? simulate_session_continuous(own, e, spec.offset_samples)
                                   : simulate_session(own, e);
    cohort.members.push_back(std::move(m));
  }
  return cohort;
}

std::string format_participants_csv(const std::vector<ParticipantMeta>& meta) {
  std::string out = "participant_id,gender,age\n";
  for (const auto& m : meta) out += m.participant_id + "," + m.gender + "," + std::to_string(m.age) + "\n";
  return out;
}

std::string format_behavior_csv(const std::vector<BehavioralRecord>& records) {
  std::string out = "participant_id,task_id,response_time_min,correct\n";
  for (const auto& r : records) {
    out += r.participant_id + "," + std::to_string(r.task_id) + "," + csv::format_number(r.response_time_min) +
           "," + (r.correct ? "1" : "0") + "\n";
  }
  return out;
}

void write_cohort(const Cohort& cohort, const std::filesystem::path& dir, audio::WavEncoding encoding) {
  std::vector<ParticipantMeta> meta;
  std::vector<BehavioralRecord> behavior;
  for (const auto& m : cohort.members) {
    const auto pdir = dir / m.meta.participant_id;
    const auto rdir = pdir / oae::kRecordingsDir;
    std::filesystem::create_directories(rdir);
    stimulus::write_manifest(m.manifest, pdir / "manifest.json");
    write_ground_truth(m.ground_truth(), pdir / "ground_truth.json");
    if (cohort.spec.continuous) {
      audio::save_wav(m.simulation.continuous, rdir / oae::kContinuousRecording, encoding);
    } else {
      for (std::size_t i = 0; i < m.manifest.segments.size(); ++i) {
        audio::save_wav(m.simulation.recordings[i], rdir / m.manifest.segments[i].file, encoding);
      }
    }
    meta.push_back(m.meta);
    behavior.insert(behavior.end(), m.behavior.begin(), m.behavior.end());
  }
  csv::write_text(dir / "participants.csv", format_participants_csv(meta));
  csv::write_text(dir / "behavior.csv", format_behavior_csv(behavior));
}

}  // namespace oaekit::sim
