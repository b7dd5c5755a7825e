#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oaekit/error.hpp"
#include "oaekit/oae/batch.hpp"
#include "oaekit/oae/extract.hpp"
#include "oaekit/sim/cohort.hpp"
#include "oaekit/sim/ground_truth.hpp"
#include "oaekit/sim/simulate.hpp"
#include "oaekit/stimulus/bundle.hpp"
#include "oaekit/stimulus/fixtures.hpp"
#include "test_util.hpp"

using namespace oaekit;
using namespace oaekit::sim;
using audio::SampleBuffer;

namespace {

constexpr int kRate = 48000;

stimulus::SessionBundle small_session(double seconds = 1.0) {
  stimulus::SessionPlan plan;
  plan.segment_duration = seconds;
  plan.gap = 0.2;
  return stimulus::build_session(plan, [seconds](const std::string& name) {
    return stimulus::fixtures::make_clip(name, seconds, kRate);
  });
}

stimulus::EmbeddedPlayback probe_only(double f = 2000.0, double seconds = 1.0) {
  return stimulus::embed_stimulus(SampleBuffer::zeros(static_cast<std::size_t>(seconds * kRate), kRate), f, 0.1);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("zero gains, full reflectance and no noise reproduce the playback") {
  const auto p = small_session().playbacks[5];
  EarModel m = artificial_ear_model(1.0, kNoNoise, 1);
  const auto r = simulate_ear(p, m, 2);
  CHECK(r.audio == p.audio);
  CHECK(r.ground_truth.oae_amplitude == 0.0);
}

TEST_CASE("coherent OAE on the probe bin") {
  EarModel m;
  m.oae_gain_per_load = {{1, 0.1}, {2, 0.1}, {3, 0.1}, {4, 0.1}};
  const auto r = simulate_ear(probe_only(), m, 1);
  const auto x = oae::extract_magnitude(r.audio, 2000.0);
  CHECK(std::abs(x.magnitude - 0.11) < 1e-4);
  CHECK(r.ground_truth.expected_magnitude == doctest::Approx(0.11).epsilon(1e-12));

  const auto half = artificial_ear(probe_only(), 0.5, kNoNoise, 1, 1);
  CHECK(std::abs(oae::extract_magnitude(half.audio, 2000.0).magnitude - 0.05) < 1e-4);
}

TEST_CASE("latency up to 10 ms leaves the magnitude within 0.5%") {
  EarModel m;
  m.oae_phase = 0.7;
  const auto base = oae::extract_magnitude(simulate_ear(probe_only(), m, 4).audio, 2000.0).magnitude;
  for (double ms : {1.0, 3.3, 10.0}) {
    m.oae_latency_ms = ms;
    const auto r = simulate_ear(probe_only(), m, 4);
    const double got = oae::extract_magnitude(r.audio, 2000.0).magnitude;
    CAPTURE(ms);
    CHECK(std::abs(got / base - 1.0) < 0.005);
    CHECK(std::abs(got / r.ground_truth.expected_magnitude - 1.0) < 1e-3);
  }
}

TEST_CASE("model validation and unknown tasks") {
  EarModel m;
  m.passive_reflectance = 1.5;
  CHECK_THROWS_AS(validate(m), InvalidArgument);
  m = EarModel{};
  m.oae_gain_per_load[2] = -0.1;
  CHECK_THROWS_AS(validate(m), InvalidArgument);
  m = EarModel{};
  m.oae_latency_ms = -1.0;
  CHECK_THROWS_AS(validate(m), InvalidArgument);
  m = EarModel{};
  m.oae_gain_per_load.erase(3);
  CHECK_THROWS_AS(simulate_ear(probe_only(), m, 3), InvalidArgument);
}

TEST_CASE("artificial ear equals zero-gain simulate_ear bit for bit") {
  const auto p = small_session().playbacks[7];
  EarModel zero;
  zero.oae_gain_per_load = {{1, 0.0}, {2, 0.0}, {3, 0.0}, {4, 0.0}};
  zero.passive_reflectance = 0.8;
  zero.noise_floor_dbfs = -40.0;
  zero.seed = 99;
  const auto a = artificial_ear(p, 0.8, -40.0, 99, 3, 5);
  const auto b = simulate_ear(p, zero, 3, 5);
  CHECK(a.audio == b.audio);
}

TEST_CASE("noise level is the requested RMS") {
  const auto silent = stimulus::EmbeddedPlayback{SampleBuffer::zeros(4 * kRate, kRate), 1000.0, 200.0, 0.1, 1.0};
  EarModel m = artificial_ear_model(1.0, -40.0, 3);
  const auto r = simulate_ear(silent, m, 1);
  CHECK(testutil::rms(r.audio.samples()) == doctest::Approx(0.01).epsilon(0.01));
}

TEST_CASE("noise-free artificial ear: no SED beyond notch leakage") {
  // Identical playbacks across tasks give exactly zero.
  const auto p = probe_only(3000.0);
  const auto m = artificial_ear_model(1.0, kNoNoise, 1);
  const auto base = oae::extract_magnitude(artificial_ear(p, 1.0, kNoNoise, 1, 1).audio, 3000.0);
  for (int t = 2; t <= 4; ++t) {
    auto rec = oae::extract_magnitude(simulate_ear(p, m, t).audio, 3000.0);
    rec.task_id = t;
    auto b = base;
    b.task_id = 1;
    CHECK(oae::sed(rec, b).sed == 0.0);
  }
  // With task audio the residual notch content is all that differs.
  const auto session = small_session();
  const auto r = oae::batch_extract(session.manifest, simulate_session(session, m).recordings);
  for (const auto& s : r.seds) CHECK(s.sed <= 1e-4 * 0.01);
}

TEST_CASE("monotone gains give strictly increasing SEDs") {
  const auto session = small_session();
  EarModel m;
  const auto r = oae::batch_extract(session.manifest, simulate_session(session, m).recordings);
  for (double f : {1000.0, 2000.0, 3000.0}) {
    std::vector<double> d;
    for (const auto& s : r.seds) {
      if (s.f_s_hz == f) d.push_back(s.sed);
    }
    REQUIRE(d.size() == 3);
    CHECK(d[0] < d[1]);
    CHECK(d[1] < d[2]);
  }
}

TEST_CASE("ground truth JSON round trip and expected SEDs") {
  const auto session = small_session();
  EarModel m;
  m.frequency_sensitivity = {{1000.0, 0.5}};
  m.seed = 12345678901234567ULL;
  const auto s = simulate_session(session, m);
  REQUIRE(s.ground_truth.size() == session.manifest.segments.size());
  GroundTruth gt{"P01", m, s.ground_truth};
  const auto text = ground_truth_to_json(gt);
  const auto back = ground_truth_from_json(text);
  CHECK(ground_truth_to_json(back) == text);
  CHECK(back.model.seed == m.seed);
  CHECK(std::isinf(back.model.noise_floor_dbfs));
  const auto exp = expected_seds(back);
  CHECK(exp.size() == 9);
  for (const auto& e : exp) {
    const double g1 = 0.05;
    const double gt_ = g1 + m.frequency_sensitivity.count(e.f_s_hz) * 0.0 +
                       (e.f_s_hz == 1000.0 ? 0.5 : 1.0) * (m.oae_gain_per_load.at(e.task_id) - g1);
    CHECK(e.sed == doctest::Approx(std::abs(std::pow(1 + gt_, 2) - std::pow(1 + g1, 2)) * 0.01).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ground_truth_from_json("{}"), SchemaViolation);
}

TEST_CASE("cohort allocation, demographics and ids") {
  CHECK(allocate_counts({1, 6, 12}, 19) == std::vector<std::size_t>{1, 6, 12});
  CHECK(allocate_counts({1, 1, 1}, 4) == std::vector<std::size_t>{2, 1, 1});
  CHECK(participant_id(0, 19) == "P01");
  CHECK(participant_id(99, 120) == "P100");

  const auto session = small_session(0.6);
  CohortSpec spec;
  spec.noise_floor_dbfs = kNoNoise;
  const auto c = simulate_cohort(spec, session);
  REQUIRE(c.members.size() == 19);
  int at3k = 0;
  std::set<std::string> ids;
  for (const auto& m : c.members) {
    at3k += m.dominant_frequency == 3000.0;
    ids.insert(m.meta.participant_id);
    CHECK(m.meta.age >= 20);
    CHECK(m.meta.age <= 55);
    CHECK(m.behavior.size() == 12);
    CHECK(m.manifest.participant_id == m.meta.participant_id);
    for (int t = 2; t <= 4; ++t) CHECK(m.model.oae_gain_per_load.at(t) > m.model.oae_gain_per_load.at(t - 1));
  }
  CHECK(at3k == 12);
  CHECK(ids.size() == 19);

  spec.participants = 1;
  CHECK_THROWS_AS(simulate_cohort(spec, session), InvalidArgument);
  spec.participants = 3;
  spec.baseline_gain = {0.05, 0.05};
  spec.gain_slope = {0.03, 0.03};
  testutil::CaptureLog log;
  simulate_cohort(spec, session);
  CHECK(log.lines.size() == 1);
}

TEST_CASE("two-participant noise-free cohort gives the analytic SEDs") {
  const auto session = small_session();
  CohortSpec spec;
  spec.participants = 2;
  spec.noise_floor_dbfs = kNoNoise;
  const auto c = simulate_cohort(spec, session);
  for (const auto& m : c.members) {
    const auto r = oae::batch_extract(m.manifest, m.simulation.recordings);
    const auto exp = expected_seds(m.ground_truth());
    REQUIRE(exp.size() == r.seds.size());
    for (std::size_t i = 0; i < exp.size(); ++i) {
      CHECK(r.seds[i].f_s_hz == exp[i].f_s_hz);
      CHECK(r.seds[i].task_id == exp[i].task_id);
      CHECK(std::abs(r.seds[i].sed / exp[i].sed - 1.0) < 0.01);
    }
  }
}

TEST_CASE("cohort output is byte-identical for a fixed seed") {
  const auto session = small_session(0.6);
  CohortSpec spec;
  spec.participants = 3;
  spec.seed = 7;
  testutil::TempDir a("cohort_a"), b("cohort_b");
  write_cohort(simulate_cohort(spec, session), a.path());
  write_cohort(simulate_cohort(spec, session), b.path());
  std::size_t files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(a.path())) {
    if (!e.is_regular_file()) continue;
    ++files;
    const auto rel = std::filesystem::relative(e.path(), a.path());
    CAPTURE(rel.string());
    CHECK(slurp(e.path()) == slurp(b.path() / rel));
  }
  CHECK(files == 2 + 3 * (2 + 12));
  spec.seed = 8;
  testutil::TempDir c("cohort_c");
  write_cohort(simulate_cohort(spec, session), c.path());
  CHECK(slurp(a / "P01/ground_truth.json") != slurp(c / "P01/ground_truth.json"));
}
