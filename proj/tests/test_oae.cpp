#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "oaekit/error.hpp"
#include "oaekit/oae/align.hpp"
#include "oaekit/oae/batch.hpp"
#include "oaekit/oae/extract.hpp"
#include "oaekit/oae/results_csv.hpp"
#include "oaekit/sim/ground_truth.hpp"
#include "oaekit/sim/simulate.hpp"
#include "oaekit/stimulus/bundle.hpp"
#include "oaekit/stimulus/fixtures.hpp"
#include "test_util.hpp"

using namespace oaekit;
using namespace oaekit::oae;
using audio::SampleBuffer;

namespace {

constexpr int kRate = 48000;
constexpr double kPi = std::numbers::pi;

SampleBuffer tone_plus(double f, double a, double seconds, double b = 0.0, double phase = 0.0,
                       double noise_rms = 0.0, std::uint64_t seed = 1) {
  const auto n = static_cast<std::size_t>(seconds * kRate);
  auto x = testutil::sine(n, f, a, kRate);
  if (b != 0.0) {
    const auto y = testutil::sine(n, f, b, kRate, phase);
    for (std::size_t i = 0; i < n; ++i) x[i] += y[i];
  }
  if (noise_rms > 0.0) {
    const auto w = testutil::white_noise(n, noise_rms, seed);
    for (std::size_t i = 0; i < n; ++i) x[i] += w[i];
  }
  return SampleBuffer(std::move(x), kRate);
}

stimulus::SessionBundle small_session(double seconds = 1.0) {
  stimulus::SessionPlan plan;
  plan.segment_duration = seconds;
  plan.gap = 0.2;
  return stimulus::build_session(plan, [seconds](const std::string& name) {
    return stimulus::fixtures::make_clip(name, seconds, kRate);
  });
}

MagnitudeRecord mag(const std::string& p, int task, double f, double m) {
  MagnitudeRecord r;
  r.participant_id = p;
  r.task_id = task;
  r.f_s_hz = f;
  r.magnitude = m;
  return r;
}

}  // namespace

TEST_CASE("bin-centred frames hold whole probe cycles") {
  std::size_t k = 0;
  CHECK(bin_centered_frame_length(1000.0, kRate, 4800, 100000, &k) == 4800);
  CHECK(k == 100);
  CHECK(bin_centered_frame_length(3000.0, kRate, 4800, 100000, &k) == 4800);
  for (double f : {997.0, 1234.5, 2718.0, 3001.0}) {
    const auto len = bin_centered_frame_length(f, kRate, 4800, 100000, &k);
    CAPTURE(f);
    // Exact centring may need a longer frame than allowed; the residual
    // offset is a tiny fraction of a bin.
    CHECK(std::abs(static_cast<double>(len) * f / kRate - static_cast<double>(k)) < 1e-3);
    CHECK(len >= 2400);
    CHECK(len <= 9600);
  }
  CHECK_THROWS_AS(bin_centered_frame_length(1000.0, kRate, 4800, 10), InvalidArgument);
}

TEST_CASE("pure tone magnitude equals its amplitude") {
  for (double f : {1000.0, 2000.0, 3000.0, 1234.5}) {
    const auto r = extract_magnitude(tone_plus(f, 0.1, 1.0), f);
    CAPTURE(f);
    CHECK(std::abs(r.magnitude - 0.1) < 1e-4);
    CHECK(r.window_count >= 1);
    if (f == std::floor(f)) CHECK(r.noise_floor <= 1e-6 * r.magnitude);
  }
}

TEST_CASE("coherent phasor addition") {
  const auto r = extract_magnitude(tone_plus(2000.0, 0.1, 1.0, 0.01), 2000.0);
  CHECK(std::abs(r.magnitude - 0.11) < 1e-4);
  for (double phase : {0.5, kPi / 2.0, 2.0, kPi}) {
    const double expected = std::abs(0.1 + std::polar(0.02, phase));
    const auto q = extract_magnitude(tone_plus(3000.0, 0.1, 1.0, 0.02, phase), 3000.0);
    CAPTURE(phase);
    CHECK(std::abs(q.magnitude / expected - 1.0) < 1e-3);
    const auto c = extract_magnitude(tone_plus(3000.0, 0.1, 1.0, 0.02, phase), 3000.0,
                                     ExtractOptions{.complex_average = true});
    CHECK(std::abs(c.magnitude / expected - 1.0) < 1e-3);
  }
}

TEST_CASE("tone in -40 dBFS white noise: mean over seeds within 1%") {
  double sum = 0.0, sum2 = 0.0;
  const int seeds = 30;
  for (int s = 0; s < seeds; ++s) {
    const auto r = extract_magnitude(tone_plus(2000.0, 0.1, 1.0, 0.0, 0.0, 0.01, 100 + s), 2000.0);
    CHECK(r.noise_floor > 0.0);
    sum += r.magnitude;
    sum2 += r.magnitude * r.magnitude;
  }
  const double mean = sum / seeds;
  const double sd = std::sqrt(sum2 / seeds - mean * mean);
  MESSAGE("magnitude mean " << mean << " sd " << sd);
  CHECK(std::abs(mean / 0.1 - 1.0) < 0.01);
}

TEST_CASE("scale equivariance and frame-count robustness") {
  const auto x = tone_plus(1000.0, 0.1, 2.0, 0.0, 0.0, 0.005, 3);
  const auto base = extract_magnitude(x, 1000.0);
  const auto scaled = extract_magnitude(audio::scale(x, 0.5), 1000.0);
  CHECK(scaled.magnitude == doctest::Approx(0.5 * base.magnitude).epsilon(1e-12));
  auto b1 = mag("P", 1, 1000, base.magnitude);
  auto b2 = mag("P", 2, 1000, 1.3 * base.magnitude);
  auto s1 = mag("P", 1, 1000, scaled.magnitude);
  auto s2 = mag("P", 2, 1000, 1.3 * scaled.magnitude);
  CHECK(sed(s2, s1).sed == doctest::Approx(0.25 * sed(b2, b1).sed).epsilon(1e-12));

  const auto one = extract_magnitude(tone_plus(1000.0, 0.1, 1.0), 1000.0);
  const auto two = extract_magnitude(tone_plus(1000.0, 0.1, 2.0), 1000.0);
  CHECK(two.window_count > one.window_count);
  CHECK(std::abs(two.magnitude / one.magnitude - 1.0) < 0.005);
}

TEST_CASE("extraction preconditions") {
  const auto x = tone_plus(1000.0, 0.1, 1.0);
  CHECK_THROWS_AS(extract_magnitude(x, 1000.0, 0, kRate / 4), InvalidArgument);
  CHECK_THROWS_AS(extract_magnitude(x, 1000.0, 0, x.size() + 1), InvalidArgument);
  CHECK_THROWS_AS(extract_magnitude(x, 50.0), InvalidArgument);
  CHECK_THROWS_AS(extract_magnitude(x, 23950.0), InvalidArgument);
}

TEST_CASE("sound energy difference") {
  CHECK(sed(mag("P", 2, 1000, 0.1), mag("P", 1, 1000, 0.1)).sed == 0.0);
  CHECK(sed(mag("P", 3, 1000, 0.12), mag("P", 1, 1000, 0.10)).sed == doctest::Approx(0.0044).epsilon(1e-12));
  CHECK(sed(mag("P", 4, 1000, 0.08), mag("P", 1, 1000, 0.10)).sed == doctest::Approx(0.0036).epsilon(1e-12));
  CHECK_THROWS_AS(sed(mag("P", 2, 1000, 0.1), mag("Q", 1, 1000, 0.1)), InvalidArgument);
  CHECK_THROWS_AS(sed(mag("P", 2, 1000, 0.1), mag("P", 1, 2000, 0.1)), InvalidArgument);
  CHECK_THROWS_AS(sed(mag("P", 2, 1000, 0.1), mag("P", 3, 1000, 0.1)), InvalidArgument);
}

TEST_CASE("alignment recovers a constant offset") {
  const auto session = small_session();
  const auto playback = stimulus::continuous_playback(session);
  for (long offset : {0L, 37L, -120L, 2000L}) {
    const auto rec = oae::remove_offset(playback, -offset);
    const auto a = estimate_offset(playback, rec, 2400);
    CAPTURE(offset);
    CHECK(a.lag == offset);
    CHECK(a.correlation > 0.9);
  }
  const auto far = oae::remove_offset(playback, -3000);
  CHECK_THROWS_AS(estimate_offset(playback, far, 2400), ProcessingFailure);
  const SampleBuffer noise(testutil::white_noise(playback.size(), 0.1, 9), kRate);
  CHECK_THROWS_AS(estimate_offset(playback, noise, 2400), ProcessingFailure);
}

TEST_CASE("batch extraction against simulator ground truth") {
  const auto session = small_session();
  sim::EarModel model;  // default gains 0.05, 0.08, 0.12, 0.18
  const auto simulated = sim::simulate_session(session, model);
  const auto result = batch_extract(session.manifest, simulated.recordings);
  CHECK(result.magnitudes.size() == 12);
  CHECK(result.seds.size() == 9);

  const double a = 0.1;
  for (const auto& s : result.seds) {
    const double g1 = 0.05, gt = model.oae_gain_per_load.at(s.task_id);
    const double closed = std::abs(std::pow(1 + gt, 2) - std::pow(1 + g1, 2)) * a * a;
    CAPTURE(s.task_id);
    CAPTURE(s.f_s_hz);
    CHECK(std::abs(s.sed / closed - 1.0) < 1e-3);
  }
  for (const auto& m : result.magnitudes) {
    const double gt = model.oae_gain_per_load.at(m.task_id);
    CHECK(std::abs(m.magnitude / (a * (1 + gt)) - 1.0) < 1e-3);
  }
  // Ordering: f_s ascending, then task.
  for (std::size_t i = 1; i < result.magnitudes.size(); ++i) {
    const auto& p = result.magnitudes[i - 1];
    const auto& q = result.magnitudes[i];
    CHECK((p.f_s_hz < q.f_s_hz || (p.f_s_hz == q.f_s_hz && p.task_id < q.task_id)));
  }
}

TEST_CASE("continuous recording with offset and alignment") {
  const auto session = small_session();
  sim::EarModel model;
  const auto sim = sim::simulate_session_continuous(session, model, 700);
  const auto playback = stimulus::continuous_playback(session);
  BatchOptions opts;
  opts.align = true;
  const auto r = batch_extract_continuous(session.manifest, sim.continuous, opts, &playback);
  REQUIRE(r.alignment_lag.has_value());
  CHECK(*r.alignment_lag == 700);
  for (const auto& m : r.magnitudes) {
    CHECK(std::abs(m.magnitude / (0.1 * (1 + model.oae_gain_per_load.at(m.task_id))) - 1.0) < 1e-3);
  }
  const auto lost = sim::simulate_session_continuous(session, model, 4000);
  CHECK_THROWS_AS(batch_extract_continuous(session.manifest, lost.continuous, opts, &playback),
                  ProcessingFailure);
}

TEST_CASE("normalization gain is compensated") {
  auto plan = stimulus::SessionPlan{};
  plan.segment_duration = 1.0;
  plan.stimulus_frequencies = {2000.0};
  const auto loud = [](const std::string&) {
    return SampleBuffer(testutil::sine(kRate, 500.0, 0.99, kRate), kRate);
  };
  const auto session = stimulus::build_session(plan, loud);
  bool attenuated = false;
  for (const auto& s : session.manifest.segments) attenuated |= s.norm_gain_db < -0.1;
  REQUIRE(attenuated);
  sim::EarModel model;
  const auto r = batch_extract(session.manifest, sim::simulate_session(session, model).recordings);
  for (const auto& m : r.magnitudes) {
    CHECK(std::abs(m.magnitude / (0.1 * (1 + model.oae_gain_per_load.at(m.task_id))) - 1.0) < 1e-3);
  }
}

TEST_CASE("missing baseline and missing recordings") {
  auto session = small_session();
  auto m = session.manifest;
  m.segments.erase(m.segments.begin() + 1);  // task 1 at 2000 Hz
  CHECK_THROWS_WITH_AS(require_baselines(m), doctest::Contains("baseline"), MissingInput);

  testutil::TempDir dir("batch");
  stimulus::write_session(session, dir.path());
  const auto sim = sim::simulate_session(session, sim::EarModel{});
  std::filesystem::create_directories(dir / kRecordingsDir);
  for (std::size_t i = 0; i < session.manifest.segments.size(); ++i) {
    audio::save_wav(sim.recordings[i], dir.path() / kRecordingsDir / session.manifest.segments[i].file);
  }
  const auto r = extract_session(dir.path());
  CHECK(r.magnitudes.size() == 12);
  const auto first = format_results_csv(to_rows(r));
  CHECK(format_results_csv(to_rows(extract_session(dir.path()))) == first);

  std::filesystem::remove(dir.path() / kRecordingsDir / session.manifest.segments[0].file);
  CHECK_THROWS_WITH_AS(extract_session(dir.path()), doctest::Contains("baseline"), MissingInput);
}

TEST_CASE("results CSV round trip and schema errors") {
  const auto session = small_session();
  const auto r = batch_extract(session.manifest, sim::simulate_session(session, sim::EarModel{}).recordings);
  auto rows = to_rows(r);
  const auto text = format_results_csv(rows);
  CHECK(text.rfind("participant_id,task_id,f_s_hz,magnitude,noise_floor,sed,window_count\n", 0) == 0);
  const auto back = parse_results_csv(text);
  REQUIRE(back.size() == rows.size());
  CHECK(format_results_csv(back) == text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].magnitude == doctest::Approx(rows[i].magnitude).epsilon(1e-8));
    CHECK(back[i].sed.has_value() == (rows[i].task_id != 1));
  }
  CHECK_THROWS_WITH_AS(parse_results_csv(text + "P01,2,1000,abc,0,0.1,3\n"), doctest::Contains("line 14"),
                       SchemaViolation);
  CHECK_THROWS_AS(parse_results_csv(text + "P01,1,1000,0.1,0,0.1,3\n"), SchemaViolation);
  CHECK_THROWS_AS(parse_results_csv(text + "P01,1,1000\n"), SchemaViolation);
  CHECK_THROWS_AS(parse_results_csv(""), SchemaViolation);
  CHECK_THROWS_AS(read_results_csv("/nonexistent.csv"), MissingInput);
}
