#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "oaekit/audio/fft.hpp"
#include "oaekit/audio/spectrum.hpp"
#include "oaekit/error.hpp"
#include "oaekit/stimulus/bundle.hpp"
#include "oaekit/stimulus/embed.hpp"
#include "oaekit/stimulus/fixtures.hpp"
#include "oaekit/stimulus/manifest.hpp"
#include "oaekit/stimulus/session.hpp"
#include "test_util.hpp"

using namespace oaekit;
using namespace oaekit::stimulus;
using audio::SampleBuffer;

namespace {

constexpr int kRate = 48000;

// Hann-windowed one-second excerpt from the middle of x, so that strong
// content outside a band cannot leak into it.
std::vector<double> windowed_second(std::span<const double> x, int rate) {
  const auto n = static_cast<std::size_t>(rate);
  REQUIRE(x.size() >= n);
  const std::size_t offset = (x.size() - n) / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n));
    out[i] = w * x[offset + i];
  }
  return out;
}

// Energy over 1 Hz bins in [lo, hi], by direct DFT summation.
double band_energy_dft(std::span<const double> x, int rate, double lo, double hi) {
  const auto head = windowed_second(x, rate);
  double e = 0.0;
  for (int f = static_cast<int>(std::ceil(lo)); f <= static_cast<int>(std::floor(hi)); ++f) {
    e += std::norm(testutil::dft_at(head, f, rate));
  }
  return e;
}

// Normalized correlation of two signals restricted to [lo, hi] through their
// 1 Hz DFT bins.
double band_correlation(std::span<const double> a, std::span<const double> b, int rate, double lo,
                        double hi) {
  const auto ha = windowed_second(a, rate);
  const auto hb = windowed_second(b, rate);
  double cross = 0.0, ea = 0.0, eb = 0.0;
  for (int f = static_cast<int>(std::ceil(lo)); f <= static_cast<int>(std::floor(hi)); ++f) {
    const auto xa = testutil::dft_at(ha, f, rate);
    const auto xb = testutil::dft_at(hb, f, rate);
    cross += std::real(xa * std::conj(xb));
    ea += std::norm(xa);
    eb += std::norm(xb);
  }
  return cross / std::sqrt(ea * eb);
}

// Message of the SchemaViolation thrown by parsing `text`, or "" if none.
std::string schema_error(const std::string& text) {
  try {
    manifest_from_json(text);
  } catch (const SchemaViolation& e) {
    return e.what();
  }
  return "";
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SessionPlan short_plan(double seconds = 1.0) {
  SessionPlan plan;
  plan.segment_duration = seconds;
  plan.gap = 0.25;
  return plan;
}

ClipSource fixture_clips(double seconds) {
  return [seconds](const std::string& name) { return fixtures::make_clip(name, seconds, kRate); };
}

}  // namespace

TEST_CASE("white noise task audio: probe band holds the probe alone") {
  const SampleBuffer noise(testutil::white_noise(2 * kRate, 0.1, 7), kRate);
  const auto e = embed_stimulus(noise, 3000.0, 0.1);
  CHECK(e.norm_gain <= 1.0);
  const auto residual = audio::scale(audio::subtract(e.audio, e.probe()), 1.0 / e.norm_gain);
  const auto probe = e.probe();
  const double e_res = band_energy_dft(residual.samples(), kRate, 2900, 3100);
  const double e_probe = band_energy_dft(probe.samples(), kRate, 2900, 3100) / (e.norm_gain * e.norm_gain);
  CHECK(10.0 * std::log10(e_probe / e_res) >= 40.0);
  const double e_orig = band_energy_dft(noise.samples(), kRate, 2900, 3100);
  CHECK(10.0 * std::log10(e_orig / e_res) >= 40.0);
}

TEST_CASE("silent task audio yields the pure probe tone") {
  const auto silent = SampleBuffer::zeros(kRate, kRate);
  const auto e = embed_stimulus(silent, 2000.0, 0.1);
  audio::ToneSpec tone;
  tone.frequency = 2000.0;
  tone.amplitude = 0.1;
  tone.sample_rate = kRate;
  tone.length = kRate;
  CHECK(e.norm_gain == 1.0);
  CHECK(e.audio == audio::synth_tone(tone));
}

TEST_CASE("embedding rejects probes whose notch leaves (0, Nyquist)") {
  const SampleBuffer noise(testutil::white_noise(kRate, 0.1, 1), kRate);
  CHECK_THROWS_AS(embed_stimulus(noise, 60.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(embed_stimulus(noise, 23950.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(embed_stimulus(SampleBuffer({}, kRate), 1000.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(embed_stimulus(noise, 1000.0, 0.0), InvalidArgument);
}

TEST_CASE("peak normalization records its gain and keeps the peak at the limit") {
  const SampleBuffer loud(testutil::sine(kRate, 500.0, 0.99, kRate), kRate);
  const auto e = embed_stimulus(loud, 2000.0, 0.1);
  CHECK(e.norm_gain < 1.0);
  CHECK(audio::peak_abs(e.audio.samples()) == doctest::Approx(0.95).epsilon(1e-12));
  const auto probe = e.probe();
  CHECK(audio::peak_abs(probe.samples()) == doctest::Approx(0.1 * e.norm_gain).epsilon(1e-6));
}

TEST_CASE("fixture clips: notch quality at 1, 2 and 3 kHz") {
  for (const auto& name : fixtures::clip_names()) {
    const auto clip = fixtures::make_clip(name, 2.0, kRate);
    for (double f : {1000.0, 2000.0, 3000.0}) {
      CAPTURE(name);
      CAPTURE(f);
      const auto e = embed_stimulus(clip, f, 0.1);
      const auto report = verify_notch(e, clip);
      CHECK(report.in_band_attenuation_db >= 40.0);
      CHECK(report.out_of_band_distortion_db <= 1.0);
      // Independent band-energy check over the first second.
      const auto residual = audio::scale(audio::subtract(e.audio, e.probe()), 1.0 / e.norm_gain);
      const double ratio = band_energy_dft(clip.samples(), kRate, f - 100, f + 100) /
                           band_energy_dft(residual.samples(), kRate, f - 100, f + 100);
      CHECK(10.0 * std::log10(ratio) >= 40.0);
      CHECK(band_correlation(e.audio.samples(), e.probe().samples(), kRate, f - 100, f + 100) >= 0.99);
    }
  }
}

TEST_CASE("out-of-band spectrum of the residual matches the original") {
  const SampleBuffer noise(testutil::white_noise(4 * kRate, 0.2, 11), kRate);
  const auto e = embed_stimulus(noise, 1000.0, 0.1);
  const auto residual = audio::scale(audio::subtract(e.audio, e.probe()), 1.0 / e.norm_gain);
  // 100 Hz-wide bands from FFT energy, skipping notch plus guard.
  const auto xo = audio::fft_forward(noise.samples());
  const auto xr = audio::fft_forward(residual.samples());
  const double df = static_cast<double>(kRate) / noise.size();
  for (double lo = 100.0; lo + 100.0 < 23000.0; lo += 100.0) {
    if (lo + 100.0 > 700.0 && lo < 1300.0) continue;
    double eo = 0.0, er = 0.0;
    for (auto k = static_cast<std::size_t>(lo / df); k < static_cast<std::size_t>((lo + 100.0) / df); ++k) {
      eo += std::norm(xo[k]);
      er += std::norm(xr[k]);
    }
    CAPTURE(lo);
    CHECK(std::abs(10.0 * std::log10(er / eo)) <= 1.0);
  }
}

TEST_CASE("verify_notch sentinels") {
  const auto clip = fixtures::make_clip("digits_single.wav", 1.0, kRate);
  EmbeddedPlayback self;
  self.audio = clip;
  self.notch_center = 2000.0;
  self.probe_amplitude = 1e-300;  // effectively no probe
  const auto r = verify_notch(self, clip);
  CHECK(std::abs(r.in_band_attenuation_db) < 0.01);
  CHECK(r.out_of_band_distortion_db < 0.01);

  const auto silent = SampleBuffer::zeros(kRate, kRate);
  const auto pure = embed_stimulus(silent, 2000.0, 0.1);
  const auto sentinel = verify_notch(pure, silent);
  CHECK(std::isinf(sentinel.in_band_attenuation_db));
  CHECK(sentinel.in_band_attenuation_db > 0.0);

  CHECK_THROWS_AS(verify_notch(pure, SampleBuffer::zeros(10, kRate)), InvalidArgument);
}

TEST_CASE("task and plan validation") {
  TaskSpec t1{1, {"x.wav"}, "", "", "", {}};
  CHECK_THROWS_AS(validate(t1), InvalidArgument);
  TaskSpec t2{2, {}, "p", "q", "a", {}};
  CHECK_THROWS_AS(validate(t2), InvalidArgument);
  TaskSpec t3{3, {"a.wav", "b.wav"}, "p", "q", "a", {0, 0}};
  CHECK_THROWS_AS(validate(t3), InvalidArgument);
  t3.clip_order = {1, 0};
  CHECK_NOTHROW(validate(t3));
  TaskSpec t4{4, {"a.wav"}, "", "q", "a", {}};
  CHECK_THROWS_AS(validate(t4), InvalidArgument);

  auto plan = short_plan();
  plan.stimulus_frequencies = {1000.0, 30000.0};
  CHECK_THROWS_WITH_AS(validate(plan), doctest::Contains("frequency exceeds Nyquist"), InvalidArgument);
  plan.stimulus_frequencies = {1000.0, 1000.0};
  CHECK_THROWS_AS(validate(plan), InvalidArgument);
  plan = short_plan();
  plan.tasks.erase(plan.tasks.begin());
  CHECK_THROWS_AS(validate(plan), InvalidArgument);
}

TEST_CASE("segment layout is ordered, non-overlapping and covers every pair") {
  auto plan = short_plan();
  plan.repetitions = 2;
  const auto segs = plan_segments(plan);
  REQUIRE(segs.size() == 24);
  std::set<std::pair<int, double>> pairs;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    CHECK(segs[i].index == static_cast<int>(i));
    CHECK(segs[i].length() == static_cast<std::size_t>(kRate));
    if (i > 0) CHECK(segs[i].start_sample >= segs[i - 1].end_sample);
    pairs.insert({segs[i].task_id, segs[i].f_s_hz});
  }
  CHECK(pairs.size() == 12);
  CHECK(segs[1].file == "seg01_task1_f1000_r1.wav");
}

TEST_CASE("build_session: 4 tasks x 3 frequencies -> 12 files and a manifest") {
  testutil::TempDir clips("clips");
  fixtures::write_clips(clips.path(), 1.5, kRate);
  testutil::TempDir out("session");
  const auto bundle = build_session(short_plan(), directory_clips(clips.path()));
  write_session(bundle, out.path());
  std::size_t wavs = 0;
  for (const auto& entry : std::filesystem::directory_iterator(out.path())) {
    if (entry.path().extension() == ".wav") ++wavs;
  }
  CHECK(wavs == 12);
  const auto m = read_manifest(out / "manifest.json");
  CHECK(m.segments.size() == 12);
  CHECK(m.probe_amplitude == 0.1);
  CHECK(m.notch_width_hz == 200.0);
  for (const auto& s : m.segments) CHECK(s.norm_gain_db <= 0.0);

  const auto loaded = read_session(out.path());
  REQUIRE(loaded.playbacks.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    const auto diff = audio::subtract(loaded.playbacks[i].audio, bundle.playbacks[i].audio);
    CHECK(audio::peak_abs(diff.samples()) < 1e-7);  // float32 storage
    CHECK(loaded.playbacks[i].norm_gain == doctest::Approx(bundle.playbacks[i].norm_gain).epsilon(1e-12));
  }
}

TEST_CASE("Task 1 playback at 2 kHz is a 0.1 tone with negligible energy outside the probe band") {
  auto plan = short_plan(10.0);
  plan.stimulus_frequencies = {2000.0};
  plan.tasks = {default_tasks()[0]};
  const auto bundle = build_session(plan, fixture_clips(1.0));
  REQUIRE(bundle.playbacks.size() == 1);
  const auto& audio = bundle.playbacks[0].audio;
  const auto spec = audio::fft_magnitude(audio, audio::Window::rectangular);
  const auto peak = spec.peak_bin();
  CHECK(spec.bin_frequencies[peak] == doctest::Approx(2000.0));
  // The 10 ms fades take 0.1% off the bin-centred amplitude.
  CHECK(spec.magnitudes[peak] == doctest::Approx(0.1).epsilon(2e-3));
  const auto x = audio::fft_forward(audio.samples());
  double total = 0.0, outside = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double f = static_cast<double>(k) * kRate / audio.size();
    total += std::norm(x[k]);
    if (std::abs(f - 2000.0) > 100.0) outside += std::norm(x[k]);
  }
  CHECK(10.0 * std::log10(outside / total) <= -60.0);
}

TEST_CASE("build_session error paths") {
  testutil::TempDir empty("noclips");
  CHECK_THROWS_AS(build_session(short_plan(), directory_clips(empty.path())), MissingInput);
  const ClipSource wrong_rate = [](const std::string&) {
    return SampleBuffer(std::vector<double>(44100, 0.0), 44100);
  };
  CHECK_THROWS_AS(build_session(short_plan(), wrong_rate), InvalidArgument);
  // Task 1 alone needs no clips at all.
  auto plan = short_plan();
  plan.tasks = {default_tasks()[0]};
  CHECK_NOTHROW(build_session(plan, directory_clips(empty.path())));
}

TEST_CASE("assemble_task_audio loops, truncates and honours clip order") {
  const ClipSource src = [](const std::string& name) {
    return SampleBuffer(std::vector<double>(3, name == "a" ? 0.1 : 0.2), kRate);
  };
  TaskSpec t{2, {"a", "b"}, "p", "q", "x", {1, 0}};
  const auto out = assemble_task_audio(t, src, 8, kRate);
  const std::vector<double> expect = {0.2, 0.2, 0.2, 0.1, 0.1, 0.1, 0.2, 0.2};
  CHECK(out.data() == expect);
}

TEST_CASE("manifest round trip is byte-identical") {
  const auto bundle = build_session(short_plan(), fixture_clips(1.0));
  const auto text = manifest_to_json(bundle.manifest);
  const auto again = manifest_to_json(manifest_from_json(text));
  CHECK(text == again);
  CHECK(manifest_from_json(text).segments == bundle.manifest.segments);
}

TEST_CASE("manifest schema violations name the JSON path") {
  const auto bundle = build_session(short_plan(), fixture_clips(1.0));
  auto j = nlohmann::ordered_json::parse(manifest_to_json(bundle.manifest));

  auto broken = j;
  broken["segments"][2]["f_s_hz"] = "fast";
  CHECK(starts_with(schema_error(broken.dump()), "$.segments[2].f_s_hz"));
  broken = j;
  broken.erase("schema_version");
  CHECK(starts_with(schema_error(broken.dump()), "$.schema_version"));
  broken = j;
  broken["segments"][3]["start_sample"] = 0;
  CHECK(starts_with(schema_error(broken.dump()), "$.segments[3]"));
  broken = j;
  broken["segments"][0]["file"] = "../escape.wav";
  CHECK_THROWS_AS(manifest_from_json(broken.dump()), SchemaViolation);
  CHECK_THROWS_AS(manifest_from_json("{not json"), SchemaViolation);
  CHECK_THROWS_AS(read_manifest("/nonexistent/manifest.json"), MissingInput);
}

TEST_CASE("identical plan and clips give a bit-identical bundle") {
  testutil::TempDir a("det_a"), b("det_b");
  write_session(build_session(short_plan(), fixture_clips(1.0)), a.path());
  write_session(build_session(short_plan(), fixture_clips(1.0)), b.path());
  for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
    CAPTURE(entry.path().filename().string());
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename().string()));
  }
}

TEST_CASE("fixtures are deterministic, in range and seed dependent") {
  for (const auto& name : fixtures::clip_names()) {
    const auto a = fixtures::make_clip(name, 1.0, kRate, 5);
    const auto b = fixtures::make_clip(name, 1.0, kRate, 5);
    const auto c = fixtures::make_clip(name, 1.0, kRate, 6);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    CHECK(audio::peak_abs(a.samples()) < 0.95);
    CHECK(audio::rms(a.samples()) > 0.02);
  }
  CHECK_THROWS_AS(fixtures::make_clip("speech.wav", 1.0, kRate), MissingInput);
}
