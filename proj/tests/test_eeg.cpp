#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oaekit/eeg/band_power.hpp"
#include "oaekit/eeg/ica.hpp"
#include "oaekit/eeg/io.hpp"
#include "oaekit/eeg/preprocess.hpp"
#include "oaekit/eeg/synthetic.hpp"
#include "oaekit/error.hpp"
#include "oaekit/random.hpp"
#include "test_util.hpp"

using namespace oaekit;
using namespace oaekit::eeg;

namespace {

constexpr double kPi = std::numbers::pi;

EegRecording make_recording(const Eigen::MatrixXd& data, int rate) {
  EegRecording rec;
  rec.data = data;
  rec.sample_rate = rate;
  for (Eigen::Index c = 0; c < data.rows(); ++c) rec.channel_names.push_back("C" + std::to_string(c + 1));
  return rec;
}

Eigen::RowVectorXd sine(Eigen::Index n, int rate, double f, double amp, double phase = 0.0) {
  Eigen::RowVectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = amp * std::sin(2 * kPi * f * i / rate + phase);
  return out;
}

Eigen::RowVectorXd sawtooth(Eigen::Index n, int rate, double f) {
  Eigen::RowVectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double cyc = f * i / rate;
    out(i) = 2.0 * (cyc - std::floor(cyc)) - 1.0;
  }
  return out;
}

Eigen::RowVectorXd square(Eigen::Index n, int rate, double f) {
  Eigen::RowVectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = std::sin(2 * kPi * f * i / rate) >= 0 ? 1.0 : -1.0;
  return out;
}

double abs_corr(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  const Eigen::RowVectorXd x = a.array() - a.mean(), y = b.array() - b.mean();
  return std::abs(x.dot(y)) / std::sqrt(x.squaredNorm() * y.squaredNorm());
}

// Each true source is matched by its best recovered component; the match
// must be one-to-one.
double worst_match(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& recovered) {
  double worst = 1.0;
  std::vector<bool> used(static_cast<std::size_t>(recovered.rows()), false);
  for (Eigen::Index s = 0; s < truth.rows(); ++s) {
    double best = 0.0;
    Eigen::Index at = -1;
    for (Eigen::Index c = 0; c < recovered.rows(); ++c) {
      const double r = abs_corr(truth.row(s), recovered.row(c));
      if (r > best) best = r, at = c;
    }
    if (at < 0 || used[static_cast<std::size_t>(at)]) return 0.0;
    used[static_cast<std::size_t>(at)] = true;
    worst = std::min(worst, best);
  }
  return worst;
}

Eigen::MatrixXd random_mixing(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  }
  return m;
}

double rms(const Eigen::RowVectorXd& x) { return std::sqrt(x.squaredNorm() / static_cast<double>(x.size())); }

}  // namespace

TEST_CASE("preprocessing removes line noise and DC and keeps alpha") {
  const int rate = 250;
  const Eigen::Index n = 20 * rate;
  Eigen::MatrixXd d(2, n);
  d.row(0) = sine(n, rate, 50.0, 20.0);
  d.row(1) = sine(n, rate, 10.0, 20.0);
  PreprocessOptions no_ref;
  no_ref.common_average = false;
  const auto out = preprocess(make_recording(d, rate), no_ref);
  // Steady state: the first and last 2 s carry the filters' edge transients.
  const Eigen::Index edge = 2 * rate, len = n - 2 * edge;
  CHECK(20.0 * std::log10(rms(out.data.row(0).segment(edge, len)) / rms(d.row(0).segment(edge, len))) <= -60.0);
  CHECK(rms(out.data.row(1).segment(edge, len)) == doctest::Approx(rms(d.row(1).segment(edge, len))).epsilon(0.01));

  d.row(0).setConstant(75.0);
  d.row(1).setConstant(-30.0);
  const auto flat = preprocess(make_recording(d, rate), no_ref);
  CHECK(flat.data.cwiseAbs().maxCoeff() < 1e-6 * 75.0);
}

TEST_CASE("common average reference and preconditions") {
  const int rate = 200;
  const Eigen::Index n = 10 * rate;
  Eigen::MatrixXd d(3, n);
  for (Eigen::Index c = 0; c < 3; ++c) d.row(c) = sine(n, rate, 5.0 + 4.0 * c, 10.0 + c);
  auto rec = make_recording(d, rate);
  rec.markers = {{200, "1:start"}, {800, "1:end"}};
  const auto out = preprocess(rec);
  CHECK(out.data.colwise().sum().cwiseAbs().maxCoeff() < 1e-9);
  CHECK(out.markers == rec.markers);
  CHECK(out.channel_names == rec.channel_names);

  CHECK_THROWS_AS(preprocess(make_recording(d.topRows(1), rate)), InvalidArgument);
  CHECK_THROWS_AS(preprocess(make_recording(d, 50)), InvalidArgument);
  auto bad = rec;
  bad.channel_names.pop_back();
  CHECK_THROWS_AS(preprocess(bad), InvalidArgument);
}

TEST_CASE("FastICA separates a sine and a sawtooth") {
  const int rate = 250;
  const Eigen::Index n = 20 * rate;
  Eigen::MatrixXd s(2, n);
  s.row(0) = sine(n, rate, 7.0, 1.0);
  s.row(1) = sawtooth(n, rate, 13.0);
  const Eigen::MatrixXd a = random_mixing(2, 4);
  const auto rec = make_recording(a * s, rate);
  const auto ica = fastica(rec);
  CHECK(ica.converged);
  CHECK(worst_match(s, ica.sources) >= 0.95);

  CHECK((ica.unmixing * ica.mixing - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((ica.mixing * ica.unmixing - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-6);
  const Eigen::MatrixXd cov = ica.sources * ica.sources.transpose() / static_cast<double>(n);
  CHECK((cov - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-6);

  const auto cleaned = reject_components(ica, {});
  CHECK(cleaned.rejected.empty());
  CHECK((cleaned.recording.data - rec.data).cwiseAbs().maxCoeff() < 1e-6);

  RejectionPolicy all;
  all.indices = {0, 1};
  CHECK_THROWS_AS(reject_components(ica, all), InvalidArgument);
  all.indices = {5};
  CHECK_THROWS_AS(reject_components(ica, all), InvalidArgument);

  IcaOptions seeded;
  seeded.seed = 9;
  const auto a1 = fastica(rec, seeded), a2 = fastica(rec, seeded);
  CHECK(a1.unmixing == a2.unmixing);
  CHECK(worst_match(s, a1.sources) >= 0.95);
}

TEST_CASE("FastICA starts at the fixed point for white independent input") {
  const int rate = 250;
  const Eigen::Index n = 40 * rate;
  Eigen::MatrixXd s(2, n);
  s.row(0) = sine(n, rate, 7.0, 1.0);
  s.row(1) = square(n, rate, 3.0);
  for (Eigen::Index c = 0; c < 2; ++c) {
    s.row(c).array() -= s.row(c).mean();
    s.row(c) /= rms(s.row(c));
  }
  const auto ica = fastica(make_recording(s, rate));
  CHECK(ica.converged);
  CHECK(ica.iterations <= 5);
}

TEST_CASE("FastICA preconditions and rank") {
  const int rate = 250;
  const Eigen::Index n = 10 * rate;
  Eigen::MatrixXd s(3, n);
  s.row(0) = sine(n, rate, 7.0, 1.0);
  s.row(1) = sawtooth(n, rate, 13.0);
  s.row(2) = s.row(0) - s.row(1);
  const auto rec = make_recording(s, rate);
  IcaOptions opts;
  opts.n_components = 4;
  CHECK_THROWS_AS(fastica(rec, opts), InvalidArgument);
  opts.n_components = 3;
  CHECK_THROWS_AS(fastica(rec, opts), ProcessingFailure);
  const auto ica = fastica(rec);
  CHECK(ica.components() == 2);
  CHECK((ica.unmixing * ica.mixing - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((reject_components(ica, {}).recording.data - rec.data).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("recovery of 2-4 sources over random mixings") {
  const int rate = 250;
  const Eigen::Index n = 20 * rate;
  int good = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const Eigen::Index k = 2 + t % 3;
    Eigen::MatrixXd s(k, n);
    s.row(0) = sine(n, rate, 7.0, 1.0);
    s.row(1) = sawtooth(n, rate, 13.0);
    if (k > 2) s.row(2) = square(n, rate, 3.3);
    if (k > 3) {
      Rng rng(derive_seed(77, {static_cast<std::uint64_t>(t)}));
      for (Eigen::Index i = 0; i < n; ++i) s(3, i) = rng.uniform(-1.0, 1.0);
    }
    const auto ica = fastica(make_recording(random_mixing(k, 100 + t) * s, rate));
    good += worst_match(s, ica.sources) >= 0.95;
  }
  CHECK(good >= 19);
}

TEST_CASE("heuristic rejects an injected spike source") {
  const int rate = 250;
  const Eigen::Index n = 30 * rate;
  Eigen::MatrixXd s(4, n);
  s.row(0) = sine(n, rate, 7.0, 1.0);
  s.row(1) = sawtooth(n, rate, 13.0);
  Rng rng(5);
  for (Eigen::Index i = 0; i < n; ++i) s(2, i) = rng.normal();
  s.row(3).setZero();
  std::vector<Eigen::Index> spikes;
  for (Eigen::Index i = rate; i < n; i += 3 * rate) {
    spikes.push_back(i);
    for (Eigen::Index j = -10; j <= 10; ++j) s(3, i + j) = 8.0 * std::exp(-0.5 * (j / 3.0) * (j / 3.0));
  }
  const Eigen::MatrixXd a = random_mixing(4, 21);
  const auto rec = make_recording(a * s, rate);
  Eigen::MatrixXd clean_sources = s;
  clean_sources.row(3).setZero();
  const Eigen::MatrixXd truth = a * clean_sources;

  const auto ica = fastica(rec);
  RejectionPolicy policy;
  policy.mode = RejectionPolicy::Mode::heuristic;
  const auto flagged = flag_artifacts(ica, policy);
  REQUIRE(flagged.size() == 1);
  CHECK(abs_corr(ica.sources.row(static_cast<Eigen::Index>(flagged[0])), s.row(3)) > 0.95);

  testutil::CaptureLog log;
  const auto cleaned = reject_components(ica, policy);
  CHECK(cleaned.rejected == flagged);
  CHECK(log.lines.size() == 1);
  double before = 0.0, after = 0.0;
  for (auto i : spikes) {
    before = std::max(before, (rec.data.col(i) - truth.col(i)).cwiseAbs().maxCoeff());
    after = std::max(after, (cleaned.recording.data.col(i) - truth.col(i)).cwiseAbs().maxCoeff());
  }
  CHECK(after <= 0.1 * before);
}

TEST_CASE("slow frontal components are flagged only with a frontal topography") {
  const int rate = 250;
  const Eigen::Index n = 30 * rate;
  Eigen::MatrixXd s(3, n);
  s.row(0) = sine(n, rate, 1.5, 1.0);
  s.row(1) = sawtooth(n, rate, 13.0);
  s.row(2) = sine(n, rate, 9.0, 1.0);
  const std::vector<std::string> names = {"Fp1", "Fp2", "Cz", "Pz", "O1"};
  for (bool frontal : {true, false}) {
    Eigen::MatrixXd a = random_mixing(5, 3).leftCols(3) * 0.2;
    for (Eigen::Index c = 0; c < 5; ++c) a(c, 0) = (c < 2) == frontal ? 1.0 : 0.05;
    auto rec = make_recording(a * s, rate);
    rec.channel_names = names;
    const auto ica = fastica(rec);
    RejectionPolicy policy;
    policy.mode = RejectionPolicy::Mode::heuristic;
    const auto flagged = flag_artifacts(ica, policy);
    if (frontal) {
      REQUIRE(flagged.size() == 1);
      CHECK(abs_corr(ica.sources.row(static_cast<Eigen::Index>(flagged[0])), s.row(0)) > 0.95);
    } else {
      CHECK(flagged.empty());
    }
  }
}

TEST_CASE("band power of a 10 Hz sine") {
  const int rate = 250;
  for (double amp : {1.0, 20.0}) {
    const auto x = sine(8 * rate, rate, 10.0, amp, 0.3);
    const std::vector<double> v(x.data(), x.data() + x.size());
    const auto p = band_powers(v, rate);
    CHECK(p.alpha == doctest::Approx(amp * amp / 2).epsilon(0.01));
    CHECK(p.delta <= 0.01 * p.alpha);
    CHECK(p.theta <= 0.01 * p.alpha);
    CHECK(p.beta <= 0.01 * p.alpha);
    CHECK(std::abs(p.delta + p.theta + p.alpha + p.beta - p.total) <= 1e-9 * p.total);
  }
  CHECK_THROWS_AS(band_powers(std::vector<double>(499, 0.0), rate), InvalidArgument);
  const auto zero = band_powers(std::vector<double>(1000, 0.0), rate);
  CHECK(zero.total == 0.0);
  CHECK(zero.alpha == 0.0);
}

TEST_CASE("band power properties on noise") {
  const int rate = 256;
  double sum[4] = {0, 0, 0, 0};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto x = testutil::white_noise(16 * rate, 3.0, seed);
    const auto p = band_powers(x, rate);
    CHECK(std::abs(p.delta + p.theta + p.alpha + p.beta - p.total) <= 1e-9 * p.total);
    CHECK(p.delta >= 0.0);
    CHECK(p.total >= p.beta);
    sum[0] += p.delta, sum[1] += p.theta, sum[2] += p.alpha, sum[3] += p.beta;
    auto scaled = x;
    for (auto& v : scaled) v *= 2.5;
    CHECK(band_powers(scaled, rate).total == doctest::Approx(6.25 * p.total).epsilon(1e-12));
  }
  // Power per Hz should be flat.
  const double density = sum[3] / 17.0;
  CHECK(sum[0] / 3.5 == doctest::Approx(density).epsilon(0.1));
  CHECK(sum[1] / 4.0 == doctest::Approx(density).epsilon(0.1));
  CHECK(sum[2] / 5.0 == doctest::Approx(density).epsilon(0.1));
}

TEST_CASE("markers pair into segments") {
  const std::vector<Marker> m = {{10, "1:start"}, {600, "1:end"}, {700, "3:start"}, {1300, "3:end"}};
  const auto s = segments_from_markers(m);
  REQUIRE(s.size() == 2);
  CHECK(s[1].task_id == 3);
  CHECK(s[1].begin == 700);
  CHECK(s[1].end == 1300);
  CHECK(markers_for(s) == m);
  CHECK_THROWS_AS(segments_from_markers({{10, "1:end"}}), SchemaViolation);
  CHECK_THROWS_AS(segments_from_markers({{10, "1:start"}, {20, "2:end"}}), SchemaViolation);
  CHECK_THROWS_AS(segments_from_markers({{10, "1:start"}, {20, "1:start"}}), SchemaViolation);
  CHECK_THROWS_AS(segments_from_markers({{10, "1:start"}}), SchemaViolation);
  CHECK_THROWS_AS(segments_from_markers({{10, "blink"}}), SchemaViolation);
  CHECK_THROWS_AS(segments_from_markers({}), SchemaViolation);

  stimulus::Manifest manifest;
  manifest.sample_rate = 48000;
  manifest.segments = {{0, 1, 1000, 0, "a", 48000, 144000}, {1, 3, 1000, 0, "b", 192000, 288000}};
  const auto mapped = segments_from_manifest(manifest, 250);
  CHECK(mapped[0].begin == 250);
  CHECK(mapped[1].end == 1500);
  CHECK_NOTHROW(check_against_manifest(s, manifest));
  manifest.segments[1].task_id = 2;
  CHECK_THROWS_WITH_AS(check_against_manifest(s, manifest), doctest::Contains("segment 1"), SchemaViolation);
  manifest.segments.pop_back();
  CHECK_THROWS_AS(check_against_manifest(s, manifest), SchemaViolation);

  CHECK(is_frontal("Fp1"));
  CHECK(is_frontal("Fz"));
  CHECK(is_frontal("AF3"));
  CHECK_FALSE(is_frontal("FC1"));
  CHECK_FALSE(is_frontal("Cz"));
}

TEST_CASE("EEG CSV and markers round trip") {
  testutil::TempDir dir("eeg_io");
  SyntheticEegSpec spec;
  spec.channels = 4;
  spec.segment_s = 2.0;
  spec.segments_per_task = 1;
  const auto rec = synthesize_eeg(spec);
  write_eeg(rec, dir / "eeg.csv", dir / kMarkersFile);
  const auto back = read_eeg(dir / "eeg.csv", dir / kMarkersFile);
  CHECK(back.channel_names == rec.channel_names);
  CHECK(back.markers == rec.markers);
  CHECK(back.sample_rate == rec.sample_rate);
  CHECK((back.data - rec.data).cwiseAbs().maxCoeff() <= 1e-6 * rec.data.cwiseAbs().maxCoeff());

  const MarkerFile mf{250, {}};
  CHECK_THROWS_WITH_AS(parse_eeg_csv("sample_index,a,b\n0,1,2\n2,1,2\n", "x.csv", mf), doctest::Contains("line 3"),
                       SchemaViolation);
  CHECK_THROWS_AS(parse_eeg_csv("t,a,b\n0,1,2\n", "x.csv", mf), SchemaViolation);
  CHECK_THROWS_AS(parse_eeg_csv("sample_index,a,a\n0,1,2\n", "x.csv", mf), SchemaViolation);
  CHECK_THROWS_AS(parse_eeg_csv("sample_index,a,b\n0,1,2\n", "x.csv", {250, {{5, "1:start"}}}), SchemaViolation);
  CHECK_THROWS_AS(markers_from_json("{\"schema_version\": 2, \"sample_rate\": 250, \"markers\": []}", "m"),
                  SchemaViolation);
  CHECK_THROWS_WITH_AS(
      markers_from_json("{\"schema_version\": 1, \"sample_rate\": 250, \"markers\": [{\"sample\": -1}]}", "m.json"),
      doctest::Contains("$.markers[0].sample"), SchemaViolation);
  CHECK_THROWS_AS(read_eeg(dir / "none.csv", dir / kMarkersFile), MissingInput);
}

TEST_CASE("task-scaled synthetic EEG gives increasing total power") {
  SyntheticEegSpec spec;
  spec.line_noise_uv = 10.0;
  const auto raw = synthesize_eeg(spec);
  CHECK(raw.channels() == 16);
  const auto clean = preprocess(raw);
  const auto powers = segment_and_power(clean, segments_from_markers(clean.markers));
  CHECK(powers.size() == 12);
  testutil::CaptureLog quiet;
  const auto tasks = task_summary(powers);
  REQUIRE(tasks.size() == 4);
  for (std::size_t t = 1; t < 4; ++t) CHECK(tasks[t].bands[4].mean > tasks[t - 1].bands[4].mean);
  for (const auto& t : tasks) {
    CHECK(t.segments == 3);
    CHECK(t.bands[2].mean > 0.0);
  }
}

TEST_CASE("blink artifacts are removed before band power") {
  SyntheticEegSpec spec;
  spec.blink_uv = 150.0;
  spec.seed = 3;
  const auto clean = preprocess(synthesize_eeg(spec));
  const auto ica = fastica(clean);
  CHECK(ica.components() == 15);
  RejectionPolicy policy;
  policy.mode = RejectionPolicy::Mode::heuristic;
  testutil::CaptureLog quiet;
  const auto cleaned = reject_components(ica, policy);
  CHECK_FALSE(cleaned.rejected.empty());
  CHECK(cleaned.rejected.size() <= 2);

  spec.blink_uv = 0.0;
  const auto reference = preprocess(synthesize_eeg(spec));
  const auto seg = segments_from_markers(clean.markers);
  const auto with = segment_and_power(clean, seg), without = segment_and_power(reference, seg),
             removed = segment_and_power(cleaned.recording, seg);
  double d_before = 0.0, d_after = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < seg.size(); ++i) {
    d_before += with[i].mean.delta;
    d_after += removed[i].mean.delta;
    ref += without[i].mean.delta;
  }
  CHECK(d_before > 1.5 * ref);
  CHECK(std::abs(d_after - ref) < 0.25 * (d_before - ref));
}
