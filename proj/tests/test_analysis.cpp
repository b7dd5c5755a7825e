#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oaekit/analysis/behavior.hpp"
#include "oaekit/analysis/demographics.hpp"
#include "oaekit/analysis/load_effect.hpp"
#include "oaekit/analysis/ols.hpp"
#include "oaekit/analysis/stats.hpp"
#include "oaekit/analysis/tables.hpp"
#include "oaekit/analysis/wilcoxon.hpp"
#include "oaekit/error.hpp"
#include "oaekit/oae/batch.hpp"
#include "oaekit/sim/cohort.hpp"
#include "oaekit/stimulus/fixtures.hpp"
#include "test_util.hpp"

using namespace oaekit;
using namespace oaekit::analysis;

namespace {

// Solves the 2x2 normal equations [n sx; sx sxx][b0 b1]' = [sy sxy]' by
// Cramer's rule.
std::pair<double, double> normal_equations(const std::vector<double>& x, const std::vector<double>& y) {
  long double n = x.size(), sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sxx += (long double)x[i] * x[i];
    sy += y[i];
    sxy += (long double)x[i] * y[i];
  }
  const long double det = n * sxx - sx * sx;
  return {double((sy * sxx - sx * sxy) / det), double((n * sxy - sx * sy) / det)};
}

// P(W+ >= w) by walking all 2^n sign patterns.
double enumerate_upper(const std::vector<double>& d) {
  std::vector<double> a;
  for (double v : d) {
    if (v != 0.0) a.push_back(std::abs(v));
  }
  const std::size_t n = a.size();
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      less += a[j] < a[i];
      equal += a[j] == a[i];
    }
    rank[i] = less + (equal + 1) / 2.0;
  }
  double observed = 0;
  std::size_t k = 0;
  for (double v : d) {
    if (v == 0.0) continue;
    if (v > 0) observed += rank[k];
    ++k;
  }
  std::size_t hits = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) w += rank[i];
    }
    hits += w >= observed - 1e-9;
  }
  return double(hits) / double(std::size_t{1} << n);
}

SedTable monotone_table(std::size_t n) {
  SedTable t;
  for (std::size_t p = 0; p < n; ++p) {
    const auto id = sim::participant_id(p, n);
    for (double f : {1000.0, 2000.0, 3000.0}) {
      const double s = 0.001 * (1 + p) + f * 1e-7;
      t[id][f] = {{2, s}, {3, 2.2 * s}, {4, 3.1 * s}};
    }
  }
  return t;
}

}  // namespace

TEST_CASE("OLS exact cases") {
  const std::vector<double> x = {1, 2, 3, 4};
  auto f = ols_fit(x, std::vector<double>{0, 1, 2, 3});
  CHECK(f.slope == doctest::Approx(1.0));
  CHECK(f.intercept == doctest::Approx(-1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  f = ols_fit(x, std::vector<double>{5, 5, 5, 5});
  CHECK(f.slope == 0.0);
  CHECK(f.r_squared == 1.0);
  const std::vector<double> y = {1, 2, 2, 4};
  f = ols_fit(x, y);
  const auto [b0, b1] = normal_equations(x, y);
  CHECK(f.slope == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(std::abs(f.intercept) < 1e-12);
  CHECK(f.slope == doctest::Approx(b1).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(b0).scale(1.0).epsilon(1e-12));
  // r^2 = b1^2 Sxx / Syy
  CHECK(f.r_squared == doctest::Approx(0.81 * 5.0 / 4.75).epsilon(1e-12));
  CHECK_THROWS_AS(ols_fit(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}), InvalidArgument);
  CHECK_THROWS_AS(ols_fit(std::vector<double>{1}, std::vector<double>{1}), InvalidArgument);
}

TEST_CASE("OLS matches the normal-equations oracle on random inputs") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + trial % 20;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = 0.7 * x[i] + u(rng);
    }
    const auto f = ols_fit(x, y);
    const auto [b0, b1] = normal_equations(x, y);
    CHECK(std::abs(f.slope - b1) <= 1e-10 * std::max(1.0, std::abs(b1)));
    CHECK(std::abs(f.intercept - b0) <= 1e-10 * std::max(1.0, std::abs(b0)));
    CHECK(f.r_squared >= 0.0);
    CHECK(f.r_squared <= 1.0);
    // Affine equivariance.
    std::vector<double> shifted(y), scaled(y);
    for (auto& v : shifted) v += 3.5;
    for (auto& v : scaled) v *= -2.0;
    const auto fs = ols_fit(x, shifted), fg = ols_fit(x, scaled);
    CHECK(fs.slope == doctest::Approx(f.slope).epsilon(1e-10));
    CHECK(fs.intercept == doctest::Approx(f.intercept + 3.5).epsilon(1e-10));
    CHECK(fg.slope == doctest::Approx(-2.0 * f.slope).epsilon(1e-10));
    CHECK(fg.intercept == doctest::Approx(-2.0 * f.intercept).epsilon(1e-10));
  }
}

TEST_CASE("sensitivity regression") {
  auto s = sensitivity("P", 1000, {{2, 1.0}, {3, 2.0}, {4, 3.0}});
  CHECK(s.slope == doctest::Approx(1.0));
  CHECK(s.n_points == 4);
  s = sensitivity("P", 1000, {{2, 0.0}, {3, 0.0}, {4, 0.0}});
  CHECK(s.slope == 0.0);
  s = sensitivity("P", 1000, {{2, 5.0}, {3, 5.0}, {4, 5.0}}, {.baseline_zero = false});
  CHECK(s.slope == 0.0);
  CHECK(s.n_points == 3);
  s = sensitivity("P", 1000, {{2, 2.0}, {3, 4.0}, {4, 6.0}}, {.baseline_zero = false, .max_normalize = true});
  CHECK(s.slope == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(sensitivity("P", 1000, {{2, 1.0}, {4, 3.0}}), InvalidArgument);
}

TEST_CASE("peak frequency ties go to the higher frequency") {
  std::vector<SensitivityResult> r = {{"A", 1000, 0.5}, {"A", 2000, 0.9}, {"A", 3000, 0.9},
                                      {"B", 1000, 0.7}, {"B", 2000, 0.1}, {"B", 3000, 0.2}};
  testutil::CaptureLog log;
  const auto peaks = peak_frequencies(r);
  CHECK(peaks.at("A") == 3000.0);
  CHECK(peaks.at("B") == 1000.0);
  CHECK(log.lines.size() == 1);
}

TEST_CASE("group statistics") {
  const std::vector<double> v = {2, 4, 6};
  const auto s = group_stats(v);
  CHECK(s.mean == 4.0);
  CHECK(s.std == doctest::Approx(2.0));
  // t(0.975, 2) = 4.302652729911275
  CHECK(s.ci_high - s.mean == doctest::Approx(4.302652729911275 * 2.0 / std::sqrt(3.0)).epsilon(1e-10));
  CHECK(s.ci_high - s.mean == doctest::Approx(4.97).epsilon(1e-3));
  CHECK(t_quantile(0.975, 18) == doctest::Approx(2.10092204024096).epsilon(1e-10));

  testutil::CaptureLog log;
  const auto one = group_stats(std::vector<double>{7});
  CHECK(one.mean == 7.0);
  CHECK(one.std == 0.0);
  CHECK_FALSE(one.std_defined);
  CHECK(one.ci_low == 7.0);
  CHECK(one.ci_high == 7.0);
  CHECK(log.lines.size() == 1);
  CHECK_THROWS_AS(group_stats(std::vector<double>{}), InvalidArgument);

  const auto x = testutil::white_noise(200, 1.0, 5);
  StatsOptions boot{.method = CiMethod::bootstrap, .seed = 3};
  const auto b1 = group_stats(x, boot), b2 = group_stats(x, boot);
  CHECK(b1.ci_low == b2.ci_low);
  CHECK(b1.ci_high == b2.ci_high);
  CHECK(b1.ci_low <= b1.mean);
  CHECK(b1.mean <= b1.ci_high);
  const auto t = group_stats(x);
  CHECK(b1.ci_high - b1.ci_low == doctest::Approx(t.ci_high - t.ci_low).epsilon(0.1));
}

TEST_CASE("spearman") {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  CHECK(spearman(a, std::vector<double>{2, 4, 8, 16, 32}) == doctest::Approx(1.0));
  CHECK(spearman(a, std::vector<double>{5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
  // Midranks of {1, 2, 2, 3}: 1, 2.5, 2.5, 4 against 1..4.
  const double r = spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 2, 3});
  CHECK(r == doctest::Approx(4.5 / std::sqrt(5.0 * 4.5)).epsilon(1e-12));
}

TEST_CASE("Wilcoxon exact p-values equal exhaustive enumeration") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(-6, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 12;
    std::vector<double> d(n);
    for (auto& v : d) v = pick(rng) * 0.5;  // ties and zeros are common
    const auto r = wilcoxon_signed_rank(d);
    if (r.degenerate) {
      CHECK(r.p_value == 1.0);
      continue;
    }
    CAPTURE(trial);
    CHECK(r.exact);
    CHECK(r.p_value == enumerate_upper(d));
  }
}

TEST_CASE("Wilcoxon special cases") {
  std::vector<double> d(19);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = 0.1 + 0.01 * static_cast<double>(i);
  const auto r = wilcoxon_signed_rank(d);
  CHECK(r.p_value == std::ldexp(1.0, -19));
  CHECK(r.statistic == 190.0);
  const auto two = wilcoxon_signed_rank(d, Alternative::two_sided);
  CHECK(two.p_value == std::ldexp(1.0, -18));
  const auto less = wilcoxon_signed_rank(d, Alternative::less);
  CHECK(less.p_value == 1.0);

  const auto zero = wilcoxon_signed_rank(std::vector<double>(5, 0.0));
  CHECK(zero.degenerate);
  CHECK(zero.p_value == 1.0);

  // Normal approximation against the exact distribution at n = 25.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.2, 1.0);
  std::vector<double> x(25);
  for (auto& v : x) v = g(rng);
  const auto exact = wilcoxon_signed_rank(x);
  std::vector<double> y(x);
  y.push_back(1e-9);  // n = 26 switches to the approximation; the extra tiny value moves W+ by 1
  const auto approx = wilcoxon_signed_rank(y);
  CHECK_FALSE(approx.exact);
  CHECK(approx.p_value == doctest::Approx(exact.p_value).epsilon(0.2));
}

TEST_CASE("sign-flip permutation test") {
  std::vector<double> v(19, 1.0);
  const auto r = sign_flip_test(v, Alternative::greater, 10000, 1);
  CHECK(r.p_value < 0.001);
  CHECK(sign_flip_test(v, Alternative::greater, 10000, 1).p_value == r.p_value);
  CHECK(sign_flip_test(std::vector<double>(4, 0.0)).degenerate);
  // Null data: p is not small.
  const auto noise = testutil::white_noise(19, 1.0, 11);
  CHECK(sign_flip_test(noise, Alternative::two_sided).p_value > 0.01);
}

TEST_CASE("load-effect test") {
  const auto t = monotone_table(19);
  const auto w = load_effect_test(t);
  CHECK(w.overall.p_value == std::ldexp(1.0, -19));
  CHECK(w.per_frequency.size() == 3);
  for (const auto& [f, r] : w.per_frequency) CHECK(r.p_value == std::ldexp(1.0, -19));
  LoadEffectOptions perm;
  perm.method = TestMethod::permutation;
  CHECK(load_effect_test(t, perm).overall.p_value < 0.01);
  CHECK_THROWS_AS(load_effect_test(monotone_table(2)), InvalidArgument);
}

TEST_CASE("age bins and participants CSV") {
  CHECK(age_bin(20) == "20-29");
  CHECK(age_bin(39) == "30-39");
  CHECK(age_bin(55) == "40+");
  CHECK_THROWS_AS(age_bin(19), InvalidArgument);
  const auto meta = parse_participants_csv("participant_id,gender,age\nP01,female,23\nP02,male,41\n", "p.csv");
  CHECK(meta.size() == 2);
  CHECK_THROWS_WITH_AS(parse_participants_csv("participant_id,gender,age\nP01,female,x\n", "p.csv"),
                       doctest::Contains("line 2"), SchemaViolation);
  CHECK_THROWS_AS(parse_participants_csv("participant_id,gender,age\n", "p.csv"), SchemaViolation);
  CHECK_THROWS_AS(parse_participants_csv("participant_id,gender,age\nP01,robot,30\n", "p.csv"), SchemaViolation);
}

TEST_CASE("demographic report partitions the cohort") {
  const auto t = monotone_table(6);
  std::vector<ParticipantMeta> meta = {{"P01", "female", 22}, {"P02", "female", 31}, {"P03", "male", 45},
                                       {"P04", "male", 25}, {"P05", "female", 50}, {"P06", "male", 33}};
  testutil::CaptureLog quiet;
  const auto groups = demographic_report(t, meta);
  for (const std::string dim : {"gender", "age_bin"}) {
    std::size_t total = 0;
    for (const auto& g : groups) {
      if (g.dimension == dim && g.task_id == 2 && g.f_s_hz == 1000.0) total += g.summary.n;
    }
    CHECK(total == 6);
  }
  for (auto& m : meta) m.gender = "female";
  std::set<std::string> genders;
  for (const auto& g : demographic_report(t, meta)) {
    if (g.dimension == "gender") genders.insert(g.value);
  }
  CHECK(genders == std::set<std::string>{"female"});
  meta.pop_back();
  CHECK_THROWS_AS(demographic_report(t, meta), SchemaViolation);
  meta.push_back({"P06", "male", 19});
  CHECK_THROWS_AS(demographic_report(t, meta), InvalidArgument);
}

TEST_CASE("older group with a boosted task 2 shows the jump only there") {
  stimulus::SessionPlan plan;
  plan.segment_duration = 0.6;
  plan.gap = 0.1;
  const auto session = stimulus::build_session(
      plan, [](const std::string& n) { return stimulus::fixtures::make_clip(n, 0.6, 48000); });
  sim::CohortSpec spec;
  spec.participants = 12;
  spec.seed = 5;
  spec.noise_floor_dbfs = sim::kNoNoise;
  spec.older_task2_boost = 0.15;
  const auto cohort = sim::simulate_cohort(spec, session);
  std::vector<oae::ResultRow> rows;
  std::vector<ParticipantMeta> meta;
  for (const auto& m : cohort.members) {
    const auto r = oae::to_rows(oae::batch_extract(m.manifest, m.simulation.recordings));
    rows.insert(rows.end(), r.begin(), r.end());
    meta.push_back(m.meta);
  }
  testutil::CaptureLog quiet;
  const auto groups = demographic_report(sed_table(rows), meta);
  double older = -1, younger = 0;
  for (const auto& g : groups) {
    if (g.dimension != "age_bin" || g.task_id != 2 || g.f_s_hz != 3000.0) continue;
    if (g.value == "40+") {
      older = g.summary.mean;
    } else {
      younger = std::max(younger, g.summary.mean);
    }
  }
  REQUIRE(older > 0);
  CHECK(older > 3.0 * younger);
}

TEST_CASE("behavioural summary") {
  std::vector<BehavioralRecord> recs;
  for (int q = 0; q < 4; ++q) recs.push_back({"P01", 2, 2.0, q < 3});
  testutil::CaptureLog quiet;
  auto s = behavioral_summary(recs);
  CHECK(s.size() == 1);
  CHECK(s[0].accuracy_pct.mean == 75.0);
  CHECK(format_cell(s[0].accuracy_pct).rfind("75.0±0.0", 0) == 0);

  recs = {{"A", 3, 1.0, true}, {"A", 3, 3.0, true}, {"B", 3, 4.0, true}, {"B", 3, 2.0, false}};
  s = behavioral_summary(recs);
  CHECK(s[0].accuracy_pct.mean == 75.0);
  CHECK(s[0].accuracy_pct.std == doctest::Approx(35.3553390593).epsilon(1e-9));
  CHECK(s[0].time_min.mean == 2.5);
  CHECK_THROWS_AS(behavioral_summary({}), InvalidArgument);
  CHECK_THROWS_AS(behavioral_summary({{"A", 1, 1.0, true}}), InvalidArgument);

  const std::string header = "participant_id,task_id,response_time_min,correct\n";
  CHECK(parse_behavior_csv(header + "A,2,1.5,1\nA,3,2,false\n", "b.csv").size() == 2);
  CHECK_THROWS_WITH_AS(parse_behavior_csv(header + "A,2,1.5,1\nA,1,2,0\n", "b.csv"), doctest::Contains("line 3"),
                       SchemaViolation);
  CHECK_THROWS_AS(parse_behavior_csv(header + "A,2,0,1\n", "b.csv"), SchemaViolation);
  CHECK_THROWS_AS(parse_behavior_csv(header, "b.csv"), SchemaViolation);
}

TEST_CASE("plot data") {
  const auto t = monotone_table(3);
  testutil::CaptureLog quiet;
  const auto pts = sed_vs_task(t);
  CHECK(pts.size() == 12);
  CHECK(pts[0].series == "1000Hz");
  CHECK(pts[0].x == 1.0);
  CHECK(pts[0].y == 0.0);
  const auto tsv = format_tsv(pts);
  CHECK(tsv.rfind("series\tx\ty\terr_low\terr_high\n", 0) == 0);
  const auto bars = sensitivity_bars(sensitivities(t));
  CHECK(bars.size() == 9);
  CHECK(bars.back().x == 3.0);
  Summary s{19, 75.0, 18.3, 63.2, 86.8};
  CHECK(format_cell(s) == "75.0±18.3 [63.2, 86.8]");
}
