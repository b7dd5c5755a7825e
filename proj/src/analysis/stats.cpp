#include "oaekit/analysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "oaekit/error.hpp"
#include "oaekit/log.hpp"
#include "oaekit/random.hpp"

namespace oaekit::analysis {

CiMethod parse_ci_method(const std::string& name) {
  if (name == "t" || name == "student_t") return CiMethod::student_t;
  if (name == "bootstrap") return CiMethod::bootstrap;
  throw InvalidArgument("unknown CI method '" + name + "' (expected t or bootstrap)");
}

std::string to_string(CiMethod method) {
  return method == CiMethod::student_t ? "student_t" : "bootstrap";
}

double t_quantile(double p, double dof) {
  boost::math::students_t dist(dof);
  return boost::math::quantile(dist, p);
}

namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Linear interpolation between order statistics (type 7).
double quantile_sorted(const std::vector<double>& s, double q) {
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

std::vector<double> midranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double rank = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = rank;
    i = j + 1;
  }
  return r;
}

}  // namespace

Summary group_stats(std::span<const double> values, const StatsOptions& options) {
  if (values.empty()) throw InvalidArgument("group_stats: no values");
  if (!(options.level > 0.0 && options.level < 1.0)) throw InvalidArgument("confidence level must be in (0, 1)");
  Summary s;
  s.n = values.size();
  s.mean = mean_of(values);
  if (s.n == 1) {
    s.std = 0.0;
    s.std_defined = false;
    s.ci_low = s.ci_high = s.mean;
    log::warn("group of one: std undefined (reported as 0), degenerate confidence interval");
    return s;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  const double alpha = 1.0 - options.level;
  if (options.method == CiMethod::student_t) {
    const double half = t_quantile(1.0 - alpha / 2.0, static_cast<double>(s.n - 1)) * s.std /
                        std::sqrt(static_cast<double>(s.n));
    s.ci_low = s.mean - half;
    s.ci_high = s.mean + half;
  } else {
    if (options.resamples < 1) throw InvalidArgument("bootstrap needs at least one resample");
    Rng rng(options.seed);
    std::vector<double> means(options.resamples);
    for (auto& m : means) {
      double acc = 0.0;
      for (std::size_t i = 0; i < s.n; ++i) acc += values[rng.below(s.n)];
      m = acc / static_cast<double>(s.n);
    }
    std::sort(means.begin(), means.end());
    s.ci_low = std::min(s.mean, quantile_sorted(means, alpha / 2.0));
    s.ci_high = std::max(s.mean, quantile_sorted(means, 1.0 - alpha / 2.0));
  }
  return s;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman: need two equal-length samples, n >= 2");
  const auto rx = midranks(x), ry = midranks(y);
  const double mx = mean_of(rx), my = mean_of(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw InvalidArgument("spearman: constant sample");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oaekit::analysis
