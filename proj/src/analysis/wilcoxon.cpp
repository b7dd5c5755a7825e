#include "oaekit/analysis/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "oaekit/error.hpp"
#include "oaekit/random.hpp"

namespace oaekit::analysis {

Alternative parse_alternative(const std::string& name) {
  if (name == "greater") return Alternative::greater;
  if (name == "less") return Alternative::less;
  if (name == "two-sided" || name == "two_sided") return Alternative::two_sided;
  throw InvalidArgument("unknown alternative \"" + name + "\" (expected greater, less or two-sided)");
}

std::string to_string(Alternative alternative) {
  switch (alternative) {
    case Alternative::greater: return "greater";
    case Alternative::less: return "less";
    case Alternative::two_sided: return "two-sided";
  }
  return "greater";
}

namespace {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

TestResult wilcoxon_signed_rank(std::span<const double> d, Alternative alternative) {
  TestResult r;
  r.method = "wilcoxon_signed_rank";
  std::vector<double> nz;
  for (double v : d) {
    if (!std::isfinite(v)) throw InvalidArgument("wilcoxon: non-finite difference");
    if (v != 0.0) nz.push_back(v);
  }
  r.n = nz.size();
  if (nz.empty()) {
    r.degenerate = true;
    r.p_value = 1.0;
    r.exact = true;
    return r;
  }
  // Doubled midranks are integers.
  std::vector<std::size_t> idx(nz.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return std::abs(nz[a]) < std::abs(nz[b]); });
  std::vector<long> rank2(nz.size());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && std::abs(nz[idx[j + 1]]) == std::abs(nz[idx[i]])) ++j;
    const long r2 = static_cast<long>(i + j + 2);  // 2 * average of (i+1 .. j+1)
    for (std::size_t k = i; k <= j; ++k) rank2[idx[k]] = r2;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  long w2 = 0, total2 = 0;
  for (std::size_t i = 0; i < nz.size(); ++i) {
    total2 += rank2[i];
    if (nz[i] > 0.0) w2 += rank2[i];
  }
  r.statistic = static_cast<double>(w2) / 2.0;

  if (nz.size() <= kExactWilcoxonLimit) {
    r.exact = true;
    // counts[s] = number of sign patterns with doubled W+ = s.
    std::vector<double> counts(static_cast<std::size_t>(total2) + 1, 0.0);
    counts[0] = 1.0;
    long reach = 0;
    for (long r2 : rank2) {
      for (long s = reach; s >= 0; --s) {
        if (counts[static_cast<std::size_t>(s)] != 0.0) counts[static_cast<std::size_t>(s + r2)] += counts[static_cast<std::size_t>(s)];
      }
      reach += r2;
    }
    const double all = std::ldexp(1.0, static_cast<int>(nz.size()));
    double upper = 0.0, lower = 0.0;
    for (long s = 0; s <= total2; ++s) {
      if (s >= w2) upper += counts[static_cast<std::size_t>(s)];
      if (s <= w2) lower += counts[static_cast<std::size_t>(s)];
    }
    upper /= all;
    lower /= all;
    switch (alternative) {
      case Alternative::greater: r.p_value = upper; break;
      case Alternative::less: r.p_value = lower; break;
      case Alternative::two_sided: r.p_value = std::min(1.0, 2.0 * std::min(upper, lower)); break;
    }
    return r;
  }

  const double n = static_cast<double>(nz.size());
  const double mean = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  const double sd = std::sqrt(var);
  const double w = r.statistic;
  const double p_upper = normal_sf((w - mean - 0.5) / sd);
  const double p_lower = normal_sf((mean - w - 0.5) / sd);
  switch (alternative) {
    case Alternative::greater: r.p_value = p_upper; break;
    case Alternative::less: r.p_value = p_lower; break;
    case Alternative::two_sided: r.p_value = std::min(1.0, 2.0 * std::min(p_upper, p_lower)); break;
  }
  return r;
}

TestResult sign_flip_test(std::span<const double> v, Alternative alternative, std::size_t permutations,
                          std::uint64_t seed) {
  if (v.empty()) throw InvalidArgument("sign_flip_test: no values");
  if (permutations < 1) throw InvalidArgument("sign_flip_test: need at least one permutation");
  TestResult r;
  r.method = "sign_flip_permutation";
  r.n = v.size();
  const double observed = std::accumulate(v.begin(), v.end(), 0.0);
  r.statistic = observed / static_cast<double>(v.size());
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
    r.degenerate = true;
    r.p_value = 1.0;
    return r;
  }
  Rng rng(seed);
  std::size_t ge = 0, le = 0, abs_ge = 0;
  const double tol = 1e-12 * std::accumulate(v.begin(), v.end(), 0.0, [](double a, double x) { return a + std::abs(x); });
  for (std::size_t k = 0; k < permutations; ++k) {
    double s = 0.0;
    for (double x : v) s += (rng.next_u64() >> 63) ? -x : x;
    if (s >= observed - tol) ++ge;
    if (s <= observed + tol) ++le;
    if (std::abs(s) >= std::abs(observed) - tol) ++abs_ge;
  }
  // The observed labelling counts as one of the permutations.
  const double denom = static_cast<double>(permutations + 1);
  switch (alternative) {
    case Alternative::greater: r.p_value = static_cast<double>(ge + 1) / denom; break;
    case Alternative::less: r.p_value = static_cast<double>(le + 1) / denom; break;
    case Alternative::two_sided: r.p_value = static_cast<double>(abs_ge + 1) / denom; break;
  }
  return r;
}

}  // namespace oaekit::analysis
