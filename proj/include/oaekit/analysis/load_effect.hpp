#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oaekit/analysis/ols.hpp"
#include "oaekit/analysis/wilcoxon.hpp"

namespace oaekit::analysis {

enum class TestMethod { wilcoxon, permutation };

TestMethod parse_test_method(const std::string& name);
std::string to_string(TestMethod method);

struct LoadEffectOptions {
  TestMethod method = TestMethod::wilcoxon;
  Alternative alternative = Alternative::greater;
  std::size_t permutations = 10000;
  std::uint64_t seed = 1;
  SensitivityOptions sensitivity;  // permutation method only
  std::size_t min_participants = 5;
};

struct LoadEffectResult {
  TestResult overall;                        // per-participant values averaged over f_s
  std::map<double, TestResult> per_frequency;
  std::vector<double> values;                // the per-participant values tested overall
};

// Wilcoxon: one-sided signed-rank on delta4 - delta2 per participant.
// Permutation: sign-flip test on per-participant OLS slopes.
LoadEffectResult load_effect_test(const SedTable& seds, const LoadEffectOptions& options = {});

}  // namespace oaekit::analysis
