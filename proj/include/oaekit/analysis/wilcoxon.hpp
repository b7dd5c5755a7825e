#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace oaekit::analysis {

enum class Alternative { greater, less, two_sided };

// "greater", "less", "two-sided"
Alternative parse_alternative(const std::string& name);
std::string to_string(Alternative alternative);

struct TestResult {
  std::string method;
  double statistic = 0.0;  // W+ (sum of positive ranks) or the mean for permutation
  double p_value = 1.0;
  std::size_t n = 0;       // non-zero differences used
  bool exact = false;
  bool degenerate = false;  // every difference zero: p reported as 1
};

inline constexpr std::size_t kExactWilcoxonLimit = 25;

// Signed-rank test of the differences `d` (zeros dropped, midranks for tied
// magnitudes). Exact null distribution for n <= 25, normal approximation
// with tie and continuity correction above.
TestResult wilcoxon_signed_rank(std::span<const double> d, Alternative alternative = Alternative::greater);

// Sign-flip permutation test of mean(v) against 0.
TestResult sign_flip_test(std::span<const double> v, Alternative alternative = Alternative::greater,
                          std::size_t permutations = 10000, std::uint64_t seed = 1);

}  // namespace oaekit::analysis
