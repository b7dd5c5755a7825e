#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace oaekit::analysis {

enum class CiMethod { student_t, bootstrap };

CiMethod parse_ci_method(const std::string& name);
std::string to_string(CiMethod method);

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;          // sample std, n - 1 denominator
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool std_defined = true;   // false when n == 1 (std reported as 0)
};

struct StatsOptions {
  CiMethod method = CiMethod::student_t;
  double level = 0.95;
  std::size_t resamples = 10000;  // bootstrap
  std::uint64_t seed = 1;         // bootstrap
};

// InvalidArgument when empty. n == 1 gives a degenerate [v, v] interval and
// a logged warning.
Summary group_stats(std::span<const double> values, const StatsOptions& options = {});

// Student-t quantile with `dof` degrees of freedom.
double t_quantile(double p, double dof);

// Spearman rank correlation with midranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace oaekit::analysis
