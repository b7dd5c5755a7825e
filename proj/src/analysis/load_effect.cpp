#include "oaekit/analysis/load_effect.hpp"

#include <set>

#include "oaekit/error.hpp"

namespace oaekit::analysis {

TestMethod parse_test_method(const std::string& name) {
  if (name == "wilcoxon") return TestMethod::wilcoxon;
  if (name == "permutation") return TestMethod::permutation;
  throw InvalidArgument("unknown test method '" + name + "' (expected wilcoxon or permutation)");
}

std::string to_string(TestMethod method) { return method == TestMethod::wilcoxon ? "wilcoxon" : "permutation"; }

namespace {

double participant_value(const std::string& pid, double f, const std::map<int, double>& by_task,
                         const LoadEffectOptions& o) {
  if (o.method == TestMethod::wilcoxon) {
    if (!by_task.contains(2) || !by_task.contains(4)) {
      throw InvalidArgument("participant " + pid + ": SEDs for tasks 2 and 4 are required");
    }
    return by_task.at(4) - by_task.at(2);
  }
  return sensitivity(pid, f, by_task, o.sensitivity).slope;
}

TestResult run(const std::vector<double>& v, const LoadEffectOptions& o) {
  return o.method == TestMethod::wilcoxon ? wilcoxon_signed_rank(v, o.alternative)
                                          : sign_flip_test(v, o.alternative, o.permutations, o.seed);
}

}  // namespace

LoadEffectResult load_effect_test(const SedTable& seds, const LoadEffectOptions& o) {
  if (seds.size() < o.min_participants || seds.size() < 2) {
    throw InvalidArgument("load-effect test needs at least " + std::to_string(o.min_participants) +
                          " participants, got " + std::to_string(seds.size()));
  }
  std::set<double> freqs;
  for (const auto& [pid, by_f] : seds) {
    for (const auto& [f, t] : by_f) freqs.insert(f);
  }
  LoadEffectResult r;
  std::map<double, std::vector<double>> per_f;
  for (const auto& [pid, by_f] : seds) {
    double acc = 0.0;
    for (double f : freqs) {
      const auto it = by_f.find(f);
      if (it == by_f.end()) {
        throw InvalidArgument("participant " + pid + ": no SEDs at " + std::to_string(f) + " Hz");
      }
      const double v = participant_value(pid, f, it->second, o);
      per_f[f].push_back(v);
      acc += v;
    }
    r.values.push_back(acc / static_cast<double>(freqs.size()));
  }
  r.overall = run(r.values, o);
  for (const auto& [f, v] : per_f) r.per_frequency[f] = run(v, o);
  return r;
}

}  // namespace oaekit::analysis
