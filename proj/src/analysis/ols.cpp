#include "oaekit/analysis/ols.hpp"

#include <algorithm>
#include <cmath>

#include "oaekit/error.hpp"
#include "oaekit/log.hpp"

namespace oaekit::analysis {

OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("ols_fit: x and y differ in length");
  if (x.size() < 2) throw InvalidArgument("ols_fit: need at least 2 points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("ols_fit: x has zero variance");
  OlsFit f;
  f.n_points = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    sse += r * r;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return f;
}

SensitivityResult sensitivity(const std::string& participant_id, double f_s,
                              const std::map<int, double>& sed_by_task, const SensitivityOptions& options) {
  std::vector<double> x, y;
  if (options.baseline_zero) {
    x.push_back(1.0);
    y.push_back(0.0);
  }
  for (int t = 2; t <= 4; ++t) {
    const auto it = sed_by_task.find(t);
    if (it == sed_by_task.end()) {
      throw InvalidArgument("participant " + participant_id + ": no SED for task " + std::to_string(t) +
                            " at " + std::to_string(f_s) + " Hz");
    }
    x.push_back(t);
    y.push_back(it->second);
  }
  if (options.max_normalize) {
    const double peak = *std::max_element(y.begin(), y.end());
    if (peak > 0.0) {
      for (double& v : y) v /= peak;
    }
  }
  const auto fit = ols_fit(x, y);
  return {participant_id, f_s, fit.slope, fit.intercept, fit.r_squared, fit.n_points};
}

SedTable sed_table(const std::vector<oae::ResultRow>& rows) {
  SedTable t;
  for (const auto& r : rows) {
    if (r.task_id == 1 || !r.sed) continue;
    t[r.participant_id][r.f_s_hz][r.task_id] = *r.sed;
  }
  return t;
}

std::vector<SensitivityResult> sensitivities(const SedTable& table, const SensitivityOptions& options) {
  std::vector<SensitivityResult> out;
  for (const auto& [pid, by_f] : table) {
    for (const auto& [f, by_task] : by_f) out.push_back(sensitivity(pid, f, by_task, options));
  }
  return out;
}

std::map<std::string, double> peak_frequencies(const std::vector<SensitivityResult>& results) {
  std::map<std::string, const SensitivityResult*> best;
  for (const auto& r : results) {
    auto [it, inserted] = best.emplace(r.participant_id, &r);
    if (inserted) continue;
    const auto* cur = it->second;
    if (r.slope > cur->slope) {
      it->second = &r;
    } else if (r.slope == cur->slope) {
      log::info("participant " + r.participant_id + ": tied sensitivity at " + std::to_string(cur->f_s_hz) +
                " and " + std::to_string(r.f_s_hz) + " Hz, taking the higher frequency");
      if (r.f_s_hz > cur->f_s_hz) it->second = &r;
    }
  }
  std::map<std::string, double> out;
  for (const auto& [pid, r] : best) out[pid] = r->f_s_hz;
  return out;
}

}  // namespace oaekit::analysis
