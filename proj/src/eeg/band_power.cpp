#include "oaekit/eeg/band_power.hpp"

#include <map>

#include "oaekit/audio/spectrum.hpp"
#include "oaekit/error.hpp"

namespace oaekit::eeg {

double BandPowers::get(const std::string& band) const {
  if (band == "delta") return delta;
  if (band == "theta") return theta;
  if (band == "alpha") return alpha;
  if (band == "beta") return beta;
  if (band == "total") return total;
  throw InvalidArgument("unknown band \"" + band + "\"");
}

BandPowers& BandPowers::operator+=(const BandPowers& o) {
  delta += o.delta;
  theta += o.theta;
  alpha += o.alpha;
  beta += o.beta;
  total += o.total;
  return *this;
}

BandPowers& BandPowers::operator*=(double s) {
  delta *= s;
  theta *= s;
  alpha *= s;
  beta *= s;
  total *= s;
  return *this;
}

BandPowers band_powers(std::span<const double> x, int sample_rate) {
  if (sample_rate <= 0) throw InvalidArgument("band power: sample rate must be positive");
  const auto window = static_cast<std::size_t>(std::lround(kWelchSeconds * sample_rate));
  if (x.size() < window) {
    throw InvalidArgument("band power: segment too short (" + std::to_string(x.size()) + " samples, need " +
                          std::to_string(window) + " for 2 s)");
  }
  const auto ps = audio::welch(x, sample_rate, {.segment_length = window, .overlap = 0.5});
  BandPowers p;
  p.delta = ps.band(kBands[0].low, kBands[0].high);
  p.theta = ps.band(kBands[1].low, kBands[1].high);
  p.alpha = ps.band(kBands[2].low, kBands[2].high);
  p.beta = ps.band(kBands[3].low, kBands[3].high);
  p.total = ps.band(kTotalBand.low, kTotalBand.high);
  return p;
}

std::vector<SegmentPower> segment_and_power(const EegRecording& rec, const std::vector<EegSegment>& segments) {
  validate(rec);
  std::vector<SegmentPower> out;
  std::vector<double> row;
  for (const auto& s : segments) {
    if (s.end > rec.samples() || s.begin >= s.end) {
      throw InvalidArgument("band power: segment " + std::to_string(s.index) + " [" + std::to_string(s.begin) +
                            ", " + std::to_string(s.end) + ") is outside the recording");
    }
    SegmentPower sp{s, {}, {}};
    for (Eigen::Index c = 0; c < rec.data.rows(); ++c) {
      row.resize(s.end - s.begin);
      for (std::size_t i = s.begin; i < s.end; ++i) row[i - s.begin] = rec.data(c, static_cast<Eigen::Index>(i));
      sp.per_channel.push_back(band_powers(row, rec.sample_rate));
      sp.mean += sp.per_channel.back();
    }
    sp.mean *= 1.0 / static_cast<double>(rec.channels());
    out.push_back(std::move(sp));
  }
  return out;
}

std::vector<TaskBandSummary> task_summary(const std::vector<SegmentPower>& powers,
                                          const analysis::StatsOptions& stats) {
  std::map<int, std::vector<BandPowers>> by_task;
  for (const auto& p : powers) by_task[p.segment.task_id].push_back(p.mean);
  std::vector<TaskBandSummary> out;
  for (const auto& [task, list] : by_task) {
    TaskBandSummary t;
    t.task_id = task;
    t.segments = list.size();
    for (std::size_t b = 0; b < kReportBands.size(); ++b) {
      std::vector<double> v;
      for (const auto& p : list) v.push_back(p.get(kReportBands[b]) * kMicroToKilo);
      t.bands[b] = analysis::group_stats(v, stats);
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace oaekit::eeg
