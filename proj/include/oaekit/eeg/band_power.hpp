#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "oaekit/analysis/stats.hpp"
#include "oaekit/eeg/recording.hpp"

namespace oaekit::eeg {

struct Band {
  const char* name;
  double low;   // Hz, inclusive
  double high;  // Hz, exclusive
};

inline constexpr std::array<Band, 4> kBands = {{
    {"delta", 0.5, 4.0},
    {"theta", 4.0, 8.0},
    {"alpha", 8.0, 13.0},
    {"beta", 13.0, 30.0},
}};
inline constexpr Band kTotalBand = {"total", 0.5, 30.0};

inline constexpr double kWelchSeconds = 2.0;
inline constexpr double kMicroToKilo = 1e-3;  // uV^2 -> kuV^2

// Powers in uV^2.
struct BandPowers {
  double delta = 0.0, theta = 0.0, alpha = 0.0, beta = 0.0, total = 0.0;

  [[nodiscard]] double get(const std::string& band) const;
  BandPowers& operator+=(const BandPowers& o);
  BandPowers& operator*=(double s);
};

// Averaged Hann periodogram with 2 s windows and 50% overlap; band power is
// the sum of bins in [low, high). Segments shorter than 2 s are rejected.
BandPowers band_powers(std::span<const double> x, int sample_rate);

struct SegmentPower {
  EegSegment segment;
  std::vector<BandPowers> per_channel;
  BandPowers mean;  // across channels
};

std::vector<SegmentPower> segment_and_power(const EegRecording& rec, const std::vector<EegSegment>& segments);

struct TaskBandSummary {
  int task_id = 1;
  std::size_t segments = 0;
  // delta, theta, alpha, beta, total; kuV^2
  std::array<analysis::Summary, 5> bands;
};

// Pools channel-averaged segment powers per task.
std::vector<TaskBandSummary> task_summary(const std::vector<SegmentPower>& powers,
                                          const analysis::StatsOptions& stats = {});

inline constexpr std::array<const char*, 5> kReportBands = {"delta", "theta", "alpha", "beta", "total"};

}  // namespace oaekit::eeg
