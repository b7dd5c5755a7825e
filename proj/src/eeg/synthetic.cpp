#include "oaekit/eeg/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "oaekit/error.hpp"
#include "oaekit/random.hpp"

namespace oaekit::eeg {

std::vector<std::string> standard_montage(std::size_t n) {
  static const char* names[] = {"Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8", "T7", "C3", "Cz",
                                "C4",  "T8",  "P7", "P3", "Pz", "P4", "P8", "O1", "O2"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(i < std::size(names) ? names[i] : "Ch" + std::to_string(i + 1));
  }
  return out;
}

std::vector<EegSegment> default_layout(const SyntheticEegSpec& spec) {
  const auto seg = static_cast<std::size_t>(std::lround(spec.segment_s * spec.sample_rate));
  const auto gap = static_cast<std::size_t>(std::lround(spec.gap_s * spec.sample_rate));
  std::vector<EegSegment> out;
  std::size_t at = gap;
  for (int task = 1; task <= 4; ++task) {
    for (int r = 0; r < spec.segments_per_task; ++r) {
      out.push_back({out.size(), task, at, at + seg});
      at += seg + gap;
    }
  }
  return out;
}

EegRecording synthesize_eeg(const SyntheticEegSpec& spec, const std::vector<EegSegment>& layout) {
  if (spec.channels < 1 || spec.sample_rate <= 0) throw InvalidArgument("synthetic eeg: bad channel count or rate");
  if (layout.empty()) throw InvalidArgument("synthetic eeg: empty layout");
  const auto gap = static_cast<std::size_t>(std::lround(spec.gap_s * spec.sample_rate));
  std::size_t length = 0;
  for (const auto& s : layout) length = std::max(length, s.end);
  length += gap;

  const auto nc = static_cast<Eigen::Index>(spec.channels);
  const auto n = static_cast<Eigen::Index>(length);
  Rng rng(derive_seed(spec.seed, {0}));
  Eigen::MatrixXd mixing(nc, nc);
  for (Eigen::Index i = 0; i < nc; ++i) {
    for (Eigen::Index j = 0; j < nc; ++j) mixing(i, j) = rng.normal() / std::sqrt(static_cast<double>(nc));
  }
  Eigen::VectorXd alpha_weight(nc), alpha_phase(nc);
  for (Eigen::Index i = 0; i < nc; ++i) {
    alpha_weight(i) = rng.uniform(0.5, 1.0);
    alpha_phase(i) = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }

  std::vector<double> scale(length, 1.0);
  for (const auto& s : layout) {
    const auto it = spec.task_scale.find(s.task_id);
    const double g = it == spec.task_scale.end() ? 1.0 : it->second;
    for (std::size_t i = s.begin; i < s.end; ++i) scale[i] = g;
  }

  Rng noise(derive_seed(spec.seed, {1}));
  Eigen::MatrixXd sources(nc, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index i = 0; i < nc; ++i) {
      sources(i, t) = spec.background_uv * scale[static_cast<std::size_t>(t)] * noise.normal();
    }
  }

  EegRecording rec;
  rec.sample_rate = spec.sample_rate;
  rec.channel_names = standard_montage(spec.channels);
  rec.data = mixing * sources;
  const double rate = spec.sample_rate;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double time = static_cast<double>(t) / rate;
    for (Eigen::Index i = 0; i < nc; ++i) {
      rec.data(i, t) += spec.alpha_uv * alpha_weight(i) * std::sin(2.0 * std::numbers::pi * 10.0 * time + alpha_phase(i));
      rec.data(i, t) += spec.line_noise_uv * std::sin(2.0 * std::numbers::pi * 50.0 * time);
    }
  }

  if (spec.blink_uv > 0.0) {
    Rng blinks(derive_seed(spec.seed, {2}));
    const double width = 0.1 * rate;
    double at = rng.uniform(1.0, 3.0) * rate;
    while (at < static_cast<double>(n)) {
      const auto lo = static_cast<Eigen::Index>(std::max(0.0, at - 5 * width));
      const auto hi = std::min<Eigen::Index>(n, static_cast<Eigen::Index>(at + 5 * width));
      for (Eigen::Index t = lo; t < hi; ++t) {
        const double u = (static_cast<double>(t) - at) / width;
        const double bump = spec.blink_uv * std::exp(-0.5 * u * u);
        for (Eigen::Index i = 0; i < nc; ++i) {
          const auto& name = rec.channel_names[static_cast<std::size_t>(i)];
          rec.data(i, t) += bump * (name.rfind("Fp", 0) == 0 ? 1.0 : is_frontal(name) ? 0.4 : 0.05);
        }
      }
      at += blinks.uniform(2.0, 6.0) * rate;
    }
  }
  rec.markers = markers_for(layout);
  return rec;
}

EegRecording synthesize_eeg(const SyntheticEegSpec& spec) { return synthesize_eeg(spec, default_layout(spec)); }

}  // namespace oaekit::eeg
