#include "oaekit/oae/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "oaekit/audio/fft.hpp"
#include "oaekit/error.hpp"

namespace oaekit::oae {

namespace {

// Smallest 2^a 3^b 5^c >= n.
std::size_t fast_length(std::size_t n) {
  std::size_t best = 1;
  while (best < n) best *= 2;
  for (std::size_t p5 = 1; p5 < best; p5 *= 5) {
    for (std::size_t p35 = p5; p35 < best; p35 *= 3) {
      std::size_t v = p35;
      while (v < n) v *= 2;
      if (v < best) best = v;
    }
  }
  return best;
}

}  // namespace

Alignment estimate_offset(const audio::SampleBuffer& reference, const audio::SampleBuffer& recording,
                          std::size_t max_lag) {
  reference.require_non_empty("estimate_offset");
  recording.require_non_empty("estimate_offset");
  if (reference.sample_rate() != recording.sample_rate()) {
    throw InvalidArgument("alignment needs equal sample rates");
  }
  const std::size_t n = fast_length(reference.size() + recording.size());
  std::vector<double> a(n, 0.0), b(n, 0.0);
  std::copy(recording.data().begin(), recording.data().end(), a.begin());
  std::copy(reference.data().begin(), reference.data().end(), b.begin());
  auto fa = audio::fft_forward(a);
  const auto fb = audio::fft_forward(b);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= std::conj(fb[k]);
  const auto xc = audio::fft_inverse(fa, n);

  double e_ref = 0.0, e_rec = 0.0;
  for (double v : reference.samples()) e_ref += v * v;
  for (double v : recording.samples()) e_rec += v * v;
  const double scale = std::sqrt(e_ref * e_rec);
  if (!(scale > 0.0)) throw ProcessingFailure("alignment failed: silent reference or recording");

  // The global peak over every lag decides. Tonal content repeats the
  // correlation pattern, so a maximum taken inside the window alone can
  // lock onto a wrong period when the true offset lies outside it.
  Alignment best{0, -std::numeric_limits<double>::infinity()};
  const long reach_pos = static_cast<long>(recording.size()) - 1;
  const long reach_neg = static_cast<long>(reference.size()) - 1;
  for (long lag = -reach_neg; lag <= reach_pos; ++lag) {
    const auto idx = static_cast<std::size_t>(lag >= 0 ? lag : static_cast<long>(n) + lag);
    const double c = xc[idx] / scale;
    if (c > best.correlation) best = {lag, c};
  }
  if (best.correlation < kMinAlignmentCorrelation) {
    throw ProcessingFailure("alignment failed: peak correlation " + std::to_string(best.correlation) +
                            " is too weak");
  }
  if (std::abs(best.lag) > static_cast<long>(max_lag)) {
    throw ProcessingFailure("alignment failed: offset of " + std::to_string(best.lag) +
                            " samples exceeds the +/-" + std::to_string(max_lag) + " sample limit");
  }
  return best;
}

audio::SampleBuffer remove_offset(const audio::SampleBuffer& recording, long lag) {
  const auto n = static_cast<long>(recording.size());
  std::vector<double> out(recording.size(), 0.0);
  for (long i = 0; i < n; ++i) {
    const long j = i + lag;
    if (j >= 0 && j < n) out[static_cast<std::size_t>(i)] = recording[static_cast<std::size_t>(j)];
  }
  return audio::SampleBuffer(std::move(out), recording.sample_rate());
}

}  // namespace oaekit::oae
