#include "oaekit/oae/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oaekit/audio/fft.hpp"
#include "oaekit/audio/filter.hpp"
#include "oaekit/error.hpp"

namespace oaekit::oae {

std::size_t bin_centered_frame_length(double f_s, int sample_rate, std::size_t target,
                                      std::size_t limit, std::size_t* cycles) {
  if (!(f_s > 0.0) || sample_rate <= 0) throw InvalidArgument("bad frequency or sample rate");
  const double period = sample_rate / f_s;  // samples per cycle
  const auto max_k = static_cast<std::size_t>(std::floor(static_cast<double>(limit) / period));
  if (max_k == 0) throw InvalidArgument("segment too short for one frame");
  const auto want = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(static_cast<double>(target) / period)), 1, max_k);

  // Prefer exact bin centring, then nearness to the target length.
  std::size_t best_k = want;
  double best_err = std::numeric_limits<double>::infinity();
  const std::size_t lo = std::max<std::size_t>(1, want / 2);
  const std::size_t hi = std::min(max_k, want * 2);
  for (std::size_t k = lo; k <= hi; ++k) {
    const double exact = period * static_cast<double>(k);
    const double err = std::abs(exact - std::round(exact));
    const bool better = err < best_err - 1e-9 ||
                        (std::abs(err - best_err) <= 1e-9 &&
                         std::abs(static_cast<double>(k) - static_cast<double>(want)) <
                             std::abs(static_cast<double>(best_k) - static_cast<double>(want)));
    if (better) {
      best_err = err;
      best_k = k;
    }
  }
  if (cycles) *cycles = best_k;
  return static_cast<std::size_t>(std::lround(period * static_cast<double>(best_k)));
}

MagnitudeRecord extract_magnitude(const audio::SampleBuffer& recording, double f_s,
                                  std::size_t begin, std::size_t end,
                                  const ExtractOptions& options) {
  if (begin >= end || end > recording.size()) {
    throw InvalidArgument("segment [" + std::to_string(begin) + ", " + std::to_string(end) +
                          ") lies outside the recording of " + std::to_string(recording.size()) +
                          " samples");
  }
  const int rate = recording.sample_rate();
  if (static_cast<double>(end - begin) < 0.5 * rate) {
    throw InvalidArgument("segment shorter than 0.5 s");
  }
  const double lo = f_s - options.band_half_width, hi = f_s + options.band_half_width;
  if (!(lo > 0.0) || !(hi < rate / 2.0)) {
    throw InvalidArgument("probe frequency " + std::to_string(f_s) +
                          " Hz is outside the band-pass design range");
  }
  const auto band = audio::design_filter(
      {audio::FilterKind::band_pass, {lo, hi}, options.band_order}, rate);
  const auto segment = recording.samples().subspan(begin, end - begin);
  const auto filtered = audio::filtfilt(segment, band);

  const auto guard = static_cast<std::size_t>(std::lround(options.edge_guard * rate));
  if (2 * guard >= filtered.size()) throw InvalidArgument("segment too short for the edge guard");
  const std::size_t usable = filtered.size() - 2 * guard;
  std::size_t k = 0;
  const auto frame = bin_centered_frame_length(
      f_s, rate, static_cast<std::size_t>(std::lround(options.target_frame * rate)), usable, &k);
  const std::size_t frames = usable / frame;
  if (k + 2 >= frame / 2) throw InvalidArgument("frame too short to hold the neighbouring bins");

  const double norm = 2.0 / static_cast<double>(frame);
  double mag_sum = 0.0, floor_sum = 0.0;
  std::complex<double> probe_sum(0.0, 0.0);
  std::complex<double> neighbour_sum[4] = {};
  const std::size_t neighbours[4] = {k - 2, k - 1, k + 1, k + 2};
  for (std::size_t f = 0; f < frames; ++f) {
    const auto bins = audio::fft_forward(
        std::span<const double>(filtered).subspan(guard + f * frame, frame));
    mag_sum += std::abs(bins[k]) * norm;
    probe_sum += bins[k] * norm;
    double fl = 0.0;
    for (int j = 0; j < 4; ++j) {
      fl += std::abs(bins[neighbours[j]]) * norm;
      neighbour_sum[j] += bins[neighbours[j]] * norm;
    }
    floor_sum += fl / 4.0;
  }

  MagnitudeRecord r;
  r.f_s_hz = f_s;
  r.window_count = frames;
  const double n = static_cast<double>(frames);
  if (options.complex_average) {
    r.magnitude = std::abs(probe_sum) / n;
    double fl = 0.0;
    for (const auto& c : neighbour_sum) fl += std::abs(c) / n;
    r.noise_floor = fl / 4.0;
  } else {
    r.magnitude = mag_sum / n;
    r.noise_floor = floor_sum / n;
  }
  return r;
}

SedRecord sed(const MagnitudeRecord& task, const MagnitudeRecord& baseline) {
  if (baseline.task_id != 1) {
    throw InvalidArgument("SED baseline must be task 1, got task " + std::to_string(baseline.task_id));
  }
  if (task.participant_id != baseline.participant_id) {
    throw InvalidArgument("SED across participants " + task.participant_id + " and " +
                          baseline.participant_id);
  }
  if (task.f_s_hz != baseline.f_s_hz) throw InvalidArgument("SED across different probe frequencies");
  SedRecord s;
  s.participant_id = task.participant_id;
  s.task_id = task.task_id;
  s.f_s_hz = task.f_s_hz;
  s.sed = std::abs(task.magnitude * task.magnitude - baseline.magnitude * baseline.magnitude);
  return s;
}

}  // namespace oaekit::oae
