#pragma once

#include <complex>
#include <cstddef>
#include <string>

#include "oaekit/audio/sample_buffer.hpp"

namespace oaekit::oae {

struct ExtractOptions {
  double band_half_width = 100.0;  // Hz, matches the stimulus notch
  int band_order = 4;
  double edge_guard = 0.050;       // s dropped at each end after filtering
  double target_frame = 0.100;     // s, frames hold a whole number of probe cycles
  bool complex_average = false;    // synchronous averaging instead of magnitude averaging
};

struct MagnitudeRecord {
  std::string participant_id;
  int task_id = 1;
  double f_s_hz = 0.0;
  int repetition = 0;
  double magnitude = 0.0;
  std::size_t window_count = 0;
  double noise_floor = 0.0;
};

struct SedRecord {
  std::string participant_id;
  int task_id = 2;
  double f_s_hz = 0.0;
  double sed = 0.0;
};

// Frame length in samples holding an integer number of probe cycles, as close
// to `target` samples as possible; never longer than `limit`. The cycle count
// is returned through `cycles`.
std::size_t bin_centered_frame_length(double f_s, int sample_rate, std::size_t target,
                                      std::size_t limit, std::size_t* cycles = nullptr);

// M(f_s) over recording[begin, end): band-pass, guard trimming, bin-centred
// rectangular frames, average of the f_s bin. participant/task fields are
// left for the caller.
MagnitudeRecord extract_magnitude(const audio::SampleBuffer& recording, double f_s,
                                  std::size_t begin, std::size_t end,
                                  const ExtractOptions& options = {});

inline MagnitudeRecord extract_magnitude(const audio::SampleBuffer& recording, double f_s,
                                         const ExtractOptions& options = {}) {
  return extract_magnitude(recording, f_s, 0, recording.size(), options);
}

// |M_task^2 - M_baseline^2|
SedRecord sed(const MagnitudeRecord& task, const MagnitudeRecord& baseline);

}  // namespace oaekit::oae
