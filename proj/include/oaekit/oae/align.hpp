#pragma once

#include <cstddef>

#include "oaekit/audio/sample_buffer.hpp"

namespace oaekit::oae {

struct Alignment {
  long lag = 0;              // recording[n] ~ reference[n - lag]
  double correlation = 0.0;  // normalized cross-correlation at `lag`
};

inline constexpr double kMaxAlignmentSeconds = 0.050;
inline constexpr double kMinAlignmentCorrelation = 0.3;

// Constant offset from the global peak of the FFT cross-correlation. Throws
// ProcessingFailure when that peak lies beyond +/-max_lag or is weaker than
// kMinAlignmentCorrelation.
Alignment estimate_offset(const audio::SampleBuffer& reference, const audio::SampleBuffer& recording,
                          std::size_t max_lag);

// out[n] = recording[n + lag], zero where that index falls outside.
audio::SampleBuffer remove_offset(const audio::SampleBuffer& recording, long lag);

}  // namespace oaekit::oae
