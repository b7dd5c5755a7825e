#pragma once

#include "oaekit/eeg/recording.hpp"

namespace oaekit::eeg {

struct PreprocessOptions {
  double low_hz = 1.0;
  double high_hz = 30.0;
  int order = 4;
  double notch_hz = 50.0;  // <= 0 disables
  double notch_q = 30.0;
  bool common_average = true;
};

inline constexpr int kMinEegRate = 100;

// Zero-phase band-pass, zero-phase notch, then common-average reference.
// Needs at least two channels and a rate of kMinEegRate.
EegRecording preprocess(const EegRecording& raw, const PreprocessOptions& options = {});

// Subtracts the across-channel mean at every sample.
void common_average_reference(Eigen::MatrixXd& data);

}  // namespace oaekit::eeg
