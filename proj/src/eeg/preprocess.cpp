#include "oaekit/eeg/preprocess.hpp"

#include <vector>

#include "oaekit/audio/filter.hpp"
#include "oaekit/error.hpp"
#include "oaekit/log.hpp"

namespace oaekit::eeg {

void common_average_reference(Eigen::MatrixXd& data) {
  const Eigen::RowVectorXd mean = data.colwise().mean();
  data.rowwise() -= mean;
}

EegRecording preprocess(const EegRecording& raw, const PreprocessOptions& options) {
  validate(raw);
  if (raw.channels() < 2) {
    throw InvalidArgument("eeg: " + std::to_string(raw.channels()) +
                          " channel(s); re-referencing needs at least 2");
  }
  if (raw.sample_rate < kMinEegRate || options.high_hz >= raw.sample_rate / 2.0) {
    throw InvalidArgument("eeg: sample rate " + std::to_string(raw.sample_rate) + " Hz is too low for the " +
                          std::to_string(options.high_hz) + " Hz band edge");
  }
  std::vector<audio::IirFilter> chain;
  chain.push_back(audio::design_filter(
      {.kind = audio::FilterKind::band_pass, .edges = {options.low_hz, options.high_hz}, .order = options.order},
      raw.sample_rate));
  if (options.notch_hz > 0.0) {
    if (options.notch_hz < raw.sample_rate / 2.0) {
      chain.push_back(audio::design_filter({.kind = audio::FilterKind::notch,
                                            .edges = {options.notch_hz},
                                            .design = audio::FilterDesign::iir_notch,
                                            .q = options.notch_q},
                                           raw.sample_rate));
    } else {
      log::info("eeg: notch at " + std::to_string(options.notch_hz) + " Hz is at or above Nyquist, skipped");
    }
  }

  EegRecording out = raw;
  std::vector<double> row(raw.samples());
  for (Eigen::Index c = 0; c < out.data.rows(); ++c) {
    for (Eigen::Index i = 0; i < out.data.cols(); ++i) row[static_cast<std::size_t>(i)] = out.data(c, i);
    for (const auto& f : chain) row = audio::filtfilt(row, f);
    for (Eigen::Index i = 0; i < out.data.cols(); ++i) out.data(c, i) = row[static_cast<std::size_t>(i)];
  }
  if (options.common_average) common_average_reference(out.data);
  return out;
}

}  // namespace oaekit::eeg
