#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "oaekit/eeg/recording.hpp"

namespace oaekit::eeg {

struct IcaOptions {
  std::size_t n_components = 0;  // 0: rank of the channel covariance
  double tol = 1e-6;
  int max_iter = 500;
  // Unset starts from the identity; a seed starts from a random orthogonal
  // matrix.
  std::optional<std::uint64_t> seed;
};

struct IcaDecomposition {
  Eigen::MatrixXd unmixing;  // components x channels
  Eigen::MatrixXd mixing;    // channels x components
  Eigen::MatrixXd sources;   // components x samples
  Eigen::VectorXd mean;      // per-channel mean removed before unmixing
  Eigen::MatrixXd whitening;

  std::vector<double> kurtosis;             // excess
  std::vector<double> low_frequency_ratio;  // share of power below 3 Hz
  std::vector<double> frontal_ratio;        // mean frontal / mean other squared mixing weight; 0 without names

  int iterations = 0;
  bool converged = false;

  int sample_rate = 0;
  std::vector<std::string> channel_names;
  std::vector<Marker> markers;

  [[nodiscard]] std::size_t components() const { return static_cast<std::size_t>(sources.rows()); }
};

// Symmetric FastICA with the log-cosh contrast on eigen-whitened data. When
// all channels are kept the whitening is the symmetric (ZCA) one, so already
// white, independent input starts at the fixed point.
// Throws InvalidArgument when more components than channels are requested
// and ProcessingFailure when the covariance has lower rank than requested.
IcaDecomposition fastica(const EegRecording& rec, const IcaOptions& options = {});

inline constexpr double kLowFrequencyEdgeHz = 3.0;

struct RejectionPolicy {
  enum class Mode { manual, heuristic } mode = Mode::manual;
  std::vector<std::size_t> indices;  // manual mode
  double kurtosis_limit = 5.0;
  double low_frequency_limit = 0.6;
  double frontal_limit = 2.0;
};

struct CleanedRecording {
  EegRecording recording;
  std::vector<std::size_t> rejected;
};

// Indices the heuristic would reject.
std::vector<std::size_t> flag_artifacts(const IcaDecomposition& decomp, const RejectionPolicy& policy);

// Rebuilds channels from the kept components. Rejecting every component
// throws InvalidArgument.
CleanedRecording reject_components(const IcaDecomposition& decomp, const RejectionPolicy& policy);

}  // namespace oaekit::eeg
