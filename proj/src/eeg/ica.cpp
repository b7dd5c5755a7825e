#include "oaekit/eeg/ica.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oaekit/audio/spectrum.hpp"
#include "oaekit/error.hpp"
#include "oaekit/log.hpp"
#include "oaekit/random.hpp"

namespace oaekit::eeg {

namespace {

// (W W^T)^{-1/2} W
Eigen::MatrixXd symmetric_decorrelation(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w * w.transpose());
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose() * w;
}

double excess_kurtosis(const Eigen::RowVectorXd& x) {
  const double mean = x.mean();
  double m2 = 0.0, m4 = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double d = x(i) - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(x.size());
  m4 /= static_cast<double>(x.size());
  return m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
}

double low_frequency_ratio(const Eigen::RowVectorXd& x, int rate) {
  const std::vector<double> v(x.data(), x.data() + x.size());
  const auto n = std::min<std::size_t>(v.size(), static_cast<std::size_t>(2 * rate));
  const auto ps = audio::welch(v, rate, {.segment_length = n});
  double total = 0.0;
  for (double p : ps.power) total += p;
  return total > 0.0 ? ps.band(0.0, kLowFrequencyEdgeHz) / total : 0.0;
}

double frontal_ratio(const Eigen::VectorXd& column, const std::vector<std::string>& names) {
  double front = 0.0, other = 0.0;
  std::size_t nf = 0, no = 0;
  for (std::size_t c = 0; c < names.size(); ++c) {
    const double w = column(static_cast<Eigen::Index>(c)) * column(static_cast<Eigen::Index>(c));
    if (is_frontal(names[c])) {
      front += w;
      ++nf;
    } else {
      other += w;
      ++no;
    }
  }
  if (nf == 0 || no == 0) return 0.0;
  front /= static_cast<double>(nf);
  other /= static_cast<double>(no);
  return other > 0.0 ? front / other : std::numeric_limits<double>::infinity();
}

}  // namespace

IcaDecomposition fastica(const EegRecording& rec, const IcaOptions& options) {
  validate(rec);
  const auto channels = static_cast<Eigen::Index>(rec.channels());
  const auto t = static_cast<Eigen::Index>(rec.samples());
  if (options.n_components > rec.channels()) {
    throw InvalidArgument("ica: " + std::to_string(options.n_components) + " components requested from " +
                          std::to_string(rec.channels()) + " channels");
  }
  if (t < 2 * channels) throw InvalidArgument("ica: too few samples");
  if (options.tol <= 0.0 || options.max_iter < 1) throw InvalidArgument("ica: tol and max_iter must be positive");

  IcaDecomposition out;
  out.sample_rate = rec.sample_rate;
  out.channel_names = rec.channel_names;
  out.markers = rec.markers;
  out.mean = rec.data.rowwise().mean();
  const Eigen::MatrixXd x = rec.data.colwise() - out.mean;

  const Eigen::MatrixXd cov = x * x.transpose() / static_cast<double>(t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const Eigen::VectorXd lambda = es.eigenvalues().reverse();
  const Eigen::MatrixXd vectors = es.eigenvectors().rowwise().reverse();
  const double top = lambda(0);
  Eigen::Index rank = 0;
  while (rank < channels && lambda(rank) > top * 1e-9 && lambda(rank) > 0.0) ++rank;
  const auto n = options.n_components == 0 ? rank : static_cast<Eigen::Index>(options.n_components);
  if (n == 0 || n > rank) {
    throw ProcessingFailure("ica: rank-deficient covariance: " + std::to_string(rank) +
                            " independent sources, " + std::to_string(n) + " components requested");
  }

  const Eigen::MatrixXd e = vectors.leftCols(n);
  const Eigen::VectorXd d = lambda.head(n);
  Eigen::MatrixXd k = d.cwiseSqrt().cwiseInverse().asDiagonal() * e.transpose();
  Eigen::MatrixXd k_inv = e * d.cwiseSqrt().asDiagonal();
  if (n == channels) {
    k = e * k;
    k_inv = k_inv * e.transpose();
  }
  const Eigen::MatrixXd z = k * x;

  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n);
  if (options.seed) {
    Rng rng(*options.seed);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) w(i, j) = rng.normal();
    }
    w = symmetric_decorrelation(w);
  }

  const double inv_t = 1.0 / static_cast<double>(t);
  for (out.iterations = 1; out.iterations <= options.max_iter; ++out.iterations) {
    const Eigen::MatrixXd g = (w * z).array().tanh().matrix();
    const Eigen::VectorXd g_prime_mean = (1.0 - g.array().square()).rowwise().mean().matrix();
    Eigen::MatrixXd next = g * z.transpose() * inv_t - g_prime_mean.asDiagonal() * w;
    next = symmetric_decorrelation(next);
    const double change = ((next * w.transpose()).diagonal().cwiseAbs().array() - 1.0).abs().maxCoeff();
    w = next;
    if (change < options.tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) {
    out.iterations = options.max_iter;
    log::warn("ica: no convergence after " + std::to_string(options.max_iter) + " iterations");
  }

  out.whitening = k;
  out.unmixing = w * k;
  out.mixing = k_inv * w.transpose();
  out.sources = w * z;
  for (Eigen::Index c = 0; c < n; ++c) {
    out.kurtosis.push_back(excess_kurtosis(out.sources.row(c)));
    out.low_frequency_ratio.push_back(low_frequency_ratio(out.sources.row(c), rec.sample_rate));
    out.frontal_ratio.push_back(frontal_ratio(out.mixing.col(c), rec.channel_names));
  }
  return out;
}

std::vector<std::size_t> flag_artifacts(const IcaDecomposition& decomp, const RejectionPolicy& policy) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < decomp.components(); ++c) {
    const bool spiky = std::abs(decomp.kurtosis[c]) > policy.kurtosis_limit;
    const bool slow_frontal = decomp.low_frequency_ratio[c] > policy.low_frequency_limit &&
                              decomp.frontal_ratio[c] > policy.frontal_limit;
    if (spiky || slow_frontal) out.push_back(c);
  }
  return out;
}

CleanedRecording reject_components(const IcaDecomposition& decomp, const RejectionPolicy& policy) {
  CleanedRecording out;
  if (policy.mode == RejectionPolicy::Mode::manual) {
    out.rejected = policy.indices;
    std::sort(out.rejected.begin(), out.rejected.end());
    out.rejected.erase(std::unique(out.rejected.begin(), out.rejected.end()), out.rejected.end());
    for (auto i : out.rejected) {
      if (i >= decomp.components()) {
        throw InvalidArgument("ica: component " + std::to_string(i) + " does not exist (" +
                              std::to_string(decomp.components()) + " components)");
      }
    }
  } else {
    out.rejected = flag_artifacts(decomp, policy);
  }
  if (out.rejected.size() == decomp.components()) {
    throw InvalidArgument("ica: rejecting all " + std::to_string(decomp.components()) + " components");
  }
  Eigen::MatrixXd kept = decomp.sources;
  for (auto i : out.rejected) kept.row(static_cast<Eigen::Index>(i)).setZero();
  if (!out.rejected.empty()) {
    std::ostringstream msg;
    msg << "ica: rejected components";
    for (auto i : out.rejected) msg << ' ' << i;
    log::info(msg.str());
  }
  out.recording.data = (decomp.mixing * kept).colwise() + decomp.mean;
  out.recording.sample_rate = decomp.sample_rate;
  out.recording.channel_names = decomp.channel_names;
  out.recording.markers = decomp.markers;
  return out;
}

}  // namespace oaekit::eeg
