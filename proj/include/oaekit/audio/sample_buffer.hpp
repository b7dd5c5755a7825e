#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace oaekit::audio {

inline constexpr int kDefaultSampleRate = 48000;

// Uniformly sampled mono signal, full scale is +-1.0. Samples are always
// finite and the rate is always positive; both are checked on construction.
class SampleBuffer {
 public:
  SampleBuffer() = default;
  SampleBuffer(std::vector<double> samples, int sample_rate);

  // A buffer of `count` zeros.
  static SampleBuffer zeros(std::size_t count, int sample_rate);

  [[nodiscard]] int sample_rate() const noexcept { return sample_rate_; }
  [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
  [[nodiscard]] bool empty() const noexcept { return samples_.empty(); }
  [[nodiscard]] double duration() const noexcept;
  [[nodiscard]] double nyquist() const noexcept { return sample_rate_ / 2.0; }

  [[nodiscard]] std::span<const double> samples() const noexcept { return samples_; }
  [[nodiscard]] const std::vector<double>& data() const noexcept { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }

  // Copy of [begin, end). Throws InvalidArgument when out of range.
  [[nodiscard]] SampleBuffer slice(std::size_t begin, std::size_t end) const;

  // Throws InvalidArgument when the buffer is empty; `what` names the caller.
  void require_non_empty(const char* what) const;

  friend bool operator==(const SampleBuffer&, const SampleBuffer&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_ = kDefaultSampleRate;
};

// Element-wise helpers; both operands must share the sample rate and length.
SampleBuffer add(const SampleBuffer& a, const SampleBuffer& b);
SampleBuffer subtract(const SampleBuffer& a, const SampleBuffer& b);
SampleBuffer scale(const SampleBuffer& a, double gain);

double rms(std::span<const double> x);
double peak_abs(std::span<const double> x);

}  // namespace oaekit::audio
