#include "oaekit/audio/sample_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oaekit/error.hpp"

namespace oaekit::audio {

SampleBuffer::SampleBuffer(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw InvalidArgument("sample rate must be positive, got " + std::to_string(sample_rate_));
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw InvalidArgument("non-finite sample at index " + std::to_string(i));
    }
  }
}

SampleBuffer SampleBuffer::zeros(std::size_t count, int sample_rate) {
  return SampleBuffer(std::vector<double>(count, 0.0), sample_rate);
}

double SampleBuffer::duration() const noexcept {
  return static_cast<double>(samples_.size()) / sample_rate_;
}

SampleBuffer SampleBuffer::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > samples_.size()) {
    throw InvalidArgument("slice [" + std::to_string(begin) + ", " + std::to_string(end) +
                          ") outside buffer of length " + std::to_string(samples_.size()));
  }
  return SampleBuffer(std::vector<double>(samples_.begin() + static_cast<std::ptrdiff_t>(begin),
                                          samples_.begin() + static_cast<std::ptrdiff_t>(end)),
                      sample_rate_);
}

void SampleBuffer::require_non_empty(const char* what) const {
  if (samples_.empty()) throw InvalidArgument(std::string(what) + ": empty buffer");
}

namespace {

void require_compatible(const SampleBuffer& a, const SampleBuffer& b) {
  if (a.sample_rate() != b.sample_rate()) {
    throw InvalidArgument("sample rate mismatch: " + std::to_string(a.sample_rate()) + " vs " +
                          std::to_string(b.sample_rate()));
  }
  if (a.size() != b.size()) {
    throw InvalidArgument("length mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
}

}  // namespace

SampleBuffer add(const SampleBuffer& a, const SampleBuffer& b) {
  require_compatible(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return SampleBuffer(std::move(out), a.sample_rate());
}

SampleBuffer subtract(const SampleBuffer& a, const SampleBuffer& b) {
  require_compatible(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return SampleBuffer(std::move(out), a.sample_rate());
}

SampleBuffer scale(const SampleBuffer& a, double gain) {
  std::vector<double> out(a.data());
  for (double& v : out) v *= gain;
  return SampleBuffer(std::move(out), a.sample_rate());
}

double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

double peak_abs(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

}  // namespace oaekit::audio
