#include "oaekit/audio/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "oaekit/audio/fft.hpp"
#include "oaekit/error.hpp"

namespace oaekit::audio {

Window parse_window(const std::string& name) {
  if (name == "hann") return Window::hann;
  if (name == "rectangular" || name == "rect") return Window::rectangular;
  throw InvalidArgument("unknown window '" + name + "' (expected hann or rectangular)");
}

std::string to_string(Window w) { return w == Window::hann ? "hann" : "rectangular"; }

std::vector<double> make_window(Window w, std::size_t n) {
  std::vector<double> out(n, 1.0);
  if (w == Window::hann) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                    static_cast<double>(n));
    }
  }
  return out;
}

std::size_t Spectrum::bin_of(double frequency) const {
  const double k = std::round(frequency / resolution);
  if (k < 0 || k >= static_cast<double>(magnitudes.size())) {
    throw InvalidArgument("frequency " + std::to_string(frequency) + " Hz outside spectrum");
  }
  return static_cast<std::size_t>(k);
}

std::size_t Spectrum::peak_bin() const {
  return static_cast<std::size_t>(
      std::distance(magnitudes.begin(), std::max_element(magnitudes.begin(), magnitudes.end())));
}

Spectrum fft_magnitude(const SampleBuffer& buffer, Window window, std::size_t n,
                       bool allow_zero_pad) {
  if (n == 0) throw InvalidArgument("fft_magnitude: transform length must be positive");
  buffer.require_non_empty("fft_magnitude");
  if (n > buffer.size() && !allow_zero_pad) {
    throw InvalidArgument("fft_magnitude: transform length " + std::to_string(n) +
                          " exceeds buffer length " + std::to_string(buffer.size()) +
                          " and zero padding is disabled");
  }

  // The window spans the data actually present; padding stays zero.
  const std::size_t used = std::min(n, buffer.size());
  const auto w = make_window(window, used);
  std::vector<double> frame(n, 0.0);
  for (std::size_t i = 0; i < used; ++i) frame[i] = buffer[i] * w[i];
  const double coherent = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(n);

  const auto bins = fft_forward(frame);
  Spectrum s;
  s.window = window;
  s.transform_length = n;
  s.resolution = static_cast<double>(buffer.sample_rate()) / static_cast<double>(n);
  s.bin_frequencies.resize(bins.size());
  s.magnitudes.resize(bins.size());
  const double full = static_cast<double>(n) * coherent;
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
    s.bin_frequencies[k] = static_cast<double>(k) * s.resolution;
    s.magnitudes[k] = std::abs(bins[k]) / (edge ? full : full / 2.0);
  }
  return s;
}

Spectrum fft_magnitude(const SampleBuffer& buffer, Window window) {
  return fft_magnitude(buffer, window, buffer.size(), false);
}

double PowerSpectrum::band(double low, double high) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    if (frequencies[k] >= low && frequencies[k] < high) acc += power[k];
  }
  return acc;
}

PowerSpectrum welch(std::span<const double> x, int sample_rate, const WelchOptions& options) {
  if (x.empty()) throw InvalidArgument("welch: empty input");
  if (sample_rate <= 0) throw InvalidArgument("welch: sample rate must be positive");
  if (options.overlap < 0.0 || options.overlap >= 1.0) {
    throw InvalidArgument("welch: overlap must be in [0, 1)");
  }
  const std::size_t n = options.segment_length == 0 ? x.size() : options.segment_length;
  if (n > x.size()) {
    throw InvalidArgument("welch: segment length " + std::to_string(n) +
                          " exceeds signal length " + std::to_string(x.size()));
  }
  const auto hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(static_cast<double>(n) * (1.0 - options.overlap))));
  const auto w = make_window(options.window, n);
  double w_energy = 0.0;
  for (double v : w) w_energy += v * v;

  PowerSpectrum out;
  out.resolution = static_cast<double>(sample_rate) / static_cast<double>(n);
  out.power.assign(n / 2 + 1, 0.0);
  out.frequencies.resize(n / 2 + 1);
  for (std::size_t k = 0; k < out.frequencies.size(); ++k) {
    out.frequencies[k] = static_cast<double>(k) * out.resolution;
  }

  std::vector<double> frame(n);
  for (std::size_t start = 0; start + n <= x.size(); start += hop) {
    double mean = 0.0;
    if (options.detrend_constant) {
      for (std::size_t i = 0; i < n; ++i) mean += x[start + i];
      mean /= static_cast<double>(n);
    }
    for (std::size_t i = 0; i < n; ++i) frame[i] = (x[start + i] - mean) * w[i];
    const auto bins = fft_forward(frame);
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
      out.power[k] += (edge ? 1.0 : 2.0) * std::norm(bins[k]);
    }
    ++out.segments;
  }
  const double norm = static_cast<double>(out.segments) * static_cast<double>(n) * w_energy;
  for (double& p : out.power) p /= norm;
  return out;
}

}  // namespace oaekit::audio
