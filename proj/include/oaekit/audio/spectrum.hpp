#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oaekit/audio/sample_buffer.hpp"

namespace oaekit::audio {

enum class Window { rectangular, hann };

Window parse_window(const std::string& name);
std::string to_string(Window w);

// Periodic window of length n (the Hann form is 0.5 - 0.5 cos(2 pi i / n)).
std::vector<double> make_window(Window w, std::size_t n);

// One-sided magnitude spectrum in amplitude units: a sine of amplitude A that
// falls exactly on a bin reads A, a constant c reads c at bin 0. Bins are
// divided by N/2 (N for DC and Nyquist) and by the window's coherent gain.
struct Spectrum {
  std::vector<double> bin_frequencies;  // Hz
  std::vector<double> magnitudes;
  double resolution = 0.0;              // Hz per bin = rate / N
  Window window = Window::rectangular;
  std::size_t transform_length = 0;

  [[nodiscard]] std::size_t bin_of(double frequency) const;
  [[nodiscard]] std::size_t peak_bin() const;
};

// Transform length `n` truncates the buffer when shorter than it; a longer
// `n` zero-pads only when `allow_zero_pad` is set.
Spectrum fft_magnitude(const SampleBuffer& buffer, Window window, std::size_t n,
                       bool allow_zero_pad = false);
Spectrum fft_magnitude(const SampleBuffer& buffer, Window window = Window::hann);

// Averaged periodogram (Welch). `power[k]` is the power carried by bin k, so
// summing bins over a band gives the mean-square signal in that band and
// summing all bins gives the mean square of the (detrended) input.
struct PowerSpectrum {
  std::vector<double> frequencies;
  std::vector<double> power;
  double resolution = 0.0;
  std::size_t segments = 0;

  // Sum of bins with frequency in [low, high).
  [[nodiscard]] double band(double low, double high) const;
};

struct WelchOptions {
  std::size_t segment_length = 0;  // samples; 0 means the whole signal
  double overlap = 0.5;            // fraction of segment_length in [0, 1)
  Window window = Window::hann;
  bool detrend_constant = true;
};

PowerSpectrum welch(std::span<const double> x, int sample_rate, const WelchOptions& options);

}  // namespace oaekit::audio
