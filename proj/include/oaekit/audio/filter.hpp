#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oaekit/audio/sample_buffer.hpp"

namespace oaekit::audio {

enum class FilterKind { band_stop, band_pass, notch, low_pass, high_pass };
enum class FilterDesign { butterworth, iir_notch };

std::string to_string(FilterKind kind);

// `order` is the order of the analog low-pass prototype, so band-pass and
// band-stop designs carry 2*order poles. Notches use `q` (center / -3 dB
// bandwidth) and ignore `order`.
struct FilterSpec {
  FilterKind kind = FilterKind::band_pass;
  std::vector<double> edges;  // Hz: one edge for low/high-pass and notch, two otherwise
  int order = 4;
  FilterDesign design = FilterDesign::butterworth;
  double q = 30.0;
};

// Direct-form-II transposed biquad, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

class IirFilter {
 public:
  IirFilter(std::vector<Biquad> sections, int sample_rate, FilterSpec spec);

  [[nodiscard]] const std::vector<Biquad>& sections() const noexcept { return sections_; }
  [[nodiscard]] int sample_rate() const noexcept { return sample_rate_; }
  [[nodiscard]] const FilterSpec& spec() const noexcept { return spec_; }

  // Number of poles of the realized transfer function.
  [[nodiscard]] int order() const noexcept { return order_; }

  [[nodiscard]] std::complex<double> response(double frequency_hz) const;
  [[nodiscard]] double magnitude_db(double frequency_hz) const;

  [[nodiscard]] std::vector<std::complex<double>> poles() const;
  [[nodiscard]] double max_pole_radius() const;

  // Samples for the slowest pole's envelope r^n to fall below `threshold`.
  [[nodiscard]] std::size_t decay_length(double threshold) const;

  // Causal filtering from rest.
  [[nodiscard]] std::vector<double> filter(std::span<const double> x) const;
  [[nodiscard]] std::vector<double> impulse_response(std::size_t length) const;

 private:
  std::vector<Biquad> sections_;
  int sample_rate_;
  FilterSpec spec_;
  int order_ = 0;
};

// Designs a stable filter for `rate`. Throws InvalidArgument when edges lie
// outside (0, rate/2) or are unordered, and ProcessingFailure when the
// realized poles are not strictly inside the unit circle.
IirFilter design_filter(const FilterSpec& spec, int rate);

// Forward-backward application (zero phase, squared magnitude response).
// Edges are extended by odd reflection over the filter's decay length and the
// state is started at its step steady state, as scipy's sosfiltfilt does.
// Requires more than 3x the filter order samples.
std::vector<double> filtfilt(std::span<const double> x, const IirFilter& filter);
SampleBuffer apply_filter_zero_phase(const SampleBuffer& buffer, const IirFilter& filter);

}  // namespace oaekit::audio
