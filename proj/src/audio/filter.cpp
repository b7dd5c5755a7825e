#include "oaekit/audio/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oaekit/error.hpp"

namespace oaekit::audio {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

struct Zpk {
  std::vector<cd> zeros;
  std::vector<cd> poles;
};

// Analog Butterworth low-pass prototype with unit cutoff.
std::vector<cd> butterworth_poles(int order) {
  std::vector<cd> p;
  for (int m = -order + 1; m < order; m += 2) {
    p.push_back(-std::exp(cd(0.0, kPi * m / (2.0 * order))));
  }
  return p;
}

double prewarp(double hz, int rate) { return 2.0 * rate * std::tan(kPi * hz / rate); }

Zpk analog_design(const FilterSpec& spec, int rate) {
  const auto proto = butterworth_poles(spec.order);
  const auto degree = proto.size();
  Zpk out;
  switch (spec.kind) {
    case FilterKind::low_pass: {
      const double wc = prewarp(spec.edges[0], rate);
      for (const cd& p : proto) out.poles.push_back(p * wc);
      break;
    }
    case FilterKind::high_pass: {
      const double wc = prewarp(spec.edges[0], rate);
      for (const cd& p : proto) out.poles.push_back(wc / p);
      out.zeros.assign(degree, cd(0.0, 0.0));
      break;
    }
    case FilterKind::band_pass: {
      const double w1 = prewarp(spec.edges[0], rate);
      const double w2 = prewarp(spec.edges[1], rate);
      const double w0 = std::sqrt(w1 * w2);
      const double bw = w2 - w1;
      for (const cd& p : proto) {
        const cd x = p * bw / 2.0;
        const cd root = std::sqrt(x * x - w0 * w0);
        out.poles.push_back(x + root);
        out.poles.push_back(x - root);
      }
      out.zeros.assign(degree, cd(0.0, 0.0));
      break;
    }
    case FilterKind::band_stop: {
      const double w1 = prewarp(spec.edges[0], rate);
      const double w2 = prewarp(spec.edges[1], rate);
      const double w0 = std::sqrt(w1 * w2);
      const double bw = w2 - w1;
      for (const cd& p : proto) {
        const cd x = (bw / 2.0) / p;
        const cd root = std::sqrt(x * x - w0 * w0);
        out.poles.push_back(x + root);
        out.poles.push_back(x - root);
      }
      for (std::size_t i = 0; i < degree; ++i) {
        out.zeros.emplace_back(0.0, w0);
        out.zeros.emplace_back(0.0, -w0);
      }
      break;
    }
    case FilterKind::notch:
      break;
  }
  return out;
}

Zpk bilinear(const Zpk& analog, int rate) {
  const double fs2 = 2.0 * rate;
  Zpk out;
  for (const cd& z : analog.zeros) out.zeros.push_back((fs2 + z) / (fs2 - z));
  for (const cd& p : analog.poles) out.poles.push_back((fs2 + p) / (fs2 - p));
  // Zeros at infinity map to Nyquist.
  while (out.zeros.size() < out.poles.size()) out.zeros.emplace_back(-1.0, 0.0);
  return out;
}

// Splits roots into quadratic factors [1, c1, c2]: conjugate pairs first,
// then real roots two at a time, preferring to pair +1 with -1 so band-pass
// sections each keep one zero at DC and one at Nyquist. A leftover real root
// becomes a first-order factor [1, -r, 0].
std::vector<std::pair<double, double>> quadratic_factors(std::vector<cd> roots) {
  constexpr double kImagTol = 1e-10;
  std::vector<double> reals;
  std::vector<cd> upper;
  for (const cd& r : roots) {
    if (std::abs(r.imag()) <= kImagTol * std::max(1.0, std::abs(r))) {
      reals.push_back(r.real());
    } else if (r.imag() > 0) {
      upper.push_back(r);
    }
  }
  std::sort(upper.begin(), upper.end(),
            [](const cd& a, const cd& b) { return std::abs(a) > std::abs(b); });
  std::vector<std::pair<double, double>> factors;
  for (const cd& r : upper) factors.emplace_back(-2.0 * r.real(), std::norm(r));

  std::vector<double> positive, negative;
  for (double r : reals) (r >= 0 ? positive : negative).push_back(r);
  while (!positive.empty() && !negative.empty()) {
    const double a = positive.back(), b = negative.back();
    positive.pop_back();
    negative.pop_back();
    factors.emplace_back(-(a + b), a * b);
  }
  auto& rest = positive.empty() ? negative : positive;
  while (rest.size() >= 2) {
    const double a = rest.back();
    rest.pop_back();
    const double b = rest.back();
    rest.pop_back();
    factors.emplace_back(-(a + b), a * b);
  }
  if (!rest.empty()) factors.emplace_back(-rest.back(), 0.0);
  return factors;
}

cd section_response(const Biquad& s, double omega) {
  const cd z1 = std::exp(cd(0.0, -omega));
  const cd z2 = z1 * z1;
  return (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
}

// Frequency (Hz) at which the ideal design has unit gain.
double reference_frequency(const FilterSpec& spec, int rate) {
  switch (spec.kind) {
    case FilterKind::low_pass:
    case FilterKind::band_stop:
    case FilterKind::notch:
      return 0.0;
    case FilterKind::high_pass:
      return rate / 2.0;
    case FilterKind::band_pass: {
      // Geometric center in the prewarped domain, mapped back.
      const double t1 = std::tan(kPi * spec.edges[0] / rate);
      const double t2 = std::tan(kPi * spec.edges[1] / rate);
      return std::atan(std::sqrt(t1 * t2)) * rate / kPi;
    }
  }
  return 0.0;
}

void validate(const FilterSpec& spec, int rate) {
  if (rate <= 0) throw InvalidArgument("design_filter: sample rate must be positive");
  const double nyquist = rate / 2.0;
  const std::size_t want =
      (spec.kind == FilterKind::band_pass || spec.kind == FilterKind::band_stop) ? 2 : 1;
  if (spec.edges.size() != want) {
    throw InvalidArgument("design_filter: " + to_string(spec.kind) + " needs " +
                          std::to_string(want) + " edge(s)");
  }
  for (double e : spec.edges) {
    if (!(e > 0.0) || !(e < nyquist)) {
      throw InvalidArgument("design_filter: edge " + std::to_string(e) +
                            " Hz must lie strictly inside (0, " + std::to_string(nyquist) +
                            ") Hz");
    }
  }
  if (want == 2 && !(spec.edges[0] < spec.edges[1])) {
    throw InvalidArgument("design_filter: band edges must be increasing");
  }
  if (spec.kind == FilterKind::notch) {
    if (spec.design != FilterDesign::iir_notch) {
      throw InvalidArgument("design_filter: notch filters use the iir_notch design");
    }
    if (!(spec.q > 0.0)) throw InvalidArgument("design_filter: notch Q must be positive");
  } else {
    if (spec.design != FilterDesign::butterworth) {
      throw InvalidArgument("design_filter: only notch filters use the iir_notch design");
    }
    if (spec.order < 1 || spec.order > 24) {
      throw InvalidArgument("design_filter: order must be in [1, 24]");
    }
  }
}

}  // namespace

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::band_stop: return "band-stop";
    case FilterKind::band_pass: return "band-pass";
    case FilterKind::notch: return "notch";
    case FilterKind::low_pass: return "low-pass";
    case FilterKind::high_pass: return "high-pass";
  }
  return "unknown";
}

IirFilter::IirFilter(std::vector<Biquad> sections, int sample_rate, FilterSpec spec)
    : sections_(std::move(sections)), sample_rate_(sample_rate), spec_(std::move(spec)) {
  for (const auto& s : sections_) order_ += (s.a2 != 0.0 || s.b2 != 0.0) ? 2 : 1;
}

std::complex<double> IirFilter::response(double frequency_hz) const {
  const double omega = 2.0 * kPi * frequency_hz / sample_rate_;
  cd h(1.0, 0.0);
  for (const auto& s : sections_) h *= section_response(s, omega);
  return h;
}

double IirFilter::magnitude_db(double frequency_hz) const {
  return 20.0 * std::log10(std::max(std::abs(response(frequency_hz)), 1e-300));
}

std::vector<std::complex<double>> IirFilter::poles() const {
  std::vector<cd> out;
  for (const auto& s : sections_) {
    if (s.a2 == 0.0) {
      if (s.a1 != 0.0) out.emplace_back(-s.a1, 0.0);
      continue;
    }
    const cd disc = std::sqrt(cd(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
    out.push_back((-s.a1 + disc) / 2.0);
    out.push_back((-s.a1 - disc) / 2.0);
  }
  return out;
}

double IirFilter::max_pole_radius() const {
  double r = 0.0;
  for (const cd& p : poles()) r = std::max(r, std::abs(p));
  return r;
}

std::size_t IirFilter::decay_length(double threshold) const {
  const double r = max_pole_radius();
  if (r <= 0.0) return 1;
  return static_cast<std::size_t>(std::ceil(std::log(threshold) / std::log(r)));
}

std::vector<double> IirFilter::filter(std::span<const double> x) const {
  std::vector<double> y(x.begin(), x.end());
  for (const auto& s : sections_) {
    double z1 = 0.0, z2 = 0.0;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> IirFilter::impulse_response(std::size_t length) const {
  std::vector<double> x(length, 0.0);
  if (length > 0) x[0] = 1.0;
  return filter(x);
}

IirFilter design_filter(const FilterSpec& spec, int rate) {
  validate(spec, rate);

  std::vector<Biquad> sections;
  if (spec.kind == FilterKind::notch) {
    const double w0 = 2.0 * kPi * spec.edges[0] / rate;
    const double bw = w0 / spec.q;
    const double gain = 1.0 / (1.0 + std::tan(bw / 2.0));
    const double c = std::cos(w0);
    sections.push_back({gain, -2.0 * gain * c, gain, -2.0 * gain * c, 2.0 * gain - 1.0});
  } else {
    const Zpk digital = bilinear(analog_design(spec, rate), rate);
    const auto zf = quadratic_factors(digital.zeros);
    const auto pf = quadratic_factors(digital.poles);
    if (zf.size() != pf.size()) {
      throw ProcessingFailure("design_filter: zero/pole factorization mismatch");
    }
    const double ref = 2.0 * kPi * reference_frequency(spec, rate) / rate;
    for (std::size_t i = 0; i < pf.size(); ++i) {
      Biquad s{1.0, zf[i].first, zf[i].second, pf[i].first, pf[i].second};
      // Unit gain per section at the reference frequency keeps the cascade
      // well scaled even for narrow, high-order bands.
      const double g = std::abs(section_response(s, ref));
      if (!(g > 0.0) || !std::isfinite(g)) {
        throw ProcessingFailure("design_filter: degenerate section gain");
      }
      s.b0 /= g;
      s.b1 /= g;
      s.b2 /= g;
      sections.push_back(s);
    }
    cd total(1.0, 0.0);
    for (const auto& s : sections) total *= section_response(s, ref);
    if (total.real() < 0.0) {
      sections.front().b0 = -sections.front().b0;
      sections.front().b1 = -sections.front().b1;
      sections.front().b2 = -sections.front().b2;
    }
  }

  IirFilter filter(std::move(sections), rate, spec);
  const double r = filter.max_pole_radius();
  if (!(r < 1.0 - 1e-12)) {
    throw ProcessingFailure("design_filter: unstable " + to_string(spec.kind) +
                            " design (pole radius " + std::to_string(r) +
                            "); order too high for the band");
  }
  return filter;
}

namespace {

// Per-section DF2T state for a unit step held forever, scaled by the DC gain
// of the sections before it.
std::vector<std::pair<double, double>> step_steady_state(const std::vector<Biquad>& sections) {
  std::vector<std::pair<double, double>> zi;
  double input = 1.0;
  for (const auto& s : sections) {
    const double y = input * (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    zi.emplace_back(y - s.b0 * input, s.b2 * input - s.a2 * y);
    input = y;
  }
  return zi;
}

void filter_in_place(std::vector<double>& y, const std::vector<Biquad>& sections,
                     const std::vector<std::pair<double, double>>& zi, double x0) {
  // All sections per sample: the per-section recursions then overlap.
  const std::size_t m = sections.size();
  std::vector<double> z1(m), z2(m);
  for (std::size_t k = 0; k < m; ++k) {
    z1[k] = zi[k].first * x0;
    z2[k] = zi[k].second * x0;
  }
  for (double& v : y) {
    double in = v;
    for (std::size_t k = 0; k < m; ++k) {
      const auto& s = sections[k];
      const double out = s.b0 * in + z1[k];
      z1[k] = s.b1 * in - s.a1 * out + z2[k];
      z2[k] = s.b2 * in - s.a2 * out;
      in = out;
    }
    v = in;
  }
}

}  // namespace

std::vector<double> filtfilt(std::span<const double> x, const IirFilter& filter) {
  const std::size_t n = x.size();
  const auto min_len = static_cast<std::size_t>(3 * filter.order());
  if (n <= min_len) {
    throw InvalidArgument("apply_filter_zero_phase: buffer of " + std::to_string(n) +
                          " samples is too short (need more than " + std::to_string(min_len) +
                          ")");
  }
  const std::size_t pad = std::min(n - 1, std::max(min_len, filter.decay_length(1e-10)));

  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  const auto zi = step_steady_state(filter.sections());
  filter_in_place(ext, filter.sections(), zi, ext.front());
  std::reverse(ext.begin(), ext.end());
  filter_in_place(ext, filter.sections(), zi, ext.front());
  std::reverse(ext.begin(), ext.end());
  return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
          ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

SampleBuffer apply_filter_zero_phase(const SampleBuffer& buffer, const IirFilter& filter) {
  if (buffer.sample_rate() != filter.sample_rate()) {
    throw InvalidArgument("apply_filter_zero_phase: filter designed for " +
                          std::to_string(filter.sample_rate()) + " Hz, buffer is " +
                          std::to_string(buffer.sample_rate()) + " Hz");
  }
  return SampleBuffer(filtfilt(buffer.samples(), filter), buffer.sample_rate());
}

}  // namespace oaekit::audio
