#include "oaekit/stimulus/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "oaekit/audio/tone.hpp"
#include "oaekit/audio/wav.hpp"
#include "oaekit/error.hpp"
#include "oaekit/random.hpp"

namespace oaekit::stimulus::fixtures {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNoiseBed = 0.01;

std::size_t sample_count(double duration, int rate) {
  if (!(duration > 0.0)) throw InvalidArgument("fixture duration must be positive");
  if (rate <= 0) throw InvalidArgument("fixture sample rate must be positive");
  return static_cast<std::size_t>(std::lround(duration * rate));
}

void add_noise(std::vector<double>& x, Rng& rng, double level) {
  for (double& v : x) v += level * rng.normal();
}

// Adds a windowed burst starting at `start`; `freq(t)` gives the instantaneous
// frequency t seconds into the burst.
template <typename F>
void add_burst(std::vector<double>& x, int rate, std::size_t start, std::size_t length,
               double amplitude, F freq) {
  const std::size_t ramp = std::min(length / 2, audio::fade_samples(0.005, rate));
  double phase = 0.0;
  for (std::size_t i = 0; i < length && start + i < x.size(); ++i) {
    const double g = audio::fade_gain(i, ramp) * audio::fade_gain(length - 1 - i, ramp);
    x[start + i] += amplitude * g * std::sin(phase);
    phase = std::fmod(phase + kTwoPi * freq(static_cast<double>(i) / rate) / rate, kTwoPi);
  }
}

constexpr std::array<double, 4> kRows = {697.0, 770.0, 852.0, 941.0};
constexpr std::array<double, 3> kCols = {1209.0, 1336.0, 1477.0};

std::pair<double, double> digit_pair(int digit) {
  const int d = digit == 0 ? 10 : digit - 1;  // keypad position, 0 under 8
  return {kRows[d / 3], kCols[d % 3]};
}

// One voice of digit beeps; `pitch` scales the keypad frequencies.
void add_digit_voice(std::vector<double>& x, int rate, Rng& rng, double pitch, double offset,
                     double amplitude) {
  const auto beep = static_cast<std::size_t>(0.18 * rate);
  const auto step = static_cast<std::size_t>(0.32 * rate);
  for (auto start = static_cast<std::size_t>(offset * rate); start + beep <= x.size(); start += step) {
    const auto [lo, hi] = digit_pair(static_cast<int>(rng.below(10)));
    add_burst(x, rate, start, beep, amplitude, [&](double) { return pitch * lo; });
    add_burst(x, rate, start, beep, 0.7 * amplitude, [&](double) { return pitch * hi; });
  }
}

}  // namespace

audio::SampleBuffer animal_chirps(double duration, int rate, std::uint64_t seed) {
  std::vector<double> x(sample_count(duration, rate), 0.0);
  Rng rng(derive_seed(seed, {1}));
  std::size_t start = 0;
  while (start < x.size()) {
    const double len_s = rng.uniform(0.12, 0.35);
    const double f0 = rng.uniform(400.0, 1500.0);
    const double f1 = rng.uniform(1500.0, 4500.0);
    const bool rising = rng.bernoulli(0.5);
    const double a = rising ? f0 : f1, b = rising ? f1 : f0;
    const auto len = static_cast<std::size_t>(len_s * rate);
    add_burst(x, rate, start, len, rng.uniform(0.2, 0.4),
              [&](double t) { return a + (b - a) * t / len_s; });
    start += len + static_cast<std::size_t>(rng.uniform(0.05, 0.2) * rate);
  }
  add_noise(x, rng, kNoiseBed);
  return audio::SampleBuffer(std::move(x), rate);
}

audio::SampleBuffer digits_single(double duration, int rate, std::uint64_t seed) {
  std::vector<double> x(sample_count(duration, rate), 0.0);
  Rng rng(derive_seed(seed, {2}));
  add_digit_voice(x, rate, rng, 1.0, 0.05, 0.3);
  add_noise(x, rng, kNoiseBed);
  return audio::SampleBuffer(std::move(x), rate);
}

audio::SampleBuffer digits_dual(double duration, int rate, std::uint64_t seed) {
  std::vector<double> x(sample_count(duration, rate), 0.0);
  Rng rng(derive_seed(seed, {3}));
  add_digit_voice(x, rate, rng, 0.75, 0.05, 0.25);
  add_digit_voice(x, rate, rng, 1.9, 0.17, 0.25);
  add_noise(x, rng, kNoiseBed);
  return audio::SampleBuffer(std::move(x), rate);
}

audio::SampleBuffer make_clip(const std::string& name, double duration, int rate,
                              std::uint64_t seed) {
  const auto& names = clip_names();
  if (name == names[0]) return animal_chirps(duration, rate, seed);
  if (name == names[1]) return digits_single(duration, rate, seed);
  if (name == names[2]) return digits_dual(duration, rate, seed);
  throw MissingInput("no bundled fixture named " + name);
}

void write_clips(const std::filesystem::path& dir, double duration, int rate, std::uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& name : clip_names()) {
    audio::save_wav(make_clip(name, duration, rate, seed), dir / name, audio::WavEncoding::float32);
  }
}

}  // namespace oaekit::stimulus::fixtures
