#pragma once

#include <cstdint>
#include <initializer_list>

namespace oaekit {

// Mixes a root seed with stream identifiers (participant index, segment
// index, ...) into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> stream);

// xoshiro256** seeded through splitmix64. Unlike the <random> distributions,
// every draw here is specified bit-for-bit, so seeded outputs are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform random bit generator interface.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double low, double high);
  // Uniform integer in [0, n), n > 0, without modulo bias.
  std::uint64_t below(std::uint64_t n);
  // Standard normal (Box-Muller, cached pair).
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace oaekit
