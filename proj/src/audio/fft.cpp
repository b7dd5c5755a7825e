#include "oaekit/audio/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "oaekit/error.hpp"

namespace oaekit::audio {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan with the
// new-array interface is. Plans are cached per (direction, length) for the
// life of the process.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(bool forward, std::size_t n) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(forward, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* real = fftw_alloc_real(n);
    auto* cplx = fftw_alloc_complex(n / 2 + 1);
    const int len = static_cast<int>(n);
    fftw_plan plan = forward
        ? fftw_plan_dft_r2c_1d(len, real, cplx, FFTW_ESTIMATE | FFTW_UNALIGNED)
        : fftw_plan_dft_c2r_1d(len, cplx, real, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(real);
    fftw_free(cplx);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<bool, std::size_t>, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

}  // namespace

std::vector<std::complex<double>> fft_forward(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("fft_forward: transform length must be positive");
  const std::size_t n = x.size();
  std::vector<double> input(x.begin(), x.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_execute_dft_r2c(plans().get(true, n), input.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> fft_inverse(std::span<const std::complex<double>> half_spectrum,
                                std::size_t n) {
  if (n == 0) throw InvalidArgument("fft_inverse: transform length must be positive");
  if (half_spectrum.size() != n / 2 + 1) {
    throw InvalidArgument("fft_inverse: expected " + std::to_string(n / 2 + 1) + " bins, got " +
                          std::to_string(half_spectrum.size()));
  }
  // c2r destroys its input.
  std::vector<std::complex<double>> scratch(half_spectrum.begin(), half_spectrum.end());
  std::vector<double> out(n);
  fftw_execute_dft_c2r(plans().get(false, n), reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double inv = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= inv;
  return out;
}

}  // namespace oaekit::audio
