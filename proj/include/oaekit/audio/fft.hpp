#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace oaekit::audio {

// Unnormalized real-to-complex DFT, X[k] = sum_n x[n] e^{-j2pi kn/N}, for
// k = 0..N/2. Any length N >= 1 is accepted; there is no power-of-two
// restriction.
std::vector<std::complex<double>> fft_forward(std::span<const double> x);

// Inverse of fft_forward for a length-`n` real signal (includes the 1/N).
std::vector<double> fft_inverse(std::span<const std::complex<double>> half_spectrum, std::size_t n);

}  // namespace oaekit::audio
