#pragma once

#include <complex>
#include <cstddef>

namespace scatterkit::detail {

// Unnormalized complex-to-complex transform on an h x w row-major grid
// (h == 1 for 1D). sign < 0 is the forward transform (kernel e^{-2πi...}),
// sign > 0 the unnormalized backward one. Plans are cached per shape; safe to
// call from multiple threads.
void fft_c2c(std::size_t height, std::size_t width, int sign,
             const std::complex<double>* in, std::complex<double>* out);

}  // namespace scatterkit::detail
