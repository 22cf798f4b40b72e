#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace lpkit::detail {

// Unnormalized DFT on a dim-dimensional N^dim array, in place.
// sign = -1 computes sum_x a(x) e^{-2 pi i k.x/N}; sign = +1 the conjugate sum.
void fft_inplace(std::span<std::complex<double>> data, int dim, std::size_t n, int sign);

}  // namespace lpkit::detail
