#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace pathvar {

/// In-place iterative radix-2 FFT, X_k = sum_j x_j exp(-2 pi i j k / n).
/// `data.size()` must be a power of two; `inverse` flips the sign of the
/// exponent and does not rescale.
void fft_inplace(std::span<std::complex<double>> data, bool inverse = false);

constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

constexpr std::size_t next_power_of_two(std::size_t n) noexcept {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

}  // namespace pathvar
