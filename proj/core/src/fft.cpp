#include "pathvar/fft.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "pathvar/errors.hpp"

namespace pathvar {

void fft_inplace(std::span<std::complex<double>> data, bool inverse) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) throw ValidationError("fft size must be a power of two");
    if (n == 1) return;

    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::size_t half = len / 2;
        // Twiddles recomputed per stage from cos/sin to avoid drift of the
        // recurrence on long transforms.
        for (std::size_t k = 0; k < half; ++k) {
            const std::complex<double> w{std::cos(angle * static_cast<double>(k)),
                                         std::sin(angle * static_cast<double>(k))};
            for (std::size_t i = k; i < n; i += len) {
                const auto u = data[i];
                const auto v = data[i + half] * w;
                data[i] = u + v;
                data[i + half] = u - v;
            }
        }
    }
}

}  // namespace pathvar
