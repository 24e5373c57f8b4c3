#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pathvar/paths.hpp"
#include "pathvar/random.hpp"

namespace pathvar::test {

inline SampledPath fbm_path(double hurst, std::size_t steps, std::uint64_t seed, double horizon = 1.0,
                            std::size_t dim = 1) {
    FbmOptions o;
    o.hurst = hurst;
    o.num_steps = steps;
    o.seed = seed;
    o.horizon = horizon;
    o.dim = dim;
    return generate_fbm(o);
}

inline SampledPath bm_path(std::size_t steps, std::uint64_t seed, double horizon = 1.0) {
    return fbm_path(0.5, steps, seed, horizon);
}

inline SampledPath line_path(double slope, std::size_t steps, double horizon = 1.0, double intercept = 0.0) {
    return generate_analytic(AnalyticKind::line, {{"slope", slope}, {"intercept", intercept}}, horizon, steps);
}

inline SampledPath sine_path(std::size_t steps, double amplitude = 1.0, double frequency = 1.0) {
    return generate_analytic(AnalyticKind::sine, {{"amplitude", amplitude}, {"frequency", frequency}}, 1.0, steps);
}

inline SampledPath constant_path(double value, std::size_t steps, double horizon = 1.0) {
    return SampledPath(horizon, 1, std::vector<double>(steps + 1, value));
}

/// Arbitrary scalar path from explicit samples on [0, horizon].
inline SampledPath from_samples(std::vector<double> values, double horizon = 1.0) {
    return SampledPath(horizon, 1, std::move(values));
}

/// Gaussian random walk with i.i.d. N(0, sd^2) steps, independent of the fBm code.
inline SampledPath gaussian_walk(std::size_t steps, double sd, std::uint64_t seed, double horizon = 1.0) {
    Engine rng = make_engine(seed);
    std::normal_distribution<double> z(0.0, sd);
    std::vector<double> v(steps + 1, 0.0);
    for (std::size_t i = 1; i <= steps; ++i) v[i] = v[i - 1] + z(rng);
    return from_samples(std::move(v), horizon);
}

}  // namespace pathvar::test
