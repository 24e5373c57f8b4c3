#pragma once

#include <cstdint>
#include <random>

namespace pathvar {

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Seed of stream `index` under `master`. Ensemble member i always draws from
/// derive_seed(master, i), independent of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine{mix_seed(seed)}; }

}  // namespace pathvar
