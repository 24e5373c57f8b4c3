#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace pathvar {

/// Worker count: `requested` if positive, else PATHVAR_THREADS, else the
/// hardware concurrency (at least 1).
std::size_t resolve_threads(std::size_t requested = 0);

/// Calls body(i) for i in [0, count) on up to `threads` workers. Rethrows the
/// first exception after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

/// Results are stored by index, so the output does not depend on scheduling.
template <typename R, typename Fn>
std::vector<R> run_ensemble(std::size_t count, std::size_t threads, Fn&& fn) {
    std::vector<std::optional<R>> slots(count);
    parallel_for(count, threads, [&](std::size_t i) { slots[i].emplace(fn(i)); });
    std::vector<R> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

/// Median (mean of the two middle values for even sizes); NaN when empty.
double median(std::vector<double> values);

}  // namespace pathvar
