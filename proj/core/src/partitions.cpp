#include "pathvar/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pathvar/errors.hpp"

namespace pathvar {

Scheme parse_scheme(const std::string& name) {
    if (name == "uniform" || name == "uniform_dyadic") return Scheme::uniform;
    if (name == "lebesgue" || name == "lebesgue_dyadic") return Scheme::lebesgue;
    throw ValidationError("unknown partition scheme: " + name);
}

std::string to_string(Scheme scheme) { return scheme == Scheme::uniform ? "uniform" : "lebesgue"; }

Partition::Partition(std::vector<double> times, Scheme scheme, int level)
    : times_(std::move(times)), scheme_(scheme), level_(level) {
    if (times_.size() < 2) throw ValidationError("partition needs at least two points");
    if (times_.front() != 0.0) throw ValidationError("partition must start at 0");
    for (std::size_t j = 1; j < times_.size(); ++j)
        if (!(times_[j] > times_[j - 1])) throw ValidationError("partition times must be strictly increasing");
}

Partition::Partition(std::vector<double> times, int level, std::vector<double> values, bool initial_on_grid,
                     bool terminal_stub)
    : Partition(std::move(times), Scheme::lebesgue, level) {
    if (values.size() != times_.size()) throw ValidationError("partition values do not match its times");
    values_ = std::move(values);
    initial_on_grid_ = initial_on_grid;
    terminal_stub_ = terminal_stub;
}

double Partition::mesh() const noexcept {
    double m = 0.0;
    for (std::size_t j = 0; j + 1 < times_.size(); ++j) m = std::max(m, times_[j + 1] - times_[j]);
    return m;
}

std::size_t Partition::interval_of(double t) const noexcept {
    if (t >= times_.back()) return num_intervals();
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

Partition uniform_dyadic(int n, double horizon) {
    if (n < 0) throw ValidationError("partition level must be non-negative");
    if (n > 40) throw ValidationError("partition level too large");
    if (!(horizon > 0.0)) throw ValidationError("partition horizon must be positive");
    const std::size_t count = std::size_t{1} << n;
    std::vector<double> times(count + 1);
    for (std::size_t k = 0; k < count; ++k) times[k] = horizon * std::ldexp(static_cast<double>(k), -n);
    times[count] = horizon;
    return Partition(std::move(times), Scheme::uniform, n);
}

Partition lebesgue_dyadic(const SampledPath& path, int n) {
    if (path.dim() != 1) throw ValidationError("dyadic Lebesgue partitions are defined for scalar paths only");
    if (n < 0 || n > 60) throw ValidationError("partition level out of range");
    const double h = std::ldexp(1.0, -n);
    if (!(path.max_increment() < h))
        throw ResolutionError("level " + std::to_string(n) + " is not resolvable: a sample increment reaches 2^-" +
                              std::to_string(n));

    // Work in units of h; scaling by a power of two is exact.
    auto y = [&](std::size_t i) { return std::ldexp(path.value(i), n); };
    const double dt = path.step();
    const std::size_t steps = path.num_steps();

    std::vector<double> times{0.0};
    std::vector<double> values{path.value(0)};
    const double y0 = y(0);
    const bool on_grid = std::floor(y0) == y0;
    double lo = on_grid ? y0 - 1.0 : std::floor(y0);
    double hi = on_grid ? y0 + 1.0 : std::ceil(y0);

    for (std::size_t i = 0; i < steps; ++i) {
        const double a = y(i);
        const double b = y(i + 1);
        double level;
        if (b >= hi && a < hi) {
            level = hi;
        } else if (b <= lo && a > lo) {
            level = lo;
        } else {
            continue;
        }
        // Increments are below one unit, so a segment holds at most one hit.
        const double frac = b == level ? 1.0 : (level - a) / (b - a);
        double t = i + 1 == steps && frac == 1.0 ? path.horizon() : path.time(i) + frac * dt;
        if (!(t > times.back())) t = std::nextafter(times.back(), std::numeric_limits<double>::infinity());
        times.push_back(t);
        values.push_back(std::ldexp(level, -n));
        lo = level - 1.0;
        hi = level + 1.0;
    }

    bool stub = false;
    if (times.back() < path.horizon()) {
        times.push_back(path.horizon());
        values.push_back(path.value(steps));
        stub = true;
    }
    return Partition(std::move(times), n, std::move(values), on_grid, stub);
}

std::vector<double> partition_values(const SampledPath& path, const Partition& partition) {
    const std::size_t d = path.dim();
    if (partition.horizon() > path.horizon() * (1.0 + 1e-12))
        throw ValidationError("partition extends beyond the path horizon");
    std::vector<double> out(partition.size() * d);
    const auto times = partition.times();
    const auto stored = partition.stored_values();
    for (std::size_t j = 0; j < partition.size(); ++j) {
        const double t = std::min(times[j], path.horizon());
        for (std::size_t c = 0; c < d; ++c) {
            double v = path.at(t, c);
            if (d == 1 && !stored.empty() && std::abs(stored[j] - v) <= 1e-9 * (1.0 + std::abs(v))) v = stored[j];
            out[j * d + c] = v;
        }
    }
    return out;
}

double oscillation(const SampledPath& path, std::span<const double> times) {
    const std::size_t d = path.dim();
    const double dt = path.step();
    double osc = 0.0;
    std::vector<double> lo(d), hi(d);
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
        for (std::size_t c = 0; c < d; ++c) lo[c] = hi[c] = path.at(times[j], c);
        auto include = [&](double s) {
            for (std::size_t c = 0; c < d; ++c) {
                const double v = path.at(s, c);
                lo[c] = std::min(lo[c], v);
                hi[c] = std::max(hi[c], v);
            }
        };
        include(times[j + 1]);
        const auto first = static_cast<std::size_t>(std::floor(times[j] / dt)) + 1;
        for (std::size_t i = first; i < path.num_samples() && path.time(i) < times[j + 1]; ++i) include(path.time(i));
        for (std::size_t c = 0; c < d; ++c) osc = std::max(osc, hi[c] - lo[c]);
    }
    return osc;
}

double oscillation(const SampledPath& path, const Partition& partition) {
    return oscillation(path, partition.times());
}

Partition PartitionSequence::at(const SampledPath& path, int n) const {
    if (scheme == Scheme::uniform) return uniform_dyadic(n, path.horizon());
    return lebesgue_dyadic(path, n);
}

std::vector<int> PartitionSequence::levels() const {
    std::vector<int> out;
    for (int n = first_level; n <= last_level; ++n) out.push_back(n);
    return out;
}

std::int64_t cell_index(double x, int n) {
    return static_cast<std::int64_t>(std::ceil(std::ldexp(x, n))) - 1;
}

CrossingCounts CrossingTable::at(std::int64_t k) const noexcept {
    if (cells.empty() || k < first_cell || k > last_cell()) return {};
    return cells[static_cast<std::size_t>(k - first_cell)];
}

std::int64_t CrossingTable::max_total() const noexcept {
    std::int64_t m = 0;
    for (const auto& c : cells) m = std::max(m, c.total());
    return m;
}

CrossingTable crossing_table(const Partition& lebesgue, double t) {
    if (lebesgue.scheme() != Scheme::lebesgue) throw ValidationError("crossing counts need a Lebesgue partition");
    const int n = lebesgue.level();
    const auto times = lebesgue.times();
    const auto values = lebesgue.stored_values();
    CrossingTable table;
    table.level = n;

    // Grid-to-grid steps are j = first..last-1 where both endpoints are hits.
    const std::size_t first = lebesgue.initial_on_grid() ? 0 : 1;
    const std::size_t last_point = lebesgue.terminal_stub() ? lebesgue.size() - 2 : lebesgue.size() - 1;
    std::vector<std::pair<std::int64_t, bool>> steps;
    std::int64_t kmin = std::numeric_limits<std::int64_t>::max();
    std::int64_t kmax = std::numeric_limits<std::int64_t>::min();
    for (std::size_t j = first; j < last_point; ++j) {
        if (times[j + 1] > t) break;
        const auto a = static_cast<std::int64_t>(std::llround(std::ldexp(values[j], n)));
        const auto b = static_cast<std::int64_t>(std::llround(std::ldexp(values[j + 1], n)));
        const bool up = b > a;
        const std::int64_t k = std::min(a, b);
        steps.emplace_back(k, up);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
    }
    if (steps.empty()) return table;
    table.first_cell = kmin;
    table.cells.assign(static_cast<std::size_t>(kmax - kmin + 1), {});
    for (const auto& [k, up] : steps) {
        auto& cell = table.cells[static_cast<std::size_t>(k - kmin)];
        (up ? cell.up : cell.down) += 1;
    }
    return table;
}

CrossingCounts crossing_counts(const SampledPath& path, int n, std::int64_t k, double t) {
    return crossing_table(lebesgue_dyadic(path, n), t).at(k);
}

}  // namespace pathvar
