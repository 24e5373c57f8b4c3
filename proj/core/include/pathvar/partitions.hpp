#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pathvar/paths.hpp"

namespace pathvar {

enum class Scheme { uniform, lebesgue };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme scheme);

/// Ordered times 0 = t_0 < ... < t_N = T. Lebesgue partitions also carry the
/// exact path values at their points (grid levels k * 2^-n, and S(0), S(T)).
class Partition {
public:
    Partition(std::vector<double> times, Scheme scheme, int level);
    Partition(std::vector<double> times, int level, std::vector<double> values, bool initial_on_grid,
              bool terminal_stub);

    std::span<const double> times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }
    std::size_t num_intervals() const noexcept { return times_.size() - 1; }
    double horizon() const noexcept { return times_.back(); }
    Scheme scheme() const noexcept { return scheme_; }
    int level() const noexcept { return level_; }
    double mesh() const noexcept;

    /// Empty for uniform partitions.
    std::span<const double> stored_values() const noexcept { return values_; }
    /// Lebesgue only: whether S(0) lies on the level-n grid.
    bool initial_on_grid() const noexcept { return initial_on_grid_; }
    /// Lebesgue only: whether the last interval ends at T without reaching a new level.
    bool terminal_stub() const noexcept { return terminal_stub_; }

    /// Index j with t_j <= t < t_{j+1}; num_intervals() when t >= T.
    std::size_t interval_of(double t) const noexcept;

private:
    std::vector<double> times_;
    Scheme scheme_;
    int level_;
    std::vector<double> values_;
    bool initial_on_grid_ = true;
    bool terminal_stub_ = false;
};

/// Times k T / 2^n, k = 0..2^n.
Partition uniform_dyadic(int n, double horizon);

/// Dyadic Lebesgue partition of a scalar path: successive first hits of
/// 2^-n Z minus the current level by the linear interpolant, plus T.
/// Throws ResolutionError when some sample increment is >= 2^-n.
Partition lebesgue_dyadic(const SampledPath& path, int n);

/// Path values at the partition points, row-major (size() x dim). Stored
/// Lebesgue values replace interpolated ones when they agree within 1e-9.
std::vector<double> partition_values(const SampledPath& path, const Partition& partition);

/// max_j sup_{r,s in [t_j, t_{j+1}]} |S(s) - S(r)|, max-norm for d > 1.
double oscillation(const SampledPath& path, const Partition& partition);
double oscillation(const SampledPath& path, std::span<const double> times);

struct PartitionSequence {
    Scheme scheme = Scheme::uniform;
    int first_level = 0;
    int last_level = 0;

    Partition at(const SampledPath& path, int n) const;
    std::vector<int> levels() const;
};

struct CrossingCounts {
    std::int64_t up = 0;
    std::int64_t down = 0;
    std::int64_t total() const noexcept { return up + down; }
};

/// Completed up/down crossings of the cells I_k = (k 2^-n, (k+1) 2^-n] by time
/// t, read off consecutive grid-to-grid steps of a Lebesgue partition.
struct CrossingTable {
    int level = 0;
    std::int64_t first_cell = 0;
    std::vector<CrossingCounts> cells;

    CrossingCounts at(std::int64_t k) const noexcept;
    std::int64_t last_cell() const noexcept { return first_cell + static_cast<std::int64_t>(cells.size()) - 1; }
    std::int64_t max_total() const noexcept;
};

CrossingTable crossing_table(const Partition& lebesgue, double t);
CrossingCounts crossing_counts(const SampledPath& path, int n, std::int64_t k, double t);

/// Index of the cell I_k containing x.
std::int64_t cell_index(double x, int n);

}  // namespace pathvar
