#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pathvar/functions.hpp"
#include "pathvar/partitions.hpp"
#include "pathvar/paths.hpp"

namespace pathvar {

/// Uniform cell-centred spatial grid: nodes x_i = origin + (i + 1/2) spacing.
/// Integrals use the midpoint rule, which is exact for functions that are
/// constant on the grid cells.
struct SpatialGrid {
    double origin = 0.0;
    double spacing = 1.0;
    std::size_t size = 0;

    double x(std::size_t i) const noexcept { return origin + (static_cast<double>(i) + 0.5) * spacing; }
    double lower() const noexcept { return origin; }
    double upper() const noexcept { return origin + static_cast<double>(size) * spacing; }
    std::vector<double> nodes() const;

    /// 8 nodes per dyadic cell of level n, covering [lo - 2^-n, hi + 2^-n]
    /// with cell-aligned ends.
    static SpatialGrid dyadic(double lo, double hi, int n);
    static SpatialGrid for_path(const SampledPath& path, int n);
};

enum class LocalTimeFlavor { raw, upcrossing_avg, occupation };
std::string to_string(LocalTimeFlavor flavor);

struct LocalTimeGrid {
    int level = 0;
    double t = 0.0;
    int p = 2;
    LocalTimeFlavor flavor = LocalTimeFlavor::raw;
    SpatialGrid grid;
    std::vector<double> values;
    /// Occupation flavor: all mass sits in a single cell.
    bool degenerate = false;
    std::vector<std::string> warnings;

    double integral() const;
};

/// One partition step (S(t_j ^ t), S(t_{j+1} ^ t)) with distinct endpoints.
struct Leg {
    double a;
    double b;
};

std::vector<Leg> partition_legs(const SampledPath& path, const Partition& partition, double t);

/// sum_j 1_{<<a_j, b_j]]}(x) |b_j - x|^{p-1} over the legs of the partition
/// stopped at t, where <<a, b]] = (min, max].
LocalTimeGrid local_time_raw(const SampledPath& path, const Partition& partition, int p, double t,
                             const SpatialGrid& grid);

/// tilde L(x) = 2^{-n(p-1)} U_t(I^n_k) for x in I^n_k, along the level-n
/// Lebesgue partition.
LocalTimeGrid local_time_upcrossing(const SampledPath& path, int n, int p, double t, const SpatialGrid& grid);

/// (|(k+1) 2^-n - x|^{p-1} + |x - k 2^-n|^{p-1}) U_t(I^n_k) on the grid.
std::vector<double> upcrossing_expression(const SampledPath& path, int n, int p, double t, const SpatialGrid& grid);

struct UpcrossingConsistency {
    double max_gap = 0.0;
    /// 2 * 2^{-n(p-1)} * (1 + max_k N_t(I^n_k)).
    double bound = 0.0;
    std::int64_t max_crossings = 0;
    bool holds = false;
};

/// Raw local time against the upcrossing expression at every grid node.
UpcrossingConsistency upcrossing_consistency(const SampledPath& path, int n, int p, double t,
                                             const SpatialGrid& grid);

/// Replaces the values in every level-n dyadic cell by their mean. The grid
/// must be aligned to 2^-n with an integer number (>= 4) of nodes per cell.
std::vector<double> averaging_operator(const std::vector<double>& values, const SpatialGrid& grid, int n);

struct TestFunction {
    std::string name;
    std::function<double(double)> g;
};

/// Midpoint quadrature of L * g over the grid.
double weak_pairing(const LocalTimeGrid& lt, const std::function<double(double)>& g);

/// Midpoint quadrature of values * g over the grid.
double weak_pairing(const std::vector<double>& values, const SpatialGrid& grid, const std::function<double(double)>& g);

/// Five test functions around `center` at length scale `scale`: three
/// gaussian bumps, an indicator and a linear ramp.
std::vector<TestFunction> test_panel(double center, double scale);

struct TanakaResult {
    double lhs = 0.0;
    double compensated = 0.0;
    /// (1/(p-1)!) int L^{pi,p-1}_t df^{(p-1)}.
    double local_time_term = 0.0;
    double residual = 0.0;
};

/// f(S_t) - f(S_0) - CRS(t) - (1/(p-1)!) int L_t df^{(p-1)} along one partition.
/// Point masses and indicator densities are integrated in closed form;
/// smooth densities by 20-point Gauss-Legendre on each leg.
TanakaResult tanaka_residual(const SmoothFunction& f, const SampledPath& path, const Partition& partition, int p,
                             double t);

/// Integral of L^{pi,p-1}_t against the measure, per leg.
double local_time_integral(const std::vector<Leg>& legs, int p, const StieltjesMeasure& measure);

/// 2^n times the time the linear interpolant spends in each I^n_k up to t.
LocalTimeGrid occupation_density(const SampledPath& path, double t, int n, const SpatialGrid& grid);
LocalTimeGrid occupation_density(const SampledPath& path, double t, int n);

/// mu^n([0, t]) = 2^{-np} times the number of level hits tau_j in (0, t]; the
/// appended terminal point is not a hit.
double lebesgue_measure_mass(const Partition& lebesgue, int p, double t);

/// E|Z|^p for a standard normal Z and even p.
double gaussian_abs_moment(int p);

struct ConjectureLevel {
    int n = 0;
    /// Per path: sup_k |2 tilde L(I_k) / E|Z|^p - occupation(I_k)| at t = T.
    std::vector<double> sup_gaps;
    /// Per path: mu^n([0, T]) / T.
    std::vector<double> mu_ratios;
    double median_sup_gap = 0.0;
    double median_mu_ratio = 0.0;
    /// |median_mu_ratio - E|Z|^p|.
    double mu_gap = 0.0;
};

struct ConjectureReport {
    double hurst = 0.5;
    int p = 2;
    double moment = 1.0;
    double horizon = 1.0;
    std::size_t num_steps = 0;
    std::size_t ensemble = 0;
    std::uint64_t seed = 0;
    std::vector<ConjectureLevel> levels;
    /// Whether the median sup-gap decreases strictly from level to level.
    bool sup_gap_decreasing = false;
    std::size_t degenerate_paths = 0;
    std::vector<std::string> warnings;
};

struct ConjectureOptions {
    double hurst = 0.5;
    std::size_t ensemble = 64;
    std::size_t num_steps = std::size_t{1} << 16;
    std::uint64_t seed = 0;
    int first_level = 6;
    int last_level = 10;
    std::size_t threads = 0;
};

/// p = 1/H must be an even integer. The horizon is chosen so that the sample
/// increments have standard deviation 2^{-last_level} / 16.
ConjectureReport conjecture_experiment(const ConjectureOptions& options);

/// Same statistics on given scalar paths.
ConjectureReport conjecture_on_paths(const std::vector<SampledPath>& paths, double hurst, int first_level,
                                     int last_level, std::size_t threads = 1);

/// Horizon T = N (2^{-n} / 16)^{1/H} for N steps.
double resolvable_horizon(double hurst, std::size_t num_steps, int finest_level);

}  // namespace pathvar
