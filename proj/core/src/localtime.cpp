#include "pathvar/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "pathvar/calculus.hpp"
#include "pathvar/ensemble.hpp"
#include "pathvar/errors.hpp"
#include "pathvar/random.hpp"

namespace pathvar {

namespace {

double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void check_even_p(int p) {
    if (p < 2 || p % 2 != 0) throw ValidationError("p must be an even integer >= 2");
}

void check_scalar(const SampledPath& path) {
    if (path.dim() != 1) throw ValidationError("local times are defined for scalar paths");
}

void check_time(double t, double horizon) {
    if (!(t >= 0.0 && t <= horizon)) throw ValidationError("time t must lie in [0, T]");
}

void check_grid(const SpatialGrid& grid) {
    if (grid.size == 0 || !(grid.spacing > 0.0) || !std::isfinite(grid.origin))
        throw ValidationError("spatial grid must have positive spacing and at least one node");
}

// First node index with x_i > lo.
std::size_t first_node_above(const SpatialGrid& grid, double lo) {
    const double guess = std::floor((lo - grid.origin) / grid.spacing - 0.5) + 1.0;
    std::size_t i = guess <= 0.0 ? 0 : std::min(static_cast<std::size_t>(guess), grid.size);
    while (i < grid.size && grid.x(i) <= lo) ++i;
    while (i > 0 && grid.x(i - 1) > lo) --i;
    return i;
}

void warn_if_uncovered(LocalTimeGrid& lt, double lo, double hi) {
    if (lo < lt.grid.lower() || hi > lt.grid.upper())
        lt.warnings.push_back("spatial grid does not cover the path range; support is truncated");
}

// Sojourn time of the linear interpolant in each cell (k 2^-n, (k+1) 2^-n] up to t.
struct Sojourn {
    std::int64_t first_cell = 0;
    std::vector<double> time;

    double at(std::int64_t k) const {
        if (k < first_cell || k >= first_cell + static_cast<std::int64_t>(time.size())) return 0.0;
        return time[static_cast<std::size_t>(k - first_cell)];
    }
};

Sojourn cell_sojourn(const SampledPath& path, double t, int n) {
    const double h = std::ldexp(1.0, -n);
    Sojourn s;
    s.first_cell = cell_index(path.min_value(), n);
    const std::int64_t last = cell_index(path.max_value(), n);
    s.time.assign(static_cast<std::size_t>(last - s.first_cell + 1), 0.0);
    for (std::size_t i = 0; i + 1 < path.num_samples(); ++i) {
        const double t0 = path.time(i);
        if (t0 >= t) break;
        const double t1 = std::min(path.time(i + 1), t);
        const double dur = t1 - t0;
        const double a = path.value(i);
        const double b = t1 < path.time(i + 1) ? path.at(t1) : path.value(i + 1);
        if (a == b) {
            s.time[static_cast<std::size_t>(cell_index(a, n) - s.first_cell)] += dur;
            continue;
        }
        const double lo = std::min(a, b), hi = std::max(a, b);
        const std::int64_t k0 = cell_index(lo, n), k1 = cell_index(hi, n);
        for (std::int64_t k = k0; k <= k1; ++k) {
            const double overlap =
                std::min(hi, static_cast<double>(k + 1) * h) - std::max(lo, static_cast<double>(k) * h);
            if (overlap > 0.0) s.time[static_cast<std::size_t>(k - s.first_cell)] += dur * overlap / (hi - lo);
        }
    }
    return s;
}

int p_from_hurst(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw ValidationError("Hurst index must lie in (0, 1)");
    const double inv = 1.0 / hurst;
    const long p = std::lround(inv);
    if (std::abs(inv - static_cast<double>(p)) > 1e-9 || p % 2 != 0)
        throw ValidationError("1/H must be an even integer");
    return static_cast<int>(p);
}

struct PathStats {
    std::vector<double> sup_gaps;
    std::vector<double> mu_ratios;
    bool degenerate = false;
};

PathStats path_stats(const SampledPath& path, int p, double moment, int first_level, int last_level) {
    check_scalar(path);
    PathStats st;
    st.degenerate = path.min_value() == path.max_value();
    const double T = path.horizon();
    for (int n = first_level; n <= last_level; ++n) {
        const double h = std::ldexp(1.0, -n);
        const Partition part = lebesgue_dyadic(path, n);
        const CrossingTable table = crossing_table(part, T);
        const Sojourn soj = cell_sojourn(path, T, n);
        const double scale = 2.0 * ipow(h, p - 1) / moment;
        const double density = std::ldexp(1.0, n);
        double sup = 0.0;
        std::int64_t k0 = soj.first_cell, k1 = soj.first_cell + static_cast<std::int64_t>(soj.time.size()) - 1;
        if (!table.cells.empty()) {
            k0 = std::min(k0, table.first_cell);
            k1 = std::max(k1, table.last_cell());
        }
        for (std::int64_t k = k0; k <= k1; ++k)
            sup = std::max(sup, std::abs(scale * static_cast<double>(table.at(k).up) - density * soj.at(k)));
        st.sup_gaps.push_back(sup);
        st.mu_ratios.push_back(lebesgue_measure_mass(part, p, T) / T);
    }
    return st;
}

ConjectureReport summarize(std::vector<PathStats> stats, double hurst, int p, int first_level, int last_level) {
    ConjectureReport report;
    report.hurst = hurst;
    report.p = p;
    report.moment = gaussian_abs_moment(p);
    report.ensemble = stats.size();
    for (const auto& s : stats) report.degenerate_paths += s.degenerate ? 1 : 0;
    for (int n = first_level; n <= last_level; ++n) {
        const auto idx = static_cast<std::size_t>(n - first_level);
        ConjectureLevel level;
        level.n = n;
        for (const auto& s : stats) {
            level.sup_gaps.push_back(s.sup_gaps[idx]);
            level.mu_ratios.push_back(s.mu_ratios[idx]);
        }
        level.median_sup_gap = median(level.sup_gaps);
        level.median_mu_ratio = median(level.mu_ratios);
        level.mu_gap = std::abs(level.median_mu_ratio - report.moment);
        report.levels.push_back(std::move(level));
    }
    report.sup_gap_decreasing = report.levels.size() >= 2;
    for (std::size_t i = 1; i < report.levels.size(); ++i)
        if (!(report.levels[i].median_sup_gap < report.levels[i - 1].median_sup_gap)) report.sup_gap_decreasing = false;
    if (report.degenerate_paths > 0)
        report.warnings.push_back(std::to_string(report.degenerate_paths) +
                                  " constant path(s): occupation sits in one cell and no level is crossed");
    return report;
}

void check_levels(int first_level, int last_level) {
    if (first_level < 0 || last_level < first_level || last_level > 40)
        throw ValidationError("levels must satisfy 0 <= first <= last <= 40");
}

}  // namespace

std::vector<double> SpatialGrid::nodes() const {
    std::vector<double> out(size);
    for (std::size_t i = 0; i < size; ++i) out[i] = x(i);
    return out;
}

SpatialGrid SpatialGrid::dyadic(double lo, double hi, int n) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("invalid spatial range");
    if (n < 0 || n > 40) throw ValidationError("level must lie in [0, 40]");
    const double h = std::ldexp(1.0, -n);
    const double k_lo = std::floor(lo / h) - 1.0;
    const double k_hi = std::ceil(hi / h) + 1.0;
    SpatialGrid g;
    g.origin = k_lo * h;
    g.spacing = h / 8.0;
    g.size = static_cast<std::size_t>(k_hi - k_lo) * 8;
    return g;
}

SpatialGrid SpatialGrid::for_path(const SampledPath& path, int n) {
    check_scalar(path);
    return dyadic(path.min_value(), path.max_value(), n);
}

std::string to_string(LocalTimeFlavor flavor) {
    switch (flavor) {
        case LocalTimeFlavor::raw: return "raw";
        case LocalTimeFlavor::upcrossing_avg: return "upcrossing_avg";
        case LocalTimeFlavor::occupation: return "occupation";
    }
    return "raw";
}

double LocalTimeGrid::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.spacing;
}

std::vector<Leg> partition_legs(const SampledPath& path, const Partition& partition, double t) {
    check_scalar(path);
    check_time(t, path.horizon());
    const auto times = partition.times();
    const auto values = partition_values(path, partition);
    std::vector<Leg> legs;
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
        if (times[j] >= t) break;
        const double b = times[j + 1] <= t ? values[j + 1] : path.at(t);
        if (b != values[j]) legs.push_back({values[j], b});
    }
    return legs;
}

LocalTimeGrid local_time_raw(const SampledPath& path, const Partition& partition, int p, double t,
                             const SpatialGrid& grid) {
    check_even_p(p);
    check_grid(grid);
    LocalTimeGrid lt;
    lt.level = partition.level();
    lt.t = t;
    lt.p = p;
    lt.flavor = LocalTimeFlavor::raw;
    lt.grid = grid;
    lt.values.assign(grid.size, 0.0);
    const auto legs = partition_legs(path, partition, t);
    double lo_all = std::numeric_limits<double>::infinity(), hi_all = -lo_all;
    for (const auto& leg : legs) {
        const double lo = std::min(leg.a, leg.b), hi = std::max(leg.a, leg.b);
        lo_all = std::min(lo_all, lo);
        hi_all = std::max(hi_all, hi);
        for (std::size_t i = first_node_above(grid, lo); i < grid.size && grid.x(i) <= hi; ++i)
            lt.values[i] += ipow(std::abs(leg.b - grid.x(i)), p - 1);
    }
    if (!legs.empty()) warn_if_uncovered(lt, lo_all, hi_all);
    return lt;
}

LocalTimeGrid local_time_upcrossing(const SampledPath& path, int n, int p, double t, const SpatialGrid& grid) {
    check_even_p(p);
    check_grid(grid);
    check_time(t, path.horizon());
    const CrossingTable table = crossing_table(lebesgue_dyadic(path, n), t);
    LocalTimeGrid lt;
    lt.level = n;
    lt.t = t;
    lt.p = p;
    lt.flavor = LocalTimeFlavor::upcrossing_avg;
    lt.grid = grid;
    lt.values.resize(grid.size);
    const double weight = ipow(std::ldexp(1.0, -n), p - 1);
    for (std::size_t i = 0; i < grid.size; ++i)
        lt.values[i] = weight * static_cast<double>(table.at(cell_index(grid.x(i), n)).up);
    warn_if_uncovered(lt, path.min_value(), path.max_value());
    return lt;
}

std::vector<double> upcrossing_expression(const SampledPath& path, int n, int p, double t, const SpatialGrid& grid) {
    check_even_p(p);
    check_grid(grid);
    check_time(t, path.horizon());
    const CrossingTable table = crossing_table(lebesgue_dyadic(path, n), t);
    const double h = std::ldexp(1.0, -n);
    std::vector<double> out(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i) {
        const double x = grid.x(i);
        const std::int64_t k = cell_index(x, n);
        const double left = static_cast<double>(k) * h;
        const double right = static_cast<double>(k + 1) * h;
        out[i] = (ipow(std::abs(right - x), p - 1) + ipow(std::abs(x - left), p - 1)) *
                 static_cast<double>(table.at(k).up);
    }
    return out;
}

UpcrossingConsistency upcrossing_consistency(const SampledPath& path, int n, int p, double t,
                                             const SpatialGrid& grid) {
    const Partition part = lebesgue_dyadic(path, n);
    const auto raw = local_time_raw(path, part, p, t, grid);
    const auto expr = upcrossing_expression(path, n, p, t, grid);
    UpcrossingConsistency c;
    c.max_crossings = crossing_table(part, t).max_total();
    c.bound = 2.0 * ipow(std::ldexp(1.0, -n), p - 1) * (1.0 + static_cast<double>(c.max_crossings));
    for (std::size_t i = 0; i < grid.size; ++i) c.max_gap = std::max(c.max_gap, std::abs(raw.values[i] - expr[i]));
    c.holds = c.max_gap <= c.bound;
    return c;
}

std::vector<double> averaging_operator(const std::vector<double>& values, const SpatialGrid& grid, int n) {
    check_grid(grid);
    if (values.size() != grid.size) throw ValidationError("value count does not match the spatial grid");
    const double h = std::ldexp(1.0, -n);
    const double per_cell = h / grid.spacing;
    const double m_round = std::round(per_cell);
    const double shift = grid.origin / h;
    if (std::abs(per_cell - m_round) > 1e-9 * per_cell || m_round < 4.0 ||
        std::abs(shift - std::round(shift)) > 1e-9 * std::max(1.0, std::abs(shift)))
        throw ValidationError("spatial grid does not resolve the level-" + std::to_string(n) +
                              " dyadic cells (need >= 4 aligned nodes per cell)");
    const auto m = static_cast<std::size_t>(m_round);
    if (grid.size % m != 0) throw ValidationError("spatial grid must consist of whole dyadic cells");
    std::vector<double> out(values.size());
    for (std::size_t start = 0; start < values.size(); start += m) {
        const auto first = values.begin() + static_cast<std::ptrdiff_t>(start);
        const auto last = first + static_cast<std::ptrdiff_t>(m);
        double mean = *first;
        if (!std::all_of(first, last, [&](double v) { return v == *first; })) {
            double s = 0.0;
            for (auto it = first; it != last; ++it) s += *it;
            mean = s / static_cast<double>(m);
        }
        std::fill(out.begin() + static_cast<std::ptrdiff_t>(start), out.begin() + static_cast<std::ptrdiff_t>(start + m),
                  mean);
    }
    return out;
}

double weak_pairing(const std::vector<double>& values, const SpatialGrid& grid, const std::function<double(double)>& g) {
    if (values.size() != grid.size) throw ValidationError("value count does not match the spatial grid");
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size; ++i)
        if (values[i] != 0.0) s += values[i] * g(grid.x(i));
    return s * grid.spacing;
}

double weak_pairing(const LocalTimeGrid& lt, const std::function<double(double)>& g) {
    return weak_pairing(lt.values, lt.grid, g);
}

std::vector<TestFunction> test_panel(double center, double scale) {
    if (!(scale > 0.0)) throw ValidationError("test panel scale must be positive");
    auto bump = [](double c, double w) {
        return [c, w](double x) { return std::exp(-0.5 * (x - c) * (x - c) / (w * w)); };
    };
    std::vector<TestFunction> panel;
    panel.push_back({"bump_center", bump(center, scale)});
    panel.push_back({"bump_left", bump(center - 0.5 * scale, 0.5 * scale)});
    panel.push_back({"bump_right", bump(center + 0.5 * scale, 0.5 * scale)});
    panel.push_back({"indicator", [center, scale](double x) { return std::abs(x - center) <= scale ? 1.0 : 0.0; }});
    panel.push_back({"ramp", [center, scale](double x) {
                         return std::clamp((x - center + scale) / (2.0 * scale), 0.0, 1.0);
                     }});
    return panel;
}

double local_time_integral(const std::vector<Leg>& legs, int p, const StieltjesMeasure& measure) {
    using boost::math::quadrature::gauss;
    double total = 0.0;
    for (const auto& leg : legs) {
        const double lo = std::min(leg.a, leg.b), hi = std::max(leg.a, leg.b);
        const double b = leg.b;
        const double sign = (p % 2 == 1 && leg.b < leg.a) ? -1.0 : 1.0;
        double s = 0.0;
        for (const auto& pm : measure.point_masses)
            if (lo < pm.at && pm.at <= hi) s += pm.weight * ipow(std::abs(b - pm.at), p - 1);
        for (const auto& ind : measure.indicators) {
            const double u = std::max(lo, ind.from), v = std::min(hi, ind.to);
            if (!(u < v)) continue;
            // Antiderivative of |b - x|^{p-1} on [u, v] with b at one end of the leg.
            s += ind.weight * (b == hi ? (ipow(hi - u, p) - ipow(hi - v, p)) : (ipow(v - lo, p) - ipow(u - lo, p))) /
                 static_cast<double>(p);
        }
        if (measure.density) {
            std::vector<double> cuts{lo};
            for (double c : measure.breakpoints)
                if (lo < c && c < hi) cuts.push_back(c);
            cuts.push_back(hi);
            std::sort(cuts.begin(), cuts.end());
            auto integrand = [&](double x) { return measure.density(x) * ipow(std::abs(b - x), p - 1); };
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
                s += gauss<double, 20>::integrate(integrand, cuts[i], cuts[i + 1]);
        }
        total += sign * s;
    }
    return total;
}

TanakaResult tanaka_residual(const SmoothFunction& f, const SampledPath& path, const Partition& partition, int p,
                             double t) {
    check_even_p(p);
    check_scalar(path);
    if (f.dim() != 1) throw ValidationError("Tanaka residuals need a scalar function");
    check_time(t, path.horizon());
    const StieltjesMeasure measure = f.derivative_measure(p - 1);
    TanakaResult r;
    r.lhs = f.value1(path.at(t)) - f.value1(path.value(0));
    const double times[] = {t};
    r.compensated = compensated_sums(f, path, partition, p - 1, times)[0];
    r.local_time_term = local_time_integral(partition_legs(path, partition, t), p, measure) / factorial(p - 1);
    r.residual = r.lhs - r.compensated - r.local_time_term;
    return r;
}

LocalTimeGrid occupation_density(const SampledPath& path, double t, int n, const SpatialGrid& grid) {
    check_scalar(path);
    check_grid(grid);
    check_time(t, path.horizon());
    const Sojourn soj = cell_sojourn(path, t, n);
    const double density = std::ldexp(1.0, n);
    LocalTimeGrid lt;
    lt.level = n;
    lt.t = t;
    lt.p = 2;
    lt.flavor = LocalTimeFlavor::occupation;
    lt.grid = grid;
    lt.values.resize(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i) lt.values[i] = density * soj.at(cell_index(grid.x(i), n));
    const auto occupied = std::count_if(soj.time.begin(), soj.time.end(), [](double v) { return v > 0.0; });
    lt.degenerate = occupied == 1;
    if (lt.degenerate) lt.warnings.push_back("occupation measure is concentrated in a single cell");
    warn_if_uncovered(lt, path.min_value(), path.max_value());
    return lt;
}

LocalTimeGrid occupation_density(const SampledPath& path, double t, int n) {
    return occupation_density(path, t, n, SpatialGrid::for_path(path, n));
}

double lebesgue_measure_mass(const Partition& lebesgue, int p, double t) {
    if (lebesgue.scheme() != Scheme::lebesgue) throw ValidationError("mu^n needs a Lebesgue partition");
    const auto times = lebesgue.times();
    const std::size_t hits_end = lebesgue.terminal_stub() ? times.size() - 1 : times.size();
    std::size_t hits = 0;
    for (std::size_t j = 1; j < hits_end && times[j] <= t; ++j) ++hits;
    return static_cast<double>(hits) * ipow(std::ldexp(1.0, -lebesgue.level()), p);
}

double gaussian_abs_moment(int p) {
    check_even_p(p);
    double m = 1.0;
    for (int k = p - 1; k > 1; k -= 2) m *= k;
    return m;
}

double resolvable_horizon(double hurst, std::size_t num_steps, int finest_level) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw ValidationError("Hurst index must lie in (0, 1)");
    return static_cast<double>(num_steps) * std::pow(std::ldexp(1.0, -finest_level) / 16.0, 1.0 / hurst);
}

ConjectureReport conjecture_on_paths(const std::vector<SampledPath>& paths, double hurst, int first_level,
                                     int last_level, std::size_t threads) {
    const int p = p_from_hurst(hurst);
    check_levels(first_level, last_level);
    if (paths.empty()) throw ValidationError("conjecture experiment needs at least one path");
    const double moment = gaussian_abs_moment(p);
    auto stats = run_ensemble<PathStats>(paths.size(), threads, [&](std::size_t i) {
        return path_stats(paths[i], p, moment, first_level, last_level);
    });
    ConjectureReport report = summarize(std::move(stats), hurst, p, first_level, last_level);
    report.horizon = paths.front().horizon();
    report.num_steps = paths.front().num_steps();
    return report;
}

ConjectureReport conjecture_experiment(const ConjectureOptions& options) {
    const int p = p_from_hurst(options.hurst);
    check_levels(options.first_level, options.last_level);
    if (options.ensemble == 0) throw ValidationError("ensemble size must be positive");
    const double moment = gaussian_abs_moment(p);
    const double horizon = resolvable_horizon(options.hurst, options.num_steps, options.last_level);
    auto stats = run_ensemble<PathStats>(options.ensemble, resolve_threads(options.threads), [&](std::size_t i) {
        FbmOptions fbm;
        fbm.hurst = options.hurst;
        fbm.horizon = horizon;
        fbm.num_steps = options.num_steps;
        fbm.seed = derive_seed(options.seed, i);
        return path_stats(generate_fbm(fbm), p, moment, options.first_level, options.last_level);
    });
    ConjectureReport report = summarize(std::move(stats), options.hurst, p, options.first_level, options.last_level);
    report.horizon = horizon;
    report.num_steps = options.num_steps;
    report.seed = options.seed;
    return report;
}

}  // namespace pathvar
