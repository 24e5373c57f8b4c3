#include "pathvar/variation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pathvar/errors.hpp"

namespace pathvar {

namespace {

double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

void check_levels(const PartitionSequence& sequence) {
    if (sequence.first_level < 0 || sequence.last_level < sequence.first_level)
        throw ValidationError("level range must satisfy 0 <= lo <= hi");
}

}  // namespace

std::vector<double> checked_eval_times(std::span<const double> eval_times, double horizon) {
    if (eval_times.empty()) return {horizon};
    std::vector<double> out(eval_times.begin(), eval_times.end());
    for (double& t : out) {
        if (!(t >= 0.0) || t > horizon * (1.0 + 1e-12)) throw ValidationError("eval time outside [0, T]");
        t = std::min(t, horizon);
    }
    return out;
}

const VariationLevel& VariationProfile::level(int n) const {
    for (const auto& l : levels)
        if (l.n == n) return l;
    throw ValidationError("level not present in profile");
}

const TensorVariationLevel& TensorVariationProfile::level(int n) const {
    for (const auto& l : levels)
        if (l.n == n) return l;
    throw ValidationError("level not present in profile");
}

std::vector<double> variation_terms(std::span<const double> values, int p) {
    std::vector<double> terms(values.size() - 1);
    for (std::size_t j = 0; j + 1 < values.size(); ++j) terms[j] = ipow(std::abs(values[j + 1] - values[j]), p);
    return terms;
}

std::vector<double> cumulative_at(std::span<const double> times, std::span<const double> terms,
                                  std::span<const double> eval_times) {
    std::vector<double> prefix(terms.size() + 1, 0.0);
    for (std::size_t j = 0; j < terms.size(); ++j) prefix[j + 1] = prefix[j] + terms[j];
    std::vector<double> out(eval_times.size());
    for (std::size_t i = 0; i < eval_times.size(); ++i) {
        // Number of intervals [t_j, t_{j+1}] with t_j <= t.
        const auto count = static_cast<std::size_t>(
            std::upper_bound(times.begin(), times.end() - 1, eval_times[i]) - times.begin());
        out[i] = prefix[std::min(count, terms.size())];
    }
    return out;
}

VariationProfile pth_variation_scalar(const SampledPath& path, const PartitionSequence& sequence, int p,
                                      std::span<const double> eval_times) {
    if (p < 2) throw ValidationError("p must be at least 2");
    if (p % 2 != 0) throw ValidationError("odd p: use signed sums");
    if (path.dim() != 1) throw ValidationError("scalar variation needs a scalar path; use the tensor form");
    check_levels(sequence);
    VariationProfile profile;
    profile.p = p;
    profile.scheme = sequence.scheme;
    profile.eval_times = checked_eval_times(eval_times, path.horizon());
    for (int n : sequence.levels()) {
        const Partition part = sequence.at(path, n);
        const auto values = partition_values(path, part);
        const auto terms = variation_terms(values, p);
        VariationLevel level;
        level.n = n;
        level.values = cumulative_at(part.times(), terms, profile.eval_times);
        level.oscillation = oscillation(path, part);
        level.intervals = part.num_intervals();
        level.max_term = *std::max_element(terms.begin(), terms.end());
        profile.levels.push_back(std::move(level));
    }
    return profile;
}

TensorVariationProfile pth_variation_tensor(const SampledPath& path, const PartitionSequence& sequence, int p,
                                            std::span<const double> eval_times) {
    if (p < 2 || p % 2 != 0) throw ValidationError("tensor variation needs an even p >= 2");
    if (sequence.scheme != Scheme::uniform)
        throw ValidationError("tensor variation is defined along uniform partitions only");
    check_levels(sequence);
    const std::size_t d = path.dim();
    TensorVariationProfile profile;
    profile.p = p;
    profile.dim = d;
    profile.scheme = sequence.scheme;
    profile.eval_times = checked_eval_times(eval_times, path.horizon());

    std::vector<double> incr(d);
    for (int n : sequence.levels()) {
        const Partition part = sequence.at(path, n);
        const auto times = part.times();
        const auto values = partition_values(path, part);
        // Eval times sorted with their original positions, swept once.
        std::vector<std::size_t> order(profile.eval_times.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return profile.eval_times[a] < profile.eval_times[b]; });

        TensorVariationLevel level;
        level.n = n;
        level.values.assign(order.size(), SymTensor(d, static_cast<std::size_t>(p)));
        level.oscillation = oscillation(path, part);
        level.intervals = part.num_intervals();
        SymTensor acc(d, static_cast<std::size_t>(p));
        std::size_t j = 0;
        for (std::size_t idx : order) {
            const double t = profile.eval_times[idx];
            while (j < part.num_intervals() && times[j] <= t) {
                for (std::size_t c = 0; c < d; ++c) incr[c] = values[(j + 1) * d + c] - values[j * d + c];
                add_sym_power(acc, incr, 1.0);
                ++j;
            }
            level.values[idx] = acc;
        }
        profile.levels.push_back(std::move(level));
    }
    return profile;
}

VariationProfile signed_pth_sums(const SampledPath& path, const PartitionSequence& sequence, int p,
                                 std::span<const double> eval_times) {
    if (p < 3 || p % 2 == 0) throw ValidationError("signed sums need an odd p >= 3");
    if (sequence.scheme != Scheme::lebesgue) throw ValidationError("signed sums are taken along Lebesgue partitions");
    check_levels(sequence);
    VariationProfile profile;
    profile.p = p;
    profile.scheme = sequence.scheme;
    profile.signed_sums = true;
    profile.eval_times = checked_eval_times(eval_times, path.horizon());

    for (int n : sequence.levels()) {
        const Partition part = lebesgue_dyadic(path, n);
        const auto times = part.times();
        const auto values = partition_values(path, part);
        const double hp = std::ldexp(1.0, -n * p);
        std::vector<double> terms(part.num_intervals());
        double max_term = 0.0;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            terms[j] = ipow(values[j + 1] - values[j], p);
            max_term = std::max(max_term, std::abs(terms[j]));
        }
        VariationLevel level;
        level.n = n;
        level.values = cumulative_at(times, terms, profile.eval_times);
        level.oscillation = oscillation(path, part);
        level.intervals = part.num_intervals();
        level.max_term = max_term;

        const std::size_t first_grid = part.initial_on_grid() ? 0 : 1;
        const std::size_t last_grid_step = part.terminal_stub() ? part.num_intervals() - 1 : part.num_intervals();
        for (double t : profile.eval_times) {
            std::map<long long, long long> net;
            double boundary = 0.0;
            for (std::size_t j = 0; j < part.num_intervals() && times[j] <= t; ++j) {
                if (j < first_grid || j >= last_grid_step) {
                    boundary += std::abs(terms[j]);
                    continue;
                }
                const auto a = std::llround(std::ldexp(values[j], n));
                const auto b = std::llround(std::ldexp(values[j + 1], n));
                net[std::min(a, b)] += b > a ? 1 : -1;
            }
            double imbalance = 0.0;
            for (const auto& [k, v] : net) imbalance += static_cast<double>(std::llabs(v));
            level.bounds.push_back(hp * imbalance + boundary);
        }
        profile.levels.push_back(std::move(level));
    }
    return profile;
}

ConvergenceReport convergence_diagnostic(const VariationProfile& profile) {
    if (profile.levels.size() < 2) throw ValidationError("convergence diagnostic needs at least two levels");
    ConvergenceReport report;
    for (std::size_t i = 0; i + 1 < profile.levels.size(); ++i) {
        const auto& a = profile.levels[i];
        const auto& b = profile.levels[i + 1];
        double sup = 0.0;
        for (std::size_t e = 0; e < a.values.size(); ++e) sup = std::max(sup, std::abs(a.values[e] - b.values[e]));
        report.pairs.emplace_back(a.n, b.n);
        report.cauchy.push_back(sup);
    }
    const auto& last = profile.levels.back();
    report.limit = last.values;
    std::vector<std::size_t> order(profile.eval_times.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return profile.eval_times[a] < profile.eval_times[b]; });
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        report.max_jump = std::max(report.max_jump, std::abs(last.values[order[i + 1]] - last.values[order[i]]));
    report.first_max_term = profile.levels.front().max_term;
    report.last_max_term = last.max_term;
    report.atomless = report.last_max_term == 0.0 || report.last_max_term < report.first_max_term;
    return report;
}

ConvergenceReport convergence_diagnostic(const TensorVariationProfile& profile) {
    if (profile.levels.size() < 2) throw ValidationError("convergence diagnostic needs at least two levels");
    ConvergenceReport report;
    for (std::size_t i = 0; i + 1 < profile.levels.size(); ++i) {
        const auto& a = profile.levels[i];
        const auto& b = profile.levels[i + 1];
        double sup = 0.0;
        for (std::size_t e = 0; e < a.values.size(); ++e) sup = std::max(sup, (a.values[e] - b.values[e]).max_abs());
        report.pairs.emplace_back(a.n, b.n);
        report.cauchy.push_back(sup);
    }
    const auto& last = profile.levels.back();
    for (const auto& v : last.values) report.limit.push_back(v.max_abs());
    std::vector<std::size_t> order(profile.eval_times.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return profile.eval_times[a] < profile.eval_times[b]; });
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        report.max_jump = std::max(report.max_jump, (last.values[order[i + 1]] - last.values[order[i]]).max_abs());
    report.atomless = true;
    return report;
}

}  // namespace pathvar
