#include "pathvar/calculus.hpp"

#include <cmath>

#include "pathvar/errors.hpp"
#include "pathvar/variation.hpp"

namespace pathvar {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void check_p(int p) {
    if (p < 2 || p % 2 != 0) throw ValidationError("p must be an even integer >= 2");
}

// Terms of one interval: sum_{k=1}^{order} f^(k)(x)/k! dx^k and, optionally,
// f^(order+1)(x)/(order+1)! dx^(order+1).
struct TermEvaluator {
    const SmoothFunction& f;
    std::size_t d;
    int order;
    bool with_top;
    std::vector<double> inv_fact;

    TermEvaluator(const SmoothFunction& fn, std::size_t dim, int ord, bool top)
        : f(fn), d(dim), order(ord), with_top(top) {
        for (int k = 0; k <= order + 1; ++k) inv_fact.push_back(1.0 / factorial(k));
    }

    std::pair<double, double> operator()(std::span<const double> x, std::span<const double> dx) const {
        double sum = 0.0;
        double top = 0.0;
        if (d == 1) {
            double power = 1.0;
            for (int k = 1; k <= order; ++k) {
                power *= dx[0];
                sum += f.derivative1(k, x[0]) * inv_fact[static_cast<std::size_t>(k)] * power;
            }
            if (with_top) top = f.derivative1(order + 1, x[0]) * inv_fact.back() * power * dx[0];
        } else {
            for (int k = 1; k <= order; ++k)
                sum += evaluate_form(f.derivative(k, x), dx) * inv_fact[static_cast<std::size_t>(k)];
            if (with_top) top = evaluate_form(f.derivative(order + 1, x), dx) * inv_fact.back();
        }
        return {sum, top};
    }
};

}  // namespace

const IntegralLevel& IntegralProfile::level(int n) const {
    for (const auto& l : levels)
        if (l.n == n) return l;
    throw ValidationError("level not present in profile");
}

void check_function_for_path(const SmoothFunction& f, const SampledPath& path, int order) {
    if (f.dim() != path.dim())
        throw ValidationError("function dimension " + std::to_string(f.dim()) + " does not match path dimension " +
                              std::to_string(path.dim()));
    if (f.max_order() < order)
        throw ValidationError("function " + f.id() + " lacks derivatives of order " + std::to_string(order));
}

std::vector<double> compensated_sums(const SmoothFunction& f, const SampledPath& path, const Partition& partition,
                                     int order, std::span<const double> eval_times, std::vector<double>* top) {
    check_function_for_path(f, path, top ? order + 1 : order);
    const std::size_t d = path.dim();
    const auto times = partition.times();
    const auto values = partition_values(path, partition);
    const std::size_t intervals = partition.num_intervals();
    const TermEvaluator eval(f, d, order, top != nullptr);

    std::vector<double> prefix(intervals + 1, 0.0), prefix_top(intervals + 1, 0.0);
    std::vector<double> dx(d);
    for (std::size_t j = 0; j < intervals; ++j) {
        for (std::size_t c = 0; c < d; ++c) dx[c] = values[(j + 1) * d + c] - values[j * d + c];
        const auto [s, t] = eval({values.data() + j * d, d}, dx);
        prefix[j + 1] = prefix[j] + s;
        prefix_top[j + 1] = prefix_top[j] + t;
    }

    std::vector<double> out(eval_times.size());
    if (top) top->assign(eval_times.size(), 0.0);
    std::vector<double> st(d);
    for (std::size_t e = 0; e < eval_times.size(); ++e) {
        const double t = eval_times[e];
        const std::size_t J = partition.interval_of(t);
        if (J >= intervals) {
            out[e] = prefix[intervals];
            if (top) (*top)[e] = prefix_top[intervals];
            continue;
        }
        double partial = 0.0, partial_top = 0.0;
        if (t > times[J]) {
            path.at(t, st);
            for (std::size_t c = 0; c < d; ++c) dx[c] = st[c] - values[J * d + c];
            std::tie(partial, partial_top) = eval({values.data() + J * d, d}, dx);
        }
        out[e] = prefix[J] + partial;
        if (top) (*top)[e] = prefix_top[J] + partial_top;
    }
    return out;
}

IntegralProfile compensated_integral(const SmoothFunction& f, const SampledPath& path,
                                     const PartitionSequence& sequence, int p, std::span<const double> eval_times) {
    check_p(p);
    check_function_for_path(f, path, p - 1);
    IntegralProfile profile;
    profile.function_id = f.id();
    profile.p = p;
    profile.scheme = sequence.scheme;
    profile.eval_times = checked_eval_times(eval_times, path.horizon());
    const double f0 = f.value(path.sample(0));
    for (double t : profile.eval_times) profile.lhs.push_back(f.value(path.at_vector(t)) - f0);
    for (int n : sequence.levels()) {
        const Partition part = sequence.at(path, n);
        IntegralLevel level;
        level.n = n;
        level.intervals = part.num_intervals();
        level.values = compensated_sums(f, path, part, p - 1, profile.eval_times);
        profile.levels.push_back(std::move(level));
    }
    return profile;
}

IntegralProfile change_of_variable_residual(const SmoothFunction& f, const SampledPath& path,
                                            const PartitionSequence& sequence, int p,
                                            std::span<const double> eval_times) {
    check_p(p);
    check_function_for_path(f, path, p);
    IntegralProfile profile;
    profile.function_id = f.id();
    profile.p = p;
    profile.scheme = sequence.scheme;
    profile.eval_times = checked_eval_times(eval_times, path.horizon());
    const double f0 = f.value(path.sample(0));
    for (double t : profile.eval_times) profile.lhs.push_back(f.value(path.at_vector(t)) - f0);
    for (int n : sequence.levels()) {
        const Partition part = sequence.at(path, n);
        IntegralLevel level;
        level.n = n;
        level.intervals = part.num_intervals();
        level.values = compensated_sums(f, path, part, p - 1, profile.eval_times, &level.stieltjes);
        for (std::size_t e = 0; e < profile.eval_times.size(); ++e)
            level.residuals.push_back(profile.lhs[e] - level.values[e] - level.stieltjes[e]);
        profile.levels.push_back(std::move(level));
    }
    return profile;
}

double telescoping_sum(const SmoothFunction& f, const SampledPath& path, const Partition& partition, double t) {
    check_function_for_path(f, path, 0);
    const auto times = partition.times();
    const std::size_t d = path.dim();
    const auto values = partition_values(path, partition);
    const auto st = path.at_vector(std::min(t, path.horizon()));
    double sum = 0.0;
    for (std::size_t j = 0; j < partition.num_intervals(); ++j) {
        auto point = [&](std::size_t i) -> std::span<const double> {
            return times[i] <= t ? std::span<const double>(values.data() + i * d, d) : std::span<const double>(st);
        };
        sum += f.value(point(j + 1)) - f.value(point(j));
    }
    return sum;
}

}  // namespace pathvar
