#include "pathvar/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "pathvar/errors.hpp"
#include "pathvar/variation.hpp"

namespace pathvar {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

void check_inputs(const CylindricalFunctional& F, const SampledPath& path, int p, int order) {
    if (path.dim() != 1) throw ValidationError("cylindrical functionals act on scalar paths");
    if (p < 2 || p % 2 != 0) throw ValidationError("p must be an even integer >= 2");
    if (!F.g || !F.dg_dy) throw ValidationError("functional " + F.id + " is not a complete cylindrical functional");
    if (F.max_order < order) throw ValidationError("functional " + F.id + " lacks vertical derivatives of order " +
                                                   std::to_string(order));
}

// Points of the stopped step path at the partition times.
struct StepTrace {
    std::vector<double> times;
    std::vector<double> y;
    std::vector<double> z;
};

StepTrace step_trace(const CylindricalFunctional& F, const SampledPath& path, const Partition& part) {
    StepTrace tr;
    tr.times.assign(part.times().begin(), part.times().end());
    tr.y = partition_values(path, part);
    tr.z.assign(tr.y.size(), 0.0);
    if (F.h)
        for (std::size_t j = 0; j + 1 < tr.y.size(); ++j)
            tr.z[j + 1] = tr.z[j] + F.h(tr.y[j + 1]) * (tr.times[j + 1] - tr.times[j]);
    return tr;
}

// Functional compensated sums (orders 1..p-1) and the order-p Stieltjes sums.
void functional_sums(const CylindricalFunctional& F, const SampledPath& path, const Partition& part, int p,
                     std::span<const double> eval_times, std::vector<double>& crs, std::vector<double>* top) {
    const StepTrace tr = step_trace(F, path, part);
    const std::size_t intervals = part.num_intervals();
    std::vector<double> inv_fact;
    for (int k = 0; k <= p; ++k) inv_fact.push_back(1.0 / factorial(k));

    auto terms = [&](std::size_t j, double dx) {
        double sum = 0.0;
        double power = 1.0;
        for (int k = 1; k < p; ++k) {
            power *= dx;
            sum += F.vertical(k, tr.times[j], tr.y[j], tr.z[j]) * inv_fact[static_cast<std::size_t>(k)] * power;
        }
        const double t = top ? F.vertical(p, tr.times[j], tr.y[j], tr.z[j]) * inv_fact.back() * power * dx : 0.0;
        return std::pair{sum, t};
    };

    std::vector<double> prefix(intervals + 1, 0.0), prefix_top(intervals + 1, 0.0);
    for (std::size_t j = 0; j < intervals; ++j) {
        const auto [s, t] = terms(j, tr.y[j + 1] - tr.y[j]);
        prefix[j + 1] = prefix[j] + s;
        prefix_top[j + 1] = prefix_top[j] + t;
    }
    crs.assign(eval_times.size(), 0.0);
    if (top) top->assign(eval_times.size(), 0.0);
    for (std::size_t e = 0; e < eval_times.size(); ++e) {
        const double t = eval_times[e];
        const std::size_t J = part.interval_of(t);
        if (J >= intervals) {
            crs[e] = prefix[intervals];
            if (top) (*top)[e] = prefix_top[intervals];
            continue;
        }
        double s = 0.0, st = 0.0;
        if (t > tr.times[J]) std::tie(s, st) = terms(J, path.at(t) - tr.y[J]);
        crs[e] = prefix[J] + s;
        if (top) (*top)[e] = prefix_top[J] + st;
    }
}

std::vector<std::string> scheme_warnings(Scheme scheme) {
    if (scheme == Scheme::lebesgue)
        return {"Lebesgue partitions need not have vanishing mesh; the functional change of variable formula assumes it"};
    return {};
}

template <typename Level>
const Level& find_level(const std::vector<Level>& levels, int n) {
    for (const auto& l : levels)
        if (l.n == n) return l;
    throw ValidationError("level not present in report");
}

}  // namespace

double CylindricalFunctional::horizontal(double t, double y, double z) const {
    double v = dg_dt ? dg_dt(t, y, z) : 0.0;
    if (h && dg_dz) v += h(y) * dg_dz(t, y, z);
    return v;
}

double CylindricalFunctional::vertical(int k, double t, double y, double z) const { return dg_dy(k, t, y, z); }

CylindricalFunctional functional_identity() {
    CylindricalFunctional F;
    F.id = "identity";
    F.g = [](double, double y, double) { return y; };
    F.dg_dt = [](double, double, double) { return 0.0; };
    F.dg_dz = [](double, double, double) { return 0.0; };
    F.d2g_dydz = [](double, double, double) { return 0.0; };
    F.dg_dy = [](int k, double, double, double) { return k == 1 ? 1.0 : 0.0; };
    return F;
}

CylindricalFunctional functional_square() {
    CylindricalFunctional F;
    F.id = "square";
    F.g = [](double, double y, double) { return y * y; };
    F.dg_dt = [](double, double, double) { return 0.0; };
    F.dg_dz = [](double, double, double) { return 0.0; };
    F.d2g_dydz = [](double, double, double) { return 0.0; };
    F.dg_dy = [](int k, double, double y, double) { return k == 1 ? 2.0 * y : k == 2 ? 2.0 : 0.0; };
    return F;
}

CylindricalFunctional functional_running_integral() {
    CylindricalFunctional F;
    F.id = "integral";
    F.g = [](double, double, double z) { return z; };
    F.dg_dt = [](double, double, double) { return 0.0; };
    F.dg_dz = [](double, double, double) { return 1.0; };
    F.d2g_dydz = [](double, double, double) { return 0.0; };
    F.dg_dy = [](int, double, double, double) { return 0.0; };
    F.h = [](double y) { return y; };
    return F;
}

CylindricalFunctional functional_time_times_value() {
    CylindricalFunctional F;
    F.id = "time_value";
    F.g = [](double t, double y, double) { return t * y; };
    F.dg_dt = [](double, double y, double) { return y; };
    F.dg_dz = [](double, double, double) { return 0.0; };
    F.d2g_dydz = [](double, double, double) { return 0.0; };
    F.dg_dy = [](int k, double t, double, double) { return k == 1 ? t : 0.0; };
    return F;
}

CylindricalFunctional functional_from_function(FunctionPtr f) {
    if (!f || f->dim() != 1) throw ValidationError("functional_from_function needs a scalar function");
    CylindricalFunctional F;
    F.id = "fn:" + f->id();
    F.g = [f](double, double y, double) { return f->value1(y); };
    F.dg_dt = [](double, double, double) { return 0.0; };
    F.dg_dz = [](double, double, double) { return 0.0; };
    F.d2g_dydz = [](double, double, double) { return 0.0; };
    F.dg_dy = [f](int k, double, double y, double) { return f->derivative1(k, y); };
    F.max_order = f->max_order();
    return F;
}

CylindricalFunctional functional_scaled(CylindricalFunctional base, double lambda) {
    CylindricalFunctional F = base;
    F.id = base.id + ":scale=" + std::to_string(lambda);
    auto scale3 = [lambda](CylindricalFunctional::G fn) -> CylindricalFunctional::G {
        if (!fn) return fn;
        return [fn, lambda](double t, double y, double z) { return lambda * fn(t, y, z); };
    };
    F.g = scale3(base.g);
    F.dg_dt = scale3(base.dg_dt);
    F.dg_dz = scale3(base.dg_dz);
    F.d2g_dydz = scale3(base.d2g_dydz);
    F.dg_dy = [fn = base.dg_dy, lambda](int k, double t, double y, double z) { return lambda * fn(k, t, y, z); };
    return F;
}

CylindricalFunctional parse_functional(const std::string& spec) {
    if (spec.rfind("fn:", 0) == 0) return functional_from_function(parse_function(spec.substr(3)));
    const auto [name, params] = parse_spec(spec);
    double scale = 1.0;
    for (const auto& [key, value] : params) {
        if (key != "scale") throw ValidationError("unknown parameter '" + key + "' for functional " + name);
        scale = value;
    }
    CylindricalFunctional F;
    if (name == "identity") F = functional_identity();
    else if (name == "square") F = functional_square();
    else if (name == "integral") F = functional_running_integral();
    else if (name == "time_value") F = functional_time_times_value();
    else throw ValidationError("unknown functional: " + name);
    return scale == 1.0 ? F : functional_scaled(std::move(F), scale);
}

FunctionalTrace::FunctionalTrace(const CylindricalFunctional& F, const SampledPath& path) : F_(F), path_(path) {
    const std::size_t n = path.num_samples();
    const double dt = path.step();
    z_.assign(n, 0.0);
    if (F.h)
        for (std::size_t i = 0; i + 1 < n; ++i) z_[i + 1] = z_[i] + 0.5 * dt * (F.h(path.value(i)) + F.h(path.value(i + 1)));
    dfi_.resize(n);
    for (std::size_t i = 0; i < n; ++i) dfi_[i] = F.horizontal(path.time(i), path.value(i), z_[i]);
    df_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) df_[i + 1] = df_[i] + 0.5 * dt * (dfi_[i] + dfi_[i + 1]);
}

double FunctionalTrace::z(double t) const {
    const auto [i, frac] = path_.locate(t);
    if (frac == 0.0 || !F_.h) return z_[i];
    const double span = t - path_.time(i);
    return z_[i] + 0.5 * span * (F_.h(path_.value(i)) + F_.h(path_.at(t)));
}

double FunctionalTrace::drift(double t) const {
    const auto [i, frac] = path_.locate(t);
    if (frac == 0.0) return df_[i];
    const double span = t - path_.time(i);
    const double dft = F_.horizontal(t, path_.at(t), z(t));
    return df_[i] + 0.5 * span * (dfi_[i] + dft);
}

double FunctionalTrace::value(double t) const { return F_.g(t, path_.at(t), z(t)); }

IntegralProfile functional_compensated_integral(const CylindricalFunctional& F, const SampledPath& path,
                                                const PartitionSequence& sequence, int p,
                                                std::span<const double> eval_times) {
    check_inputs(F, path, p, p - 1);
    IntegralProfile profile;
    profile.function_id = F.id;
    profile.p = p;
    profile.scheme = sequence.scheme;
    profile.eval_times = checked_eval_times(eval_times, path.horizon());
    profile.warnings = scheme_warnings(sequence.scheme);
    const FunctionalTrace trace(F, path);
    const double f0 = trace.value(0.0);
    for (double t : profile.eval_times) profile.lhs.push_back(trace.value(t) - f0);
    for (int n : sequence.levels()) {
        const Partition part = sequence.at(path, n);
        IntegralLevel level;
        level.n = n;
        level.intervals = part.num_intervals();
        functional_sums(F, path, part, p, profile.eval_times, level.values, nullptr);
        profile.levels.push_back(std::move(level));
    }
    return profile;
}

IntegralProfile functional_change_of_variable_residual(const CylindricalFunctional& F, const SampledPath& path,
                                                       const PartitionSequence& sequence, int p,
                                                       std::span<const double> eval_times) {
    check_inputs(F, path, p, p);
    IntegralProfile profile;
    profile.function_id = F.id;
    profile.p = p;
    profile.scheme = sequence.scheme;
    profile.eval_times = checked_eval_times(eval_times, path.horizon());
    profile.warnings = scheme_warnings(sequence.scheme);
    const FunctionalTrace trace(F, path);
    const double f0 = trace.value(0.0);
    for (double t : profile.eval_times) {
        profile.lhs.push_back(trace.value(t) - f0);
        profile.drift.push_back(trace.drift(t));
    }
    for (int n : sequence.levels()) {
        const Partition part = sequence.at(path, n);
        IntegralLevel level;
        level.n = n;
        level.intervals = part.num_intervals();
        functional_sums(F, path, part, p, profile.eval_times, level.values, &level.stieltjes);
        for (std::size_t e = 0; e < profile.eval_times.size(); ++e)
            level.residuals.push_back(profile.lhs[e] - profile.drift[e] - level.values[e] - level.stieltjes[e]);
        profile.levels.push_back(std::move(level));
    }
    return profile;
}

const IsometryLevel& IsometryReport::level(int n) const { return find_level(levels, n); }
const DecompositionLevel& DecompositionReport::level(int n) const { return find_level(levels, n); }

IsometryReport isometry_check(const CylindricalFunctional& F, const SampledPath& path,
                              const PartitionSequence& sequence, int p, std::span<const double> eval_times) {
    check_inputs(F, path, p, 1);
    IsometryReport report;
    report.functional_id = F.id;
    report.p = p;
    report.scheme = sequence.scheme;
    report.eval_times = checked_eval_times(eval_times, path.horizon());
    report.holder_threshold = (std::sqrt(1.0 + 4.0 / p) - 1.0) / 2.0;
    report.warnings = scheme_warnings(sequence.scheme);
    const FunctionalTrace trace(F, path);
    for (int n : sequence.levels()) {
        const Partition part = sequence.at(path, n);
        const auto times = part.times();
        const auto values = partition_values(path, part);
        std::vector<double> fvals(part.size()), lhs_terms(part.num_intervals()), rhs_terms(part.num_intervals());
        for (std::size_t j = 0; j < part.size(); ++j) fvals[j] = F.g(times[j], values[j], trace.z(times[j]));
        for (std::size_t j = 0; j < part.num_intervals(); ++j) {
            lhs_terms[j] = ipow(std::abs(fvals[j + 1] - fvals[j]), p);
            const double grad = F.vertical(1, times[j], values[j], trace.z(times[j]));
            rhs_terms[j] = ipow(std::abs(grad), p) * ipow(std::abs(values[j + 1] - values[j]), p);
        }
        IsometryLevel level;
        level.n = n;
        level.lhs = cumulative_at(times, lhs_terms, report.eval_times);
        level.rhs = cumulative_at(times, rhs_terms, report.eval_times);
        for (std::size_t e = 0; e < level.lhs.size(); ++e)
            level.gap = std::max(level.gap, std::abs(level.lhs[e] - level.rhs[e]));
        report.levels.push_back(std::move(level));
    }
    return report;
}

DecompositionReport rough_smooth_decompose(const CylindricalFunctional& F, const SampledPath& path,
                                           const PartitionSequence& sequence, int p,
                                           std::span<const double> eval_times) {
    check_inputs(F, path, p, p - 1);
    DecompositionReport report;
    report.functional_id = F.id;
    report.p = p;
    report.scheme = sequence.scheme;
    report.eval_times = checked_eval_times(eval_times, path.horizon());
    report.warnings = scheme_warnings(sequence.scheme);
    const FunctionalTrace trace(F, path);
    const double f0 = trace.value(0.0);

    for (int n : sequence.levels()) {
        const Partition part = sequence.at(path, n);
        const auto times = part.times();
        DecompositionLevel level;
        level.n = n;
        functional_sums(F, path, part, p, report.eval_times, level.M, nullptr);
        for (std::size_t e = 0; e < report.eval_times.size(); ++e)
            level.A.push_back(trace.value(report.eval_times[e]) - f0 - level.M[e]);
        // A_n at the partition points themselves.
        std::vector<double> m_points;
        functional_sums(F, path, part, p, times, m_points, nullptr);
        std::vector<double> a_points(part.size());
        for (std::size_t j = 0; j < part.size(); ++j) a_points[j] = trace.value(times[j]) - f0 - m_points[j];
        level.A_variation = cumulative_at(times, variation_terms(a_points, p), report.eval_times);
        report.levels.push_back(std::move(level));
    }

    // Strict increase of [S]^p on the eval grid with 0 prepended.
    std::set<double> grid(report.eval_times.begin(), report.eval_times.end());
    grid.insert(0.0);
    const std::vector<double> diag_times(grid.begin(), grid.end());
    if (diag_times.size() < 2) {
        report.warnings.push_back("strict-increase diagnostic needs an eval time after 0");
        return report;
    }
    const auto var = pth_variation_scalar(path, sequence, p, diag_times);
    auto min_increment = [&](const VariationLevel& l) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < l.values.size(); ++i) m = std::min(m, l.values[i + 1] - l.values[i]);
        return m;
    };
    report.min_increment_first = min_increment(var.levels.front());
    report.min_increment_last = min_increment(var.levels.back());
    const int span = var.levels.back().n - var.levels.front().n;
    if (report.min_increment_last > 0.0 && span > 0)
        report.decay_rate = std::log2(report.min_increment_first / report.min_increment_last) / span;
    else if (!(report.min_increment_last > 0.0))
        report.decay_rate = std::numeric_limits<double>::infinity();
    report.strictly_increasing = report.min_increment_last > 0.0 && report.decay_rate <= 0.5;
    if (!report.strictly_increasing)
        report.warnings.push_back("[S]^p does not look strictly increasing; the decomposition may not be unique");
    return report;
}

}  // namespace pathvar
