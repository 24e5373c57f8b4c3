#include "pathvar/roughpath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pathvar/calculus.hpp"
#include "pathvar/errors.hpp"
#include "pathvar/random.hpp"

namespace pathvar {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void check_even_p(int p) {
    if (p < 2 || p % 2 != 0) throw ValidationError("p must be an even integer >= 2");
}

std::vector<double> increment(const SampledPath& path, double s, double t) {
    auto a = path.at_vector(s);
    const auto b = path.at_vector(t);
    for (std::size_t c = 0; c < a.size(); ++c) a[c] = b[c] - a[c];
    return a;
}

// Cumulative sum_{i<j} (dS_i)^{(x)p} at the given points.
ReducedRoughPath lift_along(const SampledPath& path, std::vector<double> times, int p) {
    const std::size_t d = path.dim();
    std::vector<SymTensor> knots;
    knots.reserve(times.size());
    SymTensor acc(d, static_cast<std::size_t>(p));
    std::vector<double> prev = path.at_vector(times.front());
    knots.push_back(acc);
    for (std::size_t j = 1; j < times.size(); ++j) {
        std::vector<double> cur = path.at_vector(times[j]);
        std::vector<double> dx(d);
        for (std::size_t c = 0; c < d; ++c) dx[c] = cur[c] - prev[c];
        add_sym_power(acc, dx, 1.0);
        knots.push_back(acc);
        prev = std::move(cur);
    }
    return ReducedRoughPath(path, p, std::move(times), std::move(knots));
}

ReducedRoughPath lift_from_knots(const SampledPath& path, int p, std::span<const double> eval_times,
                                 std::vector<SymTensor> values) {
    std::vector<double> times(eval_times.begin(), eval_times.end());
    if (times.empty()) throw ValidationError("variation profile has no eval times");
    if (times.front() > 0.0) {
        times.insert(times.begin(), 0.0);
        values.insert(values.begin(), SymTensor(path.dim(), static_cast<std::size_t>(p)));
    }
    return ReducedRoughPath(path, p, std::move(times), std::move(values));
}

}  // namespace

ReducedRoughPath::ReducedRoughPath(SampledPath path, int p, std::vector<double> knot_times,
                                   std::vector<SymTensor> knot_variation)
    : path_(std::move(path)), p_(p), knot_times_(std::move(knot_times)), knot_variation_(std::move(knot_variation)) {
    check_even_p(p_);
    if (knot_times_.empty() || knot_times_.size() != knot_variation_.size())
        throw ValidationError("variation knots and values must be non-empty and of equal length");
    for (std::size_t i = 0; i < knot_times_.size(); ++i) {
        if (i > 0 && !(knot_times_[i] > knot_times_[i - 1]))
            throw ValidationError("variation knot times must be strictly increasing");
        if (knot_variation_[i].dim() != path_.dim() || knot_variation_[i].order() != static_cast<std::size_t>(p_))
            throw ValidationError("variation knots must be order-p tensors over the path dimension");
    }
    if (knot_times_.front() > 1e-12 * path_.horizon() || knot_times_.back() < path_.horizon() * (1.0 - 1e-12))
        throw ValidationError("variation knots must span [0, T]");
}

SymTensor ReducedRoughPath::variation_at(double t) const {
    if (t <= knot_times_.front()) return knot_variation_.front();
    if (t >= knot_times_.back()) return knot_variation_.back();
    const auto it = std::upper_bound(knot_times_.begin(), knot_times_.end(), t);
    const auto j = static_cast<std::size_t>(it - knot_times_.begin());
    const double t0 = knot_times_[j - 1], t1 = knot_times_[j];
    const double w = (t - t0) / (t1 - t0);
    SymTensor out = knot_variation_[j - 1];
    if (w > 0.0) {
        out *= 1.0 - w;
        out.add_scaled(knot_variation_[j], w);
    }
    return out;
}

std::vector<SymTensor> ReducedRoughPath::levels(double s, double t) const {
    const auto dx = increment(path_, s, t);
    std::vector<SymTensor> out;
    out.reserve(static_cast<std::size_t>(p_) + 1);
    out.push_back(SymTensor::scalar(1.0, dim()));
    for (int k = 1; k <= p_; ++k) {
        SymTensor level = sym_power(dx, static_cast<std::size_t>(k));
        if (k == p_) level -= variation_at(t) - variation_at(s);
        level *= 1.0 / factorial(k);
        out.push_back(std::move(level));
    }
    return out;
}

SymTensor ReducedRoughPath::level(int k, double s, double t) const {
    if (k < 0 || k > p_) throw ValidationError("rough path level out of range");
    if (k == 0) return SymTensor::scalar(1.0, dim());
    SymTensor level = sym_power(increment(path_, s, t), static_cast<std::size_t>(k));
    if (k == p_) level -= variation_at(t) - variation_at(s);
    level *= 1.0 / factorial(k);
    return level;
}

ReducedRoughPath canonical_lift(const SampledPath& path, const Partition& partition, int p) {
    check_even_p(p);
    const auto t = partition.times();
    return lift_along(path, std::vector<double>(t.begin(), t.end()), p);
}

ReducedRoughPath canonical_lift(const SampledPath& path, const VariationProfile& profile) {
    if (path.dim() != 1) throw ValidationError("scalar variation profiles lift scalar paths only");
    if (profile.signed_sums || profile.levels.empty()) throw ValidationError("lift needs an even-p variation profile");
    std::vector<SymTensor> values;
    for (double v : profile.levels.back().values) values.push_back(SymTensor(1, static_cast<std::size_t>(profile.p), {v}));
    return lift_from_knots(path, profile.p, profile.eval_times, std::move(values));
}

ReducedRoughPath canonical_lift(const SampledPath& path, const TensorVariationProfile& profile) {
    if (profile.dim != path.dim()) throw ValidationError("variation profile and path dimensions differ");
    if (profile.levels.empty()) throw ValidationError("variation profile has no levels");
    return lift_from_knots(path, profile.p, profile.eval_times, profile.levels.back().values);
}

ReducedRoughPath canonical_lift_samples(const SampledPath& path, int p) {
    check_even_p(p);
    std::vector<double> times(path.num_samples());
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = path.time(i);
    return lift_along(path, std::move(times), p);
}

ReducedRoughPath zero_variation_lift(const SampledPath& path, int p) {
    check_even_p(p);
    const SymTensor zero(path.dim(), static_cast<std::size_t>(p));
    return ReducedRoughPath(path, p, {0.0, path.horizon()}, {zero, zero});
}

ChenReport check_reduced_chen(const LevelsFn& X, std::size_t dim, int p, std::span<const Triple> triples, double tol) {
    ChenReport r;
    r.tol = tol;
    r.triples = triples.size();
    r.level_defects.assign(static_cast<std::size_t>(p) + 1, 0.0);
    for (const auto& [s, u, t] : triples) {
        if (!(s <= u && u <= t)) throw ValidationError("Chen triples need s <= u <= t");
        const GradedTensor product = GradedTensor(X(s, u)) * GradedTensor(X(u, t));
        const auto direct = X(s, t);
        if (direct.size() != static_cast<std::size_t>(p) + 1 || direct.front().dim() != dim)
            throw ValidationError("rough path levels do not match (dim, p)");
        double size = 0.0, worst = 0.0;
        for (std::size_t k = 0; k < direct.size(); ++k) {
            const double defect = (direct[k] - product.level(k)).max_abs();
            r.level_defects[k] = std::max(r.level_defects[k], defect);
            size = std::max(size, direct[k].max_abs());
            worst = std::max(worst, defect);
        }
        r.max_relative = std::max(r.max_relative, worst / (1.0 + size));
    }
    r.max_defect = r.level_defects.empty() ? 0.0 : *std::max_element(r.level_defects.begin(), r.level_defects.end());
    r.passed = r.max_relative < tol;
    return r;
}

ChenReport check_reduced_chen(const ReducedRoughPath& X, std::span<const Triple> triples, double tol) {
    return check_reduced_chen([&X](double s, double t) { return X.levels(s, t); }, X.dim(), X.p(), triples, tol);
}

std::vector<Triple> grid_triples(const SampledPath& path, std::size_t count, std::uint64_t seed) {
    auto eng = make_engine(seed);
    std::uniform_int_distribution<std::size_t> pick(0, path.num_steps());
    std::vector<Triple> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::array<std::size_t, 3> idx{pick(eng), pick(eng), pick(eng)};
        std::sort(idx.begin(), idx.end());
        out.push_back({path.time(idx[0]), path.time(idx[1]), path.time(idx[2])});
    }
    return out;
}

std::vector<std::pair<double, double>> grid_pairs(const SampledPath& path, std::size_t count, std::uint64_t seed) {
    if (path.num_steps() < 1) throw ValidationError("path needs at least one step");
    auto eng = make_engine(seed);
    std::uniform_int_distribution<std::size_t> pick(0, path.num_steps());
    std::vector<std::pair<double, double>> out;
    out.reserve(count);
    while (out.size() < count) {
        std::size_t a = pick(eng), b = pick(eng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        out.emplace_back(path.time(a), path.time(b));
    }
    return out;
}

std::string to_string(ControlKind kind) {
    switch (kind) {
        case ControlKind::linear: return "linear";
        case ControlKind::qvar: return "qvar";
        case ControlKind::sum: return "sum";
    }
    return "linear";
}

ControlFunction linear_control(double scale) {
    if (!(scale > 0.0)) throw ValidationError("control scale must be positive");
    return {ControlKind::linear, [scale](double s, double t) { return scale * std::max(0.0, t - s); }};
}

double discrete_qvar(const SampledPath& path, double q, std::size_t first, std::size_t last) {
    if (!(q >= 1.0)) throw ValidationError("q-variation needs q >= 1");
    if (last <= first) return 0.0;
    const std::size_t d = path.dim();
    const std::size_t m = last - first + 1;
    auto dist_q = [&](std::size_t i, std::size_t j) {
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double v = path.value(j, c) - path.value(i, c);
            s += v * v;
        }
        return std::pow(s, 0.5 * q);
    };
    // best[j] = q-variation of the samples first..first+j ending at first+j.
    std::vector<double> best(m, 0.0);
    for (std::size_t j = 1; j < m; ++j) {
        double b = 0.0;
        for (std::size_t i = 0; i < j; ++i) b = std::max(b, best[i] + dist_q(first + i, first + j));
        best[j] = b;
    }
    return best.back();
}

ControlFunction qvar_control(const SampledPath& path, double q) {
    if (!(q >= 1.0)) throw ValidationError("q-variation needs q >= 1");
    return {ControlKind::qvar, [path, q](double s, double t) {
                if (!(t > s)) return 0.0;
                const double dt = path.step();
                const double lo = std::ceil(s / dt - 1e-9), hi = std::floor(t / dt + 1e-9);
                if (hi <= lo) return 0.0;
                return discrete_qvar(path, q, static_cast<std::size_t>(lo),
                                     std::min(static_cast<std::size_t>(hi), path.num_steps()));
            }};
}

ControlFunction sum_control(ControlFunction a, ControlFunction b) {
    return {ControlKind::sum, [a = std::move(a), b = std::move(b)](double s, double t) { return a(s, t) + b(s, t); }};
}

SuperadditivityReport check_superadditive(const ControlFunction& c, std::span<const Triple> triples, double tol) {
    SuperadditivityReport r;
    r.triples = triples.size();
    r.worst = -std::numeric_limits<double>::infinity();
    for (const auto& [s, u, t] : triples) {
        const double whole = c(s, t);
        const double excess = c(s, u) + c(u, t) - whole;
        r.worst = std::max(r.worst, excess);
        if (excess > tol * (1.0 + std::abs(whole))) ++r.violations;
    }
    if (triples.empty()) r.worst = 0.0;
    return r;
}

ControlledPath::ControlledPath(FunctionPtr f, SampledPath path, int order)
    : f_(std::move(f)), path_(std::move(path)), order_(order) {
    if (!f_) throw ValidationError("controlled path needs a function");
    if (order_ < 1) throw ValidationError("controlled path order must be >= 1");
    check_function_for_path(*f_, path_, order_);
}

SymTensor ControlledPath::component(int k, double s) const {
    if (k < 0 || k > order_) throw ValidationError("controlled path component out of range");
    if (k == 0) return SymTensor::scalar(1.0, dim());
    return f_->derivative(k, path_.at_vector(s));
}

SymTensor ControlledPath::remainder(int l, double s, double t, const ReducedRoughPath& X) const {
    if (l < 1 || l > order_) throw ValidationError("remainder index out of range");
    if (X.dim() != dim() || X.p() < order_ - 1) throw ValidationError("rough path does not match the controlled path");
    SymTensor r = component(l, t);
    for (int k = l; k <= order_; ++k) r -= contract(X.level(k - l, s, t), component(k, s));
    return r;
}

ControlledPath controlled_from_function(FunctionPtr f, const SampledPath& path, int order) {
    return ControlledPath(std::move(f), path, order);
}

RemainderReport controlled_remainders(const ControlledPath& Y, const ReducedRoughPath& X,
                                      std::span<const std::pair<double, double>> pairs, const ControlFunction& c) {
    RemainderReport r;
    r.order = Y.order();
    r.p = X.p();
    r.pairs = pairs.size();
    for (int l = 1; l <= Y.order(); ++l) r.exponents.push_back(static_cast<double>(Y.order() - l + 1) / X.p());
    r.max_remainder.assign(r.exponents.size(), 0.0);
    r.max_ratio.assign(r.exponents.size(), 0.0);
    for (const auto& [s, t] : pairs) {
        const double cst = c(s, t);
        for (int l = 1; l <= Y.order(); ++l) {
            const auto i = static_cast<std::size_t>(l - 1);
            const double rem = Y.remainder(l, s, t, X).max_abs();
            r.max_remainder[i] = std::max(r.max_remainder[i], rem);
            if (cst > 0.0) r.max_ratio[i] = std::max(r.max_ratio[i], rem / std::pow(cst, r.exponents[i]));
        }
    }
    return r;
}

double rough_germ(const ControlledPath& Y, const ReducedRoughPath& X, double s, double t) {
    if (Y.order() != X.p() || Y.dim() != X.dim())
        throw ValidationError("rough integral needs a controlled path of order p over the same dimension");
    const auto levels = X.levels(s, t);
    double sum = 0.0;
    for (int k = 1; k <= X.p(); ++k) sum += pairing(Y.component(k, s), levels[static_cast<std::size_t>(k)]);
    return sum;
}

double rough_sum(const ControlledPath& Y, const ReducedRoughPath& X, std::span<const double> points) {
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < points.size(); ++j)
        if (points[j + 1] > points[j]) sum += rough_germ(Y, X, points[j], points[j + 1]);
    return sum;
}

RoughIntegralReport rough_integral(const ControlledPath& Y, const ReducedRoughPath& X, double t, int max_depth) {
    if (!(t >= 0.0 && t <= X.horizon())) throw ValidationError("time t must lie in [0, T]");
    if (max_depth < 0 || max_depth > 24) throw ValidationError("sewing depth must lie in [0, 24]");
    RoughIntegralReport r;
    r.t = t;
    r.p = X.p();
    r.exponent = static_cast<double>(X.p() + 1) / X.p();
    for (int D = 0; D <= max_depth; ++D) {
        const std::size_t m = std::size_t{1} << D;
        std::vector<double> points(m + 1);
        for (std::size_t j = 0; j <= m; ++j) points[j] = j == m ? t : t * static_cast<double>(j) / static_cast<double>(m);
        r.depths.push_back(D);
        r.values.push_back(rough_sum(Y, X, points));
        if (D > 0) r.cauchy.push_back(std::abs(r.values.back() - r.values[r.values.size() - 2]));
    }
    r.value = r.values.back();
    return r;
}

EquivalenceReport integral_equivalence_check(FunctionPtr f, const SampledPath& path, const ReducedRoughPath& X,
                                             const PartitionSequence& sequence, double t) {
    if (!f) throw ValidationError("equivalence check needs a function");
    if (!(t >= 0.0 && t <= path.horizon())) throw ValidationError("time t must lie in [0, T]");
    const int p = X.p();
    const ControlledPath Y(f, path, p);
    EquivalenceReport r;
    r.function_id = f->id();
    r.p = p;
    r.t = t;
    const double times[] = {t};
    for (int n : sequence.levels()) {
        const Partition part = sequence.at(path, n);
        std::vector<double> points;
        for (double tj : part.times()) {
            if (tj >= t) break;
            points.push_back(tj);
        }
        points.push_back(t);
        EquivalenceLevel level;
        level.n = n;
        level.rough = rough_sum(Y, X, points);
        level.compensated = compensated_sums(*f, path, part, p - 1, times)[0];
        level.gap = std::abs(level.rough - level.compensated);
        r.levels.push_back(level);
    }
    for (std::size_t i = 1; i < r.levels.size(); ++i)
        r.gap_ratios.push_back(r.levels[i - 1].gap > 0.0 ? r.levels[i].gap / r.levels[i - 1].gap : 0.0);
    return r;
}

}  // namespace pathvar
