#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pathvar/functions.hpp"
#include "pathvar/partitions.hpp"
#include "pathvar/paths.hpp"
#include "pathvar/tensors.hpp"
#include "pathvar/variation.hpp"

namespace pathvar {

/// Reduced rough path over a sampled path with p even:
///   X^k_{s,t} = (S(t) - S(s))^{(x)k} / k!                    for 1 <= k < p,
///   X^p_{s,t} = ((S(t) - S(s))^{(x)p} - (V(t) - V(s))) / p!,
/// where V is a cumulative Sym_p-valued variation known at knot times and
/// linearly interpolated in between (so V(t) - V(s) is additive).
class ReducedRoughPath {
public:
    ReducedRoughPath(SampledPath path, int p, std::vector<double> knot_times, std::vector<SymTensor> knot_variation);

    int p() const noexcept { return p_; }
    std::size_t dim() const noexcept { return path_.dim(); }
    double horizon() const noexcept { return path_.horizon(); }
    const SampledPath& path() const noexcept { return path_; }
    std::span<const double> knot_times() const noexcept { return knot_times_; }

    SymTensor variation_at(double t) const;
    /// Levels 0..p of X_{s,t}; level 0 is the scalar 1.
    std::vector<SymTensor> levels(double s, double t) const;
    SymTensor level(int k, double s, double t) const;

private:
    SampledPath path_;
    int p_;
    std::vector<double> knot_times_;
    std::vector<SymTensor> knot_variation_;
};

/// V at the partition points: sum_{i<j} (dS_i)^{(x)p}.
ReducedRoughPath canonical_lift(const SampledPath& path, const Partition& partition, int p);
/// V from the finest level of a scalar variation profile at its eval times
/// (with V(0) = 0 prepended when 0 is not an eval time).
ReducedRoughPath canonical_lift(const SampledPath& path, const VariationProfile& profile);
ReducedRoughPath canonical_lift(const SampledPath& path, const TensorVariationProfile& profile);
/// V from the sample grid itself.
ReducedRoughPath canonical_lift_samples(const SampledPath& path, int p);
/// V = 0; the canonical lift of paths with vanishing p-th variation.
ReducedRoughPath zero_variation_lift(const SampledPath& path, int p);

using Triple = std::array<double, 3>;
using LevelsFn = std::function<std::vector<SymTensor>(double s, double t)>;

struct ChenReport {
    /// Largest |X_{s,t} - Sym(X_{s,u} (x) X_{u,t})| per level k = 0..p.
    std::vector<double> level_defects;
    double max_defect = 0.0;
    /// Largest defect / (1 + max_k |X^k_{s,t}|).
    double max_relative = 0.0;
    double tol = 0.0;
    std::size_t triples = 0;
    bool passed = false;
};

ChenReport check_reduced_chen(const ReducedRoughPath& X, std::span<const Triple> triples, double tol = 1e-12);
ChenReport check_reduced_chen(const LevelsFn& X, std::size_t dim, int p, std::span<const Triple> triples,
                              double tol = 1e-12);

/// Seeded triples s <= u <= t drawn from the sample grid of [0, T].
std::vector<Triple> grid_triples(const SampledPath& path, std::size_t count, std::uint64_t seed);
/// Seeded pairs s < t drawn from the sample grid.
std::vector<std::pair<double, double>> grid_pairs(const SampledPath& path, std::size_t count, std::uint64_t seed);

enum class ControlKind { linear, qvar, sum };
std::string to_string(ControlKind kind);

struct ControlFunction {
    ControlKind kind = ControlKind::linear;
    std::function<double(double, double)> eval;

    double operator()(double s, double t) const { return eval(s, t); }
};

/// c(s, t) = scale (t - s).
ControlFunction linear_control(double scale = 1.0);
/// Discrete q-variation to the power q over the samples in [s, t], computed
/// exactly by dynamic programming (quadratic in the number of samples).
ControlFunction qvar_control(const SampledPath& path, double q);
ControlFunction sum_control(ControlFunction a, ControlFunction b);

/// Discrete q-variation to the power q of the sample indices [first, last].
double discrete_qvar(const SampledPath& path, double q, std::size_t first, std::size_t last);

struct SuperadditivityReport {
    std::size_t triples = 0;
    std::size_t violations = 0;
    /// Largest c(s,u) + c(u,t) - c(s,t).
    double worst = 0.0;
};

SuperadditivityReport check_superadditive(const ControlFunction& c, std::span<const Triple> triples,
                                          double tol = 1e-12);

/// Y^0 = 1, Y^k(s) = nabla^k f(S(s)) for k = 1..order.
class ControlledPath {
public:
    ControlledPath(FunctionPtr f, SampledPath path, int order);

    int order() const noexcept { return order_; }
    std::size_t dim() const noexcept { return path_.dim(); }
    const SmoothFunction& function() const noexcept { return *f_; }

    SymTensor component(int k, double s) const;
    /// Y^l(t) - sum_{k=l}^{order} <Y^k(s), X^{k-l}_{s,t}>.
    SymTensor remainder(int l, double s, double t, const ReducedRoughPath& X) const;

private:
    FunctionPtr f_;
    SampledPath path_;
    int order_;
};

ControlledPath controlled_from_function(FunctionPtr f, const SampledPath& path, int order);

struct RemainderReport {
    int order = 0;
    int p = 2;
    std::size_t pairs = 0;
    /// Per l = 1..order: (order - l + 1) / p.
    std::vector<double> exponents;
    /// Per l: max over pairs of |R^l_{s,t}|.
    std::vector<double> max_remainder;
    /// Per l: max over pairs with c(s,t) > 0 of |R^l_{s,t}| / c(s,t)^{exponent}.
    std::vector<double> max_ratio;
};

RemainderReport controlled_remainders(const ControlledPath& Y, const ReducedRoughPath& X,
                                      std::span<const std::pair<double, double>> pairs, const ControlFunction& c);

/// sum_{k=1}^{p} <Y^k(s), X^k_{s,t}>.
double rough_germ(const ControlledPath& Y, const ReducedRoughPath& X, double s, double t);

/// Sum of germs over consecutive points.
double rough_sum(const ControlledPath& Y, const ReducedRoughPath& X, std::span<const double> points);

struct RoughIntegralReport {
    double t = 0.0;
    int p = 2;
    /// (p + 1) / p, the local order of the sewing germ.
    double exponent = 1.5;
    /// Depth D uses the uniform partition of [0, t] into 2^D intervals.
    std::vector<int> depths;
    std::vector<double> values;
    /// |value(D+1) - value(D)|.
    std::vector<double> cauchy;
    double value = 0.0;
};

RoughIntegralReport rough_integral(const ControlledPath& Y, const ReducedRoughPath& X, double t, int max_depth);

struct EquivalenceLevel {
    int n = 0;
    double rough = 0.0;
    double compensated = 0.0;
    double gap = 0.0;
};

struct EquivalenceReport {
    std::string function_id;
    int p = 2;
    double t = 0.0;
    std::vector<EquivalenceLevel> levels;
    /// gap(n_{i+1}) / gap(n_i).
    std::vector<double> gap_ratios;
};

/// Rough sums of the nabla f-controlled path and compensated Riemann sums of
/// order p - 1 along the same partitions, stopped at t.
EquivalenceReport integral_equivalence_check(FunctionPtr f, const SampledPath& path, const ReducedRoughPath& X,
                                             const PartitionSequence& sequence, double t);

}  // namespace pathvar
