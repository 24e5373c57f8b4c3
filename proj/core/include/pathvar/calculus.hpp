#pragma once

#include <span>
#include <string>
#include <vector>

#include "pathvar/functions.hpp"
#include "pathvar/partitions.hpp"
#include "pathvar/paths.hpp"

namespace pathvar {

struct IntegralLevel {
    int n = 0;
    std::size_t intervals = 0;
    /// Compensated Riemann sums at each eval time.
    std::vector<double> values;
    /// (1/p!) times the Stieltjes sums against the level-n variation
    /// (residual computations only).
    std::vector<double> stieltjes;
    /// lhs - drift - values - stieltjes (residual computations only).
    std::vector<double> residuals;
};

struct IntegralProfile {
    std::string function_id;
    int p = 2;
    Scheme scheme = Scheme::uniform;
    std::vector<double> eval_times;
    /// f(S(t)) - f(S(0)), or F(t, S_t) - F(0, S_0) for functionals.
    std::vector<double> lhs;
    /// Functionals only: trapezoid value of int_0^t DF(s, S_s) ds.
    std::vector<double> drift;
    std::vector<IntegralLevel> levels;
    std::vector<std::string> warnings;

    const IntegralLevel& level(int n) const;
    /// Finest-level compensated sums.
    const std::vector<double>& limit() const { return levels.back().values; }
};

/// Sums sum_j sum_{k=1}^{order} f^{(k)}(S(t_j))/k! <(S(t_{j+1} ^ t) - S(t_j ^ t))^k>
/// at each eval time along one partition. When `top` is non-null it receives
/// the same sums for k = order + 1 alone (scaled by 1/(order+1)!), with the
/// same truncated increments.
std::vector<double> compensated_sums(const SmoothFunction& f, const SampledPath& path, const Partition& partition,
                                     int order, std::span<const double> eval_times, std::vector<double>* top = nullptr);

/// Compensated Riemann sums with Taylor terms k = 1..p-1, per level.
IntegralProfile compensated_integral(const SmoothFunction& f, const SampledPath& path,
                                     const PartitionSequence& sequence, int p, std::span<const double> eval_times);

/// residual_n(t) = f(S(t)) - f(S(0)) - CRS_n(t) - (1/p!) sum_j <f^{(p)}(S(t_j)), (dS_j)^p>
/// where dS_j are the same truncated increments as in CRS_n.
IntegralProfile change_of_variable_residual(const SmoothFunction& f, const SampledPath& path,
                                            const PartitionSequence& sequence, int p,
                                            std::span<const double> eval_times);

/// sum_j (f(S(t_{j+1} ^ t)) - f(S(t_j ^ t))).
double telescoping_sum(const SmoothFunction& f, const SampledPath& path, const Partition& partition, double t);

/// Checks that f and S are compatible and that f has derivatives through `order`.
void check_function_for_path(const SmoothFunction& f, const SampledPath& path, int order);

}  // namespace pathvar
