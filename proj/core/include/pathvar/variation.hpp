#pragma once

#include <span>
#include <vector>

#include "pathvar/partitions.hpp"
#include "pathvar/paths.hpp"
#include "pathvar/tensors.hpp"

namespace pathvar {

struct VariationLevel {
    int n = 0;
    /// Cumulative sums at each eval time.
    std::vector<double> values;
    /// Signed sums only: crossing bound h^p sum_k |U_k - D_k| plus boundary terms.
    std::vector<double> bounds;
    double oscillation = 0.0;
    std::size_t intervals = 0;
    /// Largest single-interval contribution |dS|^p.
    double max_term = 0.0;
};

struct VariationProfile {
    int p = 2;
    Scheme scheme = Scheme::uniform;
    bool signed_sums = false;
    std::vector<double> eval_times;
    std::vector<VariationLevel> levels;

    const VariationLevel& level(int n) const;
    /// Value at the last eval time for level n.
    double final_value(int n) const { return level(n).values.back(); }
};

struct TensorVariationLevel {
    int n = 0;
    std::vector<SymTensor> values;
    double oscillation = 0.0;
    std::size_t intervals = 0;
};

struct TensorVariationProfile {
    int p = 2;
    std::size_t dim = 1;
    Scheme scheme = Scheme::uniform;
    std::vector<double> eval_times;
    std::vector<TensorVariationLevel> levels;

    const TensorVariationLevel& level(int n) const;
};

/// Per-interval terms |S(t_{j+1}) - S(t_j)|^p of a scalar partition trace.
std::vector<double> variation_terms(std::span<const double> values, int p);

/// sum over intervals with t_j <= t of terms_j, for each t.
std::vector<double> cumulative_at(std::span<const double> times, std::span<const double> terms,
                                  std::span<const double> eval_times);

/// Scalar p-th variation sums along each level of the sequence (p even),
/// cumulative in t with the t_j <= t convention.
VariationProfile pth_variation_scalar(const SampledPath& path, const PartitionSequence& sequence, int p,
                                      std::span<const double> eval_times);

/// Tensor-valued sums of Sym_p increments (uniform scheme only).
TensorVariationProfile pth_variation_tensor(const SampledPath& path, const PartitionSequence& sequence, int p,
                                            std::span<const double> eval_times);

/// Signed sums of (dS)^p for odd p >= 3 along Lebesgue partitions, with the
/// crossing-count bound per eval time.
VariationProfile signed_pth_sums(const SampledPath& path, const PartitionSequence& sequence, int p,
                                 std::span<const double> eval_times);

struct ConvergenceReport {
    /// (n_i, n_{i+1}) level pairs and the sup over eval times of the difference.
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> cauchy;
    /// Finest level values.
    std::vector<double> limit;
    /// Largest increase of the finest-level cumulative function between
    /// adjacent eval times.
    double max_jump = 0.0;
    /// Largest single-interval mass at the first and last level.
    double first_max_term = 0.0;
    double last_max_term = 0.0;
    /// Atomless proxy: the largest single-interval mass shrinks from the first
    /// to the last level (or vanishes).
    bool atomless = true;
};

ConvergenceReport convergence_diagnostic(const VariationProfile& profile);
/// Tensor version: differences measured by the largest coefficient.
ConvergenceReport convergence_diagnostic(const TensorVariationProfile& profile);

/// Validates eval times against [0, T] and returns them (or {T} when empty).
std::vector<double> checked_eval_times(std::span<const double> eval_times, double horizon);

}  // namespace pathvar
