#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pathvar {

/// Continuous path observed on the uniform grid t_i = i * T / (num_samples - 1),
/// values in R^d stored row-major. Between grid points the path is the linear
/// interpolant of the samples.
class SampledPath {
public:
    SampledPath(double horizon, std::size_t dim, std::vector<double> values);

    double horizon() const noexcept { return horizon_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t num_samples() const noexcept { return values_.size() / dim_; }
    std::size_t num_steps() const noexcept { return num_samples() - 1; }
    double step() const noexcept { return horizon_ / static_cast<double>(num_steps()); }
    double time(std::size_t i) const noexcept;

    double value(std::size_t i, std::size_t coord = 0) const noexcept { return values_[i * dim_ + coord]; }
    std::span<const double> sample(std::size_t i) const noexcept { return {values_.data() + i * dim_, dim_}; }
    std::span<const double> values() const noexcept { return values_; }

    /// Linear interpolation of one coordinate at time t in [0, T]. Times within
    /// 1e-9 grid steps of a sample return the sample exactly.
    double at(double t, std::size_t coord = 0) const;
    void at(double t, std::span<double> out) const;
    std::vector<double> at_vector(double t) const;

    /// (index i, fraction) with t = t_i + fraction * step, fraction in [0, 1).
    std::pair<std::size_t, double> locate(double t) const;

    SampledPath coordinate(std::size_t coord) const;
    /// Scalar path v . S.
    SampledPath project(std::span<const double> direction) const;
    SampledPath scaled(double factor) const;

    double min_value(std::size_t coord = 0) const;
    double max_value(std::size_t coord = 0) const;
    /// Largest |S(t_{i+1}) - S(t_i)| over samples, max-norm across coordinates.
    double max_increment() const;

private:
    double horizon_;
    std::size_t dim_;
    std::vector<double> values_;
};

/// Right-continuous step path: value_j on [t_j, t_{j+1}), terminal value at T.
class StepPath {
public:
    StepPath(std::vector<double> breakpoints, std::size_t dim, std::vector<double> interval_values,
             std::vector<double> terminal_value);

    std::size_t dim() const noexcept { return dim_; }
    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::size_t num_intervals() const noexcept { return breakpoints_.size() - 1; }
    std::span<const double> interval_value(std::size_t j) const noexcept {
        return {interval_values_.data() + j * dim_, dim_};
    }
    std::span<const double> terminal_value() const noexcept { return terminal_; }

    double at(double t, std::size_t coord = 0) const;
    /// Left limit at t > t_0; at t_0 the value itself.
    double left_limit(double t, std::size_t coord = 0) const;

private:
    std::vector<double> breakpoints_;
    std::size_t dim_;
    std::vector<double> interval_values_;
    std::vector<double> terminal_;
};

enum class FbmMethod { automatic, circulant, cholesky };

struct FbmOptions {
    double hurst = 0.5;
    double horizon = 1.0;
    std::size_t num_steps = 1024;
    std::uint64_t seed = 0;
    std::size_t dim = 1;
    FbmMethod method = FbmMethod::automatic;
};

/// Largest number of steps for which the exact Cholesky synthesis is allowed.
inline constexpr std::size_t kCholeskyMaxSteps = std::size_t{1} << 12;

/// Fractional Brownian motion started at 0 with E[B_s B_t] =
/// (s^{2H} + t^{2H} - |t-s|^{2H}) / 2, independent coordinates.
/// Increments come from circulant embedding of the fractional Gaussian noise
/// covariance; exact Cholesky is used when requested or when the embedding is
/// not positive semi-definite and num_steps <= kCholeskyMaxSteps.
/// Deterministic in (seed, hurst, horizon, num_steps, dim, method).
SampledPath generate_fbm(const FbmOptions& options);

/// Autocovariance of fractional Gaussian noise with unit step, lag k.
double fgn_autocovariance(double hurst, std::size_t lag);

enum class AnalyticKind { line, sine, polynomial, weierstrass };

AnalyticKind parse_analytic_kind(const std::string& name);

/// Named closed-form fixtures sampled on a uniform grid.
///   line:        intercept + slope * t                    (slope, intercept)
///   sine:        offset + amplitude * sin(2 pi frequency t + phase)
///   polynomial:  sum_k c<k> t^k                          (c0, c1, ...)
///   weierstrass: sum_{k<terms} a^k cos(b^k pi t)          (a in (0,1), b > 0, terms)
SampledPath generate_analytic(AnalyticKind kind, const std::map<std::string, double>& params,
                              double horizon, std::size_t num_steps);

/// Step approximation S^n along a partition: value S(t_{j+1}) on [t_j, t_{j+1}),
/// S(T) at T.
StepPath piecewise_constant_approx(const SampledPath& path, std::span<const double> partition_times);

/// sup_t |step(t) - path(t)| (max-norm across coordinates), exact for the
/// linear interpolant.
double sup_distance(const StepPath& step, const SampledPath& path);

}  // namespace pathvar
