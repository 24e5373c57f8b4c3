#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pathvar/calculus.hpp"
#include "pathvar/functions.hpp"
#include "pathvar/partitions.hpp"
#include "pathvar/paths.hpp"

namespace pathvar {

/// F(t, w) = g(t, w(t), int_0^t h(w(s)) ds) for scalar paths w.
/// Horizontal derivative DF = dg/dt + h(w(t)) dg/dz; vertical derivatives
/// d^k F/dw^k = d^k g/dy^k, all evaluated at (t, w(t), int_0^t h(w) ds).
struct CylindricalFunctional {
    using G = std::function<double(double t, double y, double z)>;

    std::string id;
    G g;
    G dg_dt;
    G dg_dz;
    G d2g_dydz;
    /// k-th partial derivative in y, k >= 1.
    std::function<double(int k, double t, double y, double z)> dg_dy;
    /// Integrand of the path integral; empty means h = 0.
    std::function<double(double y)> h;
    int max_order = 32;

    double horizontal(double t, double y, double z) const;
    double vertical(int k, double t, double y, double z) const;
};

/// F = w(t).
CylindricalFunctional functional_identity();
/// F = w(t)^2.
CylindricalFunctional functional_square();
/// F = int_0^t w(s) ds.
CylindricalFunctional functional_running_integral();
/// F = t * w(t).
CylindricalFunctional functional_time_times_value();
/// F = f(w(t)) for a scalar smooth function.
CylindricalFunctional functional_from_function(FunctionPtr f);
/// lambda * F.
CylindricalFunctional functional_scaled(CylindricalFunctional base, double lambda);

/// "identity", "square", "integral", "time_value", optionally with ":scale=<lambda>",
/// or "fn:<function spec>".
CylindricalFunctional parse_functional(const std::string& spec);

/// Z(t) = int_0^t h(S) ds and int_0^t DF(s, S_s) ds by the trapezoid rule on
/// the sample grid (partial last segment for times between samples).
class FunctionalTrace {
public:
    FunctionalTrace(const CylindricalFunctional& F, const SampledPath& path);

    double z(double t) const;
    double drift(double t) const;
    /// F(t, S_t).
    double value(double t) const;

private:
    const CylindricalFunctional& F_;
    const SampledPath& path_;
    std::vector<double> z_;
    std::vector<double> dfi_;
    std::vector<double> df_;
};

/// Per level: sum_j sum_{k=1}^{p-1} (1/k!) d^kF/dw^k(t_j, S^n_{t_j-}) (dS_j)^k with
/// truncated increments. The stopped step path has value S(t_j) at t_j (S(0)
/// for j = 0) and running integral sum_{i<j} h(S(t_{i+1})) (t_{i+1} - t_i).
IntegralProfile functional_compensated_integral(const CylindricalFunctional& F, const SampledPath& path,
                                                const PartitionSequence& sequence, int p,
                                                std::span<const double> eval_times);

/// residual_n(t) = F(t,S_t) - F(0,S_0) - int DF ds - CRS_n(t) - (1/p!) sum_j d^pF/dw^p (dS_j)^p.
IntegralProfile functional_change_of_variable_residual(const CylindricalFunctional& F, const SampledPath& path,
                                                       const PartitionSequence& sequence, int p,
                                                       std::span<const double> eval_times);

struct IsometryLevel {
    int n = 0;
    std::vector<double> lhs;
    std::vector<double> rhs;
    /// sup over eval times of |lhs - rhs|.
    double gap = 0.0;
};

struct IsometryReport {
    std::string functional_id;
    int p = 2;
    Scheme scheme = Scheme::uniform;
    std::vector<double> eval_times;
    std::vector<IsometryLevel> levels;
    /// Hoelder exponent the path would need for the identity to hold; not
    /// verified from data.
    double holder_threshold = 0.0;
    std::vector<std::string> warnings;

    const IsometryLevel& level(int n) const;
};

/// lhs_n(t) = sum_{t_j <= t} |F(t_{j+1}, S) - F(t_j, S)|^p,
/// rhs_n(t) = sum_{t_j <= t} |dF/dw(t_j, S)|^p |dS_j|^p.
IsometryReport isometry_check(const CylindricalFunctional& F, const SampledPath& path,
                              const PartitionSequence& sequence, int p, std::span<const double> eval_times);

struct DecompositionLevel {
    int n = 0;
    /// Compensated integral M_n and remainder A_n = F(.,S) - F(0,S_0) - M_n.
    std::vector<double> M;
    std::vector<double> A;
    /// sum_{t_j <= t} |A_n(t_{j+1}) - A_n(t_j)|^p along the same partition.
    std::vector<double> A_variation;
};

struct DecompositionReport {
    std::string functional_id;
    int p = 2;
    Scheme scheme = Scheme::uniform;
    std::vector<double> eval_times;
    std::vector<DecompositionLevel> levels;
    /// Uniqueness needs [S]^p strictly increasing: the finest-level minimum
    /// increment over the eval grid (with 0 prepended) must be positive and
    /// must not decay across levels faster than 2^{-rate n} with rate 1/2.
    double min_increment_first = 0.0;
    double min_increment_last = 0.0;
    double decay_rate = 0.0;
    bool strictly_increasing = false;
    std::vector<std::string> warnings;

    const DecompositionLevel& level(int n) const;
};

DecompositionReport rough_smooth_decompose(const CylindricalFunctional& F, const SampledPath& path,
                                           const PartitionSequence& sequence, int p,
                                           std::span<const double> eval_times);

}  // namespace pathvar
