#include "pathvar/paths.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include "pathvar/errors.hpp"
#include "pathvar/fft.hpp"
#include "pathvar/random.hpp"

namespace pathvar {

namespace {

constexpr double kSnapTolerance = 1e-9;

double param_or(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

// Increments of unit-step fractional Gaussian noise by circulant embedding.
// Returns false when the embedding has a materially negative eigenvalue.
bool fgn_circulant(double hurst, std::size_t n, Engine& engine, std::vector<double>& out) {
    const std::size_t m = next_power_of_two(n);
    const std::size_t size = 2 * m;
    std::vector<std::complex<double>> row(size);
    for (std::size_t k = 0; k <= m; ++k) row[k] = fgn_autocovariance(hurst, k);
    for (std::size_t k = 1; k < m; ++k) row[size - k] = row[k];
    fft_inplace(row);

    std::vector<double> lambda(size);
    double largest = 0.0;
    for (std::size_t k = 0; k < size; ++k) largest = std::max(largest, std::abs(row[k].real()));
    for (std::size_t k = 0; k < size; ++k) {
        double l = row[k].real();
        if (l < 0.0) {
            if (l < -1e-10 * largest) return false;
            l = 0.0;
        }
        lambda[k] = l;
    }

    std::normal_distribution<double> normal;
    std::vector<std::complex<double>> w(size);
    const double denom_real = static_cast<double>(size);
    const double denom_complex = 2.0 * static_cast<double>(size);
    w[0] = std::sqrt(lambda[0] / denom_real) * normal(engine);
    w[m] = std::sqrt(lambda[m] / denom_real) * normal(engine);
    for (std::size_t k = 1; k < m; ++k) {
        const double scale = std::sqrt(lambda[k] / denom_complex);
        const double a = normal(engine);
        const double b = normal(engine);
        w[k] = {scale * a, scale * b};
        w[size - k] = std::conj(w[k]);
    }
    fft_inplace(w);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = w[i].real();
    return true;
}

// Exact synthesis by the Durbin-Levinson recursion, i.e. sequential
// conditioning on the Toeplitz covariance (the Cholesky factor applied row
// by row in O(n^2) time and O(n) memory).
void fgn_levinson(double hurst, std::size_t n, Engine& engine, std::vector<double>& out) {
    std::vector<double> gamma(n);
    for (std::size_t k = 0; k < n; ++k) gamma[k] = fgn_autocovariance(hurst, k);
    std::normal_distribution<double> normal;
    out.assign(n, 0.0);
    std::vector<double> phi(n, 0.0), prev(n, 0.0);
    double v = gamma[0];
    out[0] = std::sqrt(v) * normal(engine);
    for (std::size_t i = 1; i < n; ++i) {
        double acc = gamma[i];
        for (std::size_t j = 1; j < i; ++j) acc -= prev[j] * gamma[i - j];
        const double kappa = acc / v;
        phi[i] = kappa;
        for (std::size_t j = 1; j < i; ++j) phi[j] = prev[j] - kappa * prev[i - j];
        v *= (1.0 - kappa * kappa);
        if (!(v > 0.0)) throw NumericalError("fgn covariance is not positive definite");
        double mean = 0.0;
        for (std::size_t j = 1; j <= i; ++j) mean += phi[j] * out[i - j];
        out[i] = mean + std::sqrt(v) * normal(engine);
        std::copy(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(i) + 1, prev.begin());
    }
}

}  // namespace

SampledPath::SampledPath(double horizon, std::size_t dim, std::vector<double> values)
    : horizon_(horizon), dim_(dim), values_(std::move(values)) {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw ValidationError("path horizon must be positive");
    if (dim_ == 0) throw ValidationError("path dimension must be at least 1");
    if (values_.size() % dim_ != 0) throw ValidationError("path values are not a whole number of samples");
    if (values_.size() / dim_ < 2) throw ValidationError("path needs at least 2 samples");
    for (double v : values_)
        if (!std::isfinite(v)) throw ValidationError("path values must be finite");
}

double SampledPath::time(std::size_t i) const noexcept {
    if (i == num_steps()) return horizon_;
    return horizon_ * static_cast<double>(i) / static_cast<double>(num_steps());
}

std::pair<std::size_t, double> SampledPath::locate(double t) const {
    if (!(t >= -kSnapTolerance * step()) || !(t <= horizon_ + kSnapTolerance * step()))
        throw ValidationError("time outside [0, T]");
    const double u = t / horizon_ * static_cast<double>(num_steps());
    const double r = std::round(u);
    if (std::abs(u - r) < kSnapTolerance) {
        const auto i = static_cast<std::size_t>(r);
        if (i >= num_steps()) return {num_steps(), 0.0};
        return {i, 0.0};
    }
    auto i = static_cast<std::size_t>(std::floor(u));
    if (i >= num_steps()) return {num_steps(), 0.0};
    return {i, u - static_cast<double>(i)};
}

double SampledPath::at(double t, std::size_t coord) const {
    const auto [i, frac] = locate(t);
    if (frac == 0.0) return value(i, coord);
    const double a = value(i, coord);
    const double b = value(i + 1, coord);
    return a + frac * (b - a);
}

void SampledPath::at(double t, std::span<double> out) const {
    const auto [i, frac] = locate(t);
    for (std::size_t c = 0; c < dim_; ++c) {
        const double a = value(i, c);
        out[c] = frac == 0.0 ? a : a + frac * (value(i + 1, c) - a);
    }
}

std::vector<double> SampledPath::at_vector(double t) const {
    std::vector<double> out(dim_);
    at(t, out);
    return out;
}

SampledPath SampledPath::coordinate(std::size_t coord) const {
    if (coord >= dim_) throw ValidationError("coordinate index out of range");
    std::vector<double> v(num_samples());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = value(i, coord);
    return SampledPath(horizon_, 1, std::move(v));
}

SampledPath SampledPath::project(std::span<const double> direction) const {
    if (direction.size() != dim_) throw ValidationError("projection direction has wrong dimension");
    std::vector<double> v(num_samples(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t c = 0; c < dim_; ++c) v[i] += direction[c] * value(i, c);
    return SampledPath(horizon_, 1, std::move(v));
}

SampledPath SampledPath::scaled(double factor) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= factor;
    return SampledPath(horizon_, dim_, std::move(v));
}

double SampledPath::min_value(std::size_t coord) const {
    double m = value(0, coord);
    for (std::size_t i = 1; i < num_samples(); ++i) m = std::min(m, value(i, coord));
    return m;
}

double SampledPath::max_value(std::size_t coord) const {
    double m = value(0, coord);
    for (std::size_t i = 1; i < num_samples(); ++i) m = std::max(m, value(i, coord));
    return m;
}

double SampledPath::max_increment() const {
    double m = 0.0;
    for (std::size_t i = 0; i < num_steps(); ++i)
        for (std::size_t c = 0; c < dim_; ++c) m = std::max(m, std::abs(value(i + 1, c) - value(i, c)));
    return m;
}

StepPath::StepPath(std::vector<double> breakpoints, std::size_t dim, std::vector<double> interval_values,
                   std::vector<double> terminal_value)
    : breakpoints_(std::move(breakpoints)),
      dim_(dim),
      interval_values_(std::move(interval_values)),
      terminal_(std::move(terminal_value)) {
    if (breakpoints_.size() < 2) throw ValidationError("step path needs at least one interval");
    if (dim_ == 0 || terminal_.size() != dim_ || interval_values_.size() != dim_ * (breakpoints_.size() - 1))
        throw ValidationError("step path values have inconsistent sizes");
    for (std::size_t j = 1; j < breakpoints_.size(); ++j)
        if (!(breakpoints_[j] > breakpoints_[j - 1])) throw ValidationError("step breakpoints must increase");
}

double StepPath::at(double t, std::size_t coord) const {
    if (t >= breakpoints_.back()) return terminal_[coord];
    if (t <= breakpoints_.front()) return interval_values_[coord];
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    const auto j = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return interval_values_[j * dim_ + coord];
}

double StepPath::left_limit(double t, std::size_t coord) const {
    if (t <= breakpoints_.front()) return interval_values_[coord];
    if (t > breakpoints_.back()) return terminal_[coord];
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
    const auto j = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return interval_values_[j * dim_ + coord];
}

double fgn_autocovariance(double hurst, std::size_t lag) {
    const double h2 = 2.0 * hurst;
    const double k = static_cast<double>(lag);
    if (lag == 0) return 1.0;
    return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(k - 1.0, h2));
}

SampledPath generate_fbm(const FbmOptions& options) {
    const double hurst = options.hurst;
    if (!(hurst > 0.0 && hurst < 1.0)) throw ValidationError("hurst index must lie in (0, 1)");
    if (options.num_steps < 2) throw ValidationError("fbm needs at least 2 steps");
    if (options.dim == 0) throw ValidationError("fbm dimension must be at least 1");
    if (!(options.horizon > 0.0)) throw ValidationError("fbm horizon must be positive");

    const std::size_t n = options.num_steps;
    const std::size_t d = options.dim;
    const double scale = std::pow(options.horizon / static_cast<double>(n), hurst);
    std::vector<double> values((n + 1) * d, 0.0);
    std::vector<double> incr;
    for (std::size_t c = 0; c < d; ++c) {
        Engine engine = make_engine(derive_seed(options.seed, c));
        if (hurst == 0.5) {
            // White noise: the embedding is the identity, draw directly.
            std::normal_distribution<double> normal;
            incr.resize(n);
            for (double& x : incr) x = normal(engine);
        } else if (options.method == FbmMethod::cholesky) {
            if (n > kCholeskyMaxSteps) throw ValidationError("cholesky synthesis limited to 4096 steps");
            fgn_levinson(hurst, n, engine, incr);
        } else if (!fgn_circulant(hurst, n, engine, incr)) {
            if (options.method == FbmMethod::circulant || n > kCholeskyMaxSteps)
                throw NumericalError("circulant embedding is not positive semi-definite");
            engine = make_engine(derive_seed(options.seed, c));
            fgn_levinson(hurst, n, engine, incr);
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += scale * incr[i];
            values[(i + 1) * d + c] = acc;
        }
    }
    return SampledPath(options.horizon, d, std::move(values));
}

AnalyticKind parse_analytic_kind(const std::string& name) {
    if (name == "line") return AnalyticKind::line;
    if (name == "sine") return AnalyticKind::sine;
    if (name == "polynomial") return AnalyticKind::polynomial;
    if (name == "weierstrass") return AnalyticKind::weierstrass;
    throw ValidationError("unknown analytic path kind: " + name);
}

SampledPath generate_analytic(AnalyticKind kind, const std::map<std::string, double>& params, double horizon,
                              std::size_t num_steps) {
    if (num_steps < 2) throw ValidationError("analytic path needs at least 2 steps");
    if (!(horizon > 0.0)) throw ValidationError("analytic path horizon must be positive");

    std::function<double(double)> fn;
    switch (kind) {
        case AnalyticKind::line: {
            const double slope = param_or(params, "slope", 1.0);
            const double intercept = param_or(params, "intercept", 0.0);
            fn = [=](double t) { return intercept + slope * t; };
            break;
        }
        case AnalyticKind::sine: {
            const double amplitude = param_or(params, "amplitude", 1.0);
            const double frequency = param_or(params, "frequency", 1.0);
            const double phase = param_or(params, "phase", 0.0);
            const double offset = param_or(params, "offset", 0.0);
            fn = [=](double t) { return offset + amplitude * std::sin(2.0 * std::numbers::pi * frequency * t + phase); };
            break;
        }
        case AnalyticKind::polynomial: {
            std::vector<double> coeffs;
            for (std::size_t k = 0;; ++k) {
                auto it = params.find("c" + std::to_string(k));
                if (it == params.end()) break;
                coeffs.push_back(it->second);
            }
            if (coeffs.empty()) throw ValidationError("polynomial path needs coefficients c0, c1, ...");
            for (const auto& [key, value] : params)
                if (key.size() < 2 || key[0] != 'c' || std::stoul(key.substr(1)) >= coeffs.size())
                    throw ValidationError("polynomial coefficients must be named c0, c1, ... without gaps");
            fn = [coeffs](double t) {
                double acc = 0.0;
                for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
                return acc;
            };
            break;
        }
        case AnalyticKind::weierstrass: {
            const double a = param_or(params, "a", 0.5);
            const double b = param_or(params, "b", 3.0);
            const double terms = param_or(params, "terms", 20.0);
            if (!(a > 0.0 && a < 1.0)) throw ValidationError("weierstrass parameter a must lie in (0, 1)");
            if (!(b > 0.0)) throw ValidationError("weierstrass parameter b must be positive");
            if (!(terms >= 1.0) || terms != std::floor(terms)) throw ValidationError("weierstrass terms must be a positive integer");
            const auto count = static_cast<int>(terms);
            fn = [=](double t) {
                double acc = 0.0;
                double ak = 1.0;
                double bk = 1.0;
                for (int k = 0; k < count; ++k) {
                    acc += ak * std::cos(bk * std::numbers::pi * t);
                    ak *= a;
                    bk *= b;
                }
                return acc;
            };
            break;
        }
    }

    std::vector<double> values(num_steps + 1);
    for (std::size_t i = 0; i <= num_steps; ++i) {
        const double t = i == num_steps ? horizon : horizon * static_cast<double>(i) / static_cast<double>(num_steps);
        values[i] = fn(t);
    }
    return SampledPath(horizon, 1, std::move(values));
}

StepPath piecewise_constant_approx(const SampledPath& path, std::span<const double> partition_times) {
    if (partition_times.size() < 2) throw ValidationError("partition must contain at least two times");
    const std::size_t d = path.dim();
    std::vector<double> values((partition_times.size() - 1) * d);
    std::vector<double> buf(d);
    for (std::size_t j = 0; j + 1 < partition_times.size(); ++j) {
        path.at(partition_times[j + 1], buf);
        std::copy(buf.begin(), buf.end(), values.begin() + static_cast<std::ptrdiff_t>(j * d));
    }
    return StepPath(std::vector<double>(partition_times.begin(), partition_times.end()), d, std::move(values),
                    path.at_vector(path.horizon()));
}

double sup_distance(const StepPath& step, const SampledPath& path) {
    const auto bp = step.breakpoints();
    double sup = 0.0;
    const double dt = path.step();
    for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
        const auto val = step.interval_value(j);
        // Extremes of the linear interpolant on [t_j, t_{j+1}) sit at t_j or at
        // interior samples; the right end is the value itself.
        auto probe = [&](double s) {
            for (std::size_t c = 0; c < path.dim(); ++c) sup = std::max(sup, std::abs(val[c] - path.at(s, c)));
        };
        probe(bp[j]);
        const auto first = static_cast<std::size_t>(std::floor(bp[j] / dt)) + 1;
        for (std::size_t i = first; i < path.num_samples() && path.time(i) < bp[j + 1]; ++i) probe(path.time(i));
    }
    for (std::size_t c = 0; c < path.dim(); ++c)
        sup = std::max(sup, std::abs(step.terminal_value()[c] - path.at(path.horizon(), c)));
    return sup;
}

}  // namespace pathvar
