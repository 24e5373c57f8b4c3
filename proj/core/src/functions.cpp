#include "pathvar/functions.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "pathvar/errors.hpp"

namespace pathvar {

namespace {

constexpr int kAnalyticOrder = 32;

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// i! / (i - k)!
double falling(int i, int k) {
    double r = 1.0;
    for (int j = 0; j < k; ++j) r *= static_cast<double>(i - j);
    return r;
}

double factorial(int n) { return falling(n, n); }

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

class ScalarFunction : public SmoothFunction {
public:
    std::size_t dim() const noexcept override { return 1; }
    double value(std::span<const double> x) const override {
        check_point(x);
        return value1(x[0]);
    }
    SymTensor derivative(int k, std::span<const double> x) const override {
        check_order(k);
        check_point(x);
        return SymTensor(1, static_cast<std::size_t>(k), {derivative1(k, x[0])});
    }
    double value1(double x) const override = 0;
    double derivative1(int k, double x) const override = 0;

    StieltjesMeasure derivative_measure(int q) const override {
        if (q < 0) throw ValidationError("measure order must be non-negative");
        check_order(q + 1);
        StieltjesMeasure m;
        m.density = [self = this, q](double x) { return self->derivative1(q + 1, x); };
        return m;
    }
};

class Polynomial final : public ScalarFunction {
public:
    Polynomial(std::vector<double> coeffs, std::string id) : coeffs_(std::move(coeffs)), id_(std::move(id)) {
        if (coeffs_.empty()) coeffs_.push_back(0.0);
    }
    int max_order() const noexcept override { return kAnalyticOrder; }
    std::string id() const override { return id_; }
    double value1(double x) const override { return derivative1(0, x); }
    double derivative1(int k, double x) const override {
        check_order(k);
        const int deg = static_cast<int>(coeffs_.size()) - 1;
        if (k > deg) return 0.0;
        double acc = 0.0;
        for (int i = deg; i >= k; --i) acc = acc * x + coeffs_[static_cast<std::size_t>(i)] * falling(i, k);
        return acc;
    }

private:
    std::vector<double> coeffs_;
    std::string id_;
};

class Monomial final : public ScalarFunction {
public:
    explicit Monomial(int m) : m_(m) {
        if (m < 0) throw ValidationError("monomial degree must be non-negative");
    }
    int max_order() const noexcept override { return kAnalyticOrder; }
    std::string id() const override { return "monomial:m=" + std::to_string(m_); }
    double value1(double x) const override { return ipow(x, m_); }
    double derivative1(int k, double x) const override {
        check_order(k);
        if (k > m_) return 0.0;
        return falling(m_, k) * ipow(x, m_ - k);
    }

private:
    int m_;
};

class Ramp final : public ScalarFunction {
public:
    Ramp(double a, int m) : a_(a), m_(m) {
        if (m < 1) throw ValidationError("ramp order m must be at least 1");
    }
    int max_order() const noexcept override { return m_; }
    std::string id() const override { return "ramp:a=" + format_number(a_) + ",m=" + std::to_string(m_); }
    double value1(double x) const override { return derivative1(0, x); }
    double derivative1(int k, double x) const override {
        check_order(k);
        if (k == m_) return x >= a_ ? 1.0 : 0.0;
        if (x <= a_) return 0.0;
        return ipow(x - a_, m_ - k) / factorial(m_ - k);
    }
    StieltjesMeasure derivative_measure(int q) const override {
        if (q < 0) throw ValidationError("measure order must be non-negative");
        StieltjesMeasure m;
        if (q > m_) return m;
        if (q == m_) {
            m.point_masses.push_back({a_, 1.0});
        } else if (q == m_ - 1) {
            m.indicators.push_back({a_, std::numeric_limits<double>::infinity(), 1.0});
        } else {
            const int power = m_ - q - 1;
            const double a = a_;
            const double norm = factorial(power);
            m.density = [a, power, norm](double x) { return x <= a ? 0.0 : ipow(x - a, power) / norm; };
            m.breakpoints.push_back(a_);
        }
        return m;
    }

private:
    double a_;
    int m_;
};

class ElementaryFunction final : public SmoothFunction {
public:
    ElementaryFunction(Elementary kind, std::vector<double> w, double phase, double scale)
        : kind_(kind), w_(std::move(w)), phase_(phase), scale_(scale) {
        if (w_.empty()) throw ValidationError("elementary function needs a frequency vector");
    }
    std::size_t dim() const noexcept override { return w_.size(); }
    int max_order() const noexcept override { return kAnalyticOrder; }
    std::string id() const override {
        std::string s = kind_ == Elementary::cos ? "cos" : kind_ == Elementary::sin ? "sin" : "exp";
        s += ":";
        if (w_.size() == 1) {
            s += "w=" + format_number(w_[0]);
        } else {
            for (std::size_t i = 0; i < w_.size(); ++i)
                s += (i ? ",w" : "w") + std::to_string(i) + "=" + format_number(w_[i]);
        }
        return s + ",phase=" + format_number(phase_) + ",scale=" + format_number(scale_);
    }
    double value(std::span<const double> x) const override {
        check_point(x);
        return scale_ * phi(0, argument(x));
    }
    SymTensor derivative(int k, std::span<const double> x) const override {
        check_order(k);
        check_point(x);
        SymTensor out = sym_power(w_, static_cast<std::size_t>(k));
        out *= scale_ * phi(k, argument(x));
        return out;
    }
    double value1(double x) const override { return scale_ * phi(0, w_[0] * x + phase_); }
    double derivative1(int k, double x) const override {
        check_order(k);
        return scale_ * ipow(w_[0], k) * phi(k, w_[0] * x + phase_);
    }
    StieltjesMeasure derivative_measure(int q) const override {
        if (dim() != 1) throw ValidationError("derivative measures are defined for scalar functions");
        if (q < 0) throw ValidationError("measure order must be non-negative");
        StieltjesMeasure m;
        m.density = [this, q](double x) { return derivative1(q + 1, x); };
        return m;
    }

private:
    double argument(std::span<const double> x) const {
        double u = phase_;
        for (std::size_t i = 0; i < w_.size(); ++i) u += w_[i] * x[i];
        return u;
    }
    double phi(int k, double u) const {
        switch (kind_) {
            case Elementary::exp:
                return std::exp(u);
            case Elementary::cos:
                switch (k % 4) {
                    case 0: return std::cos(u);
                    case 1: return -std::sin(u);
                    case 2: return -std::cos(u);
                    default: return std::sin(u);
                }
            case Elementary::sin:
                switch (k % 4) {
                    case 0: return std::sin(u);
                    case 1: return std::cos(u);
                    case 2: return -std::sin(u);
                    default: return -std::cos(u);
                }
        }
        return 0.0;
    }

    Elementary kind_;
    std::vector<double> w_;
    double phase_;
    double scale_;
};

class Quadratic final : public SmoothFunction {
public:
    Quadratic(std::size_t d, std::vector<double> a, std::vector<double> b, double c)
        : d_(d), a_(std::move(a)), b_(std::move(b)), c_(c) {
        if (d_ == 0) throw ValidationError("quadratic form dimension must be at least 1");
        if (a_.size() != d_ * d_) throw ValidationError("quadratic form matrix must be d x d");
        if (b_.empty()) b_.assign(d_, 0.0);
        if (b_.size() != d_) throw ValidationError("quadratic form linear part must have d entries");
        for (std::size_t i = 0; i < d_; ++i)
            for (std::size_t j = 0; j < i; ++j) {
                if (a_[i * d_ + j] != a_[j * d_ + i]) throw ValidationError("quadratic form matrix must be symmetric");
            }
    }
    std::size_t dim() const noexcept override { return d_; }
    int max_order() const noexcept override { return kAnalyticOrder; }
    std::string id() const override {
        std::string s = "quadratic:dim=" + std::to_string(d_);
        for (std::size_t i = 0; i < d_; ++i)
            for (std::size_t j = i; j < d_; ++j)
                s += ",a" + std::to_string(i) + std::to_string(j) + "=" + format_number(a_[i * d_ + j]);
        for (std::size_t i = 0; i < d_; ++i) s += ",b" + std::to_string(i) + "=" + format_number(b_[i]);
        return s + ",c=" + format_number(c_);
    }
    double value(std::span<const double> x) const override {
        check_point(x);
        double v = c_;
        for (std::size_t i = 0; i < d_; ++i) {
            v += b_[i] * x[i];
            for (std::size_t j = 0; j < d_; ++j) v += x[i] * a_[i * d_ + j] * x[j];
        }
        return v;
    }
    SymTensor derivative(int k, std::span<const double> x) const override {
        check_order(k);
        check_point(x);
        SymTensor out(d_, static_cast<std::size_t>(k));
        if (k == 0) {
            out[0] = value(x);
        } else if (k == 1) {
            std::vector<std::uint8_t> alpha(d_, 0);
            for (std::size_t i = 0; i < d_; ++i) {
                double g = b_[i];
                for (std::size_t j = 0; j < d_; ++j) g += 2.0 * a_[i * d_ + j] * x[j];
                alpha.assign(d_, 0);
                alpha[i] = 1;
                out.at(alpha) = g;
            }
        } else if (k == 2) {
            std::vector<std::uint8_t> alpha(d_, 0);
            for (std::size_t i = 0; i < d_; ++i)
                for (std::size_t j = i; j < d_; ++j) {
                    alpha.assign(d_, 0);
                    ++alpha[i];
                    ++alpha[j];
                    out.at(alpha) = 2.0 * a_[i * d_ + j];
                }
        }
        return out;
    }

private:
    std::size_t d_;
    std::vector<double> a_;
    std::vector<double> b_;
    double c_;
};

int as_int(double v, const std::string& what) {
    if (v != std::floor(v) || std::abs(v) > 1e6) throw ValidationError(what + " must be an integer");
    return static_cast<int>(v);
}

}  // namespace

StieltjesMeasure SmoothFunction::derivative_measure(int) const {
    throw ValidationError("function " + id() + " has no exact derivative measure");
}

void SmoothFunction::check_order(int k) const {
    if (k < 0) throw ValidationError("derivative order must be non-negative");
    if (k > max_order())
        throw ValidationError("function " + id() + " has derivatives only up to order " + std::to_string(max_order()));
}

void SmoothFunction::check_point(std::span<const double> x) const {
    if (x.size() != dim()) throw ValidationError("point dimension does not match function " + id());
}

FunctionPtr make_monomial(int m) { return std::make_shared<Monomial>(m); }

FunctionPtr make_polynomial(std::vector<double> coefficients) {
    std::string id = "polynomial:";
    for (std::size_t i = 0; i < coefficients.size(); ++i)
        id += (i ? ",c" : "c") + std::to_string(i) + "=" + format_number(coefficients[i]);
    return std::make_shared<Polynomial>(std::move(coefficients), id);
}

FunctionPtr make_elementary(Elementary kind, std::vector<double> w, double phase, double scale) {
    return std::make_shared<ElementaryFunction>(kind, std::move(w), phase, scale);
}

FunctionPtr make_ramp(double a, int m) { return std::make_shared<Ramp>(a, m); }

FunctionPtr make_quadratic(std::size_t dim, std::vector<double> a, std::vector<double> b, double c) {
    return std::make_shared<Quadratic>(dim, std::move(a), std::move(b), c);
}

std::pair<std::string, std::vector<std::pair<std::string, double>>> parse_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    if (name.empty()) throw ValidationError("empty specification");
    std::vector<std::pair<std::string, double>> params;
    if (colon == std::string::npos) return {name, params};
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    std::set<std::string> seen;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ValidationError("malformed parameter '" + item + "' in " + spec);
        std::string key = item.substr(0, eq);
        const std::string text = item.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            throw ValidationError("parameter " + key + " is not a number: " + text);
        }
        if (used != text.size() || !std::isfinite(v)) throw ValidationError("parameter " + key + " is not a number: " + text);
        if (!seen.insert(key).second) throw ValidationError("duplicate parameter " + key);
        params.emplace_back(std::move(key), v);
    }
    return {name, params};
}

FunctionPtr parse_function(const std::string& spec, int default_ramp_order) {
    const auto [name, list] = parse_spec(spec);
    std::map<std::string, double> params(list.begin(), list.end());
    std::set<std::string> used;
    auto get = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        if (it == params.end()) return fallback;
        used.insert(key);
        return it->second;
    };
    auto indexed = [&](const std::string& prefix) {
        std::vector<double> v;
        for (std::size_t i = 0;; ++i) {
            auto it = params.find(prefix + std::to_string(i));
            if (it == params.end()) break;
            used.insert(it->first);
            v.push_back(it->second);
        }
        return v;
    };
    auto finish = [&](FunctionPtr f) {
        for (const auto& kv : params)
            if (!used.count(kv.first)) throw ValidationError("unknown parameter '" + kv.first + "' for function " + name);
        return f;
    };

    if (name == "x") return finish(make_monomial(1));
    if (name == "square") return finish(make_monomial(2));
    if (name == "monomial") return finish(make_monomial(as_int(get("m", 1.0), "monomial degree m")));
    if (name == "polynomial") {
        auto c = indexed("c");
        if (c.empty()) throw ValidationError("polynomial needs coefficients c0, c1, ...");
        return finish(make_polynomial(std::move(c)));
    }
    if (name == "cos" || name == "sin" || name == "exp") {
        const Elementary kind = name == "cos" ? Elementary::cos : name == "sin" ? Elementary::sin : Elementary::exp;
        std::vector<double> w = indexed("w");
        if (w.empty()) w.push_back(get("w", 1.0));
        return finish(make_elementary(kind, std::move(w), get("phase", 0.0), get("scale", 1.0)));
    }
    if (name == "ramp") {
        return finish(make_ramp(get("a", 0.0), as_int(get("m", default_ramp_order), "ramp order m")));
    }
    if (name == "quadratic") {
        const int d = as_int(get("dim", 1.0), "quadratic dim");
        if (d < 1 || d > 9) throw ValidationError("quadratic dim must be in 1..9");
        const auto du = static_cast<std::size_t>(d);
        std::vector<double> a(du * du, 0.0), b(du, 0.0);
        for (std::size_t i = 0; i < du; ++i) {
            b[i] = get("b" + std::to_string(i), 0.0);
            for (std::size_t j = i; j < du; ++j) {
                const double v = get("a" + std::to_string(i) + std::to_string(j), i == j ? 1.0 : 0.0);
                a[i * du + j] = a[j * du + i] = v;
            }
        }
        return finish(make_quadratic(du, std::move(a), std::move(b), get("c", 0.0)));
    }
    throw ValidationError("unknown function: " + name);
}

}  // namespace pathvar
