#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pathvar/tensors.hpp"

namespace pathvar {

/// Stieltjes measure df^{(q)} on R as a finite combination of
///   point masses w * delta_a,
///   indicator densities w * 1_{[a, b)}(x) dx  (b may be +inf),
///   a smooth density g(x) dx, smooth away from the listed breakpoints.
struct StieltjesMeasure {
    struct PointMass {
        double at;
        double weight;
    };
    struct Indicator {
        double from;
        double to;
        double weight;
    };
    std::vector<PointMass> point_masses;
    std::vector<Indicator> indicators;
    /// May refer to the function it came from; keep that function alive.
    std::function<double(double)> density;
    std::vector<double> breakpoints;

    bool empty() const noexcept { return point_masses.empty() && indicators.empty() && !density; }
};

/// f : R^d -> R with closed-form derivatives. Derivatives of order k are
/// symmetric tensors of order k; scalar functions also expose fast scalar paths.
class SmoothFunction {
public:
    virtual ~SmoothFunction() = default;

    virtual std::size_t dim() const noexcept = 0;
    /// Highest derivative order available in closed form.
    virtual int max_order() const noexcept = 0;
    virtual std::string id() const = 0;

    virtual double value(std::span<const double> x) const = 0;
    virtual SymTensor derivative(int k, std::span<const double> x) const = 0;

    virtual double value1(double x) const { return value({&x, 1}); }
    virtual double derivative1(int k, double x) const { return derivative(k, {&x, 1})[0]; }

    /// df^{(q)} for scalar functions. Throws ValidationError when the family
    /// has no exact representation for this q.
    virtual StieltjesMeasure derivative_measure(int q) const;

protected:
    void check_order(int k) const;
    void check_point(std::span<const double> x) const;
};

using FunctionPtr = std::shared_ptr<const SmoothFunction>;

/// x^m.
FunctionPtr make_monomial(int m);
/// sum_i c_i x^i.
FunctionPtr make_polynomial(std::vector<double> coefficients);
/// scale * phi(w . x + phase), phi in {cos, sin, exp}.
enum class Elementary { cos, sin, exp };
FunctionPtr make_elementary(Elementary kind, std::vector<double> w, double phase = 0.0, double scale = 1.0);
/// ((x - a)^+)^m / m!; the m-th derivative is the right-continuous 1_{x >= a}.
FunctionPtr make_ramp(double a, int m);
/// x^T A x + b . x + c with symmetric A (row-major d x d).
FunctionPtr make_quadratic(std::size_t dim, std::vector<double> a, std::vector<double> b = {}, double c = 0.0);

/// Parses "name:key=value,...". Names: monomial (m), polynomial (c0, c1, ...),
/// x, square, cos/sin/exp (w or w0..w{d-1}, phase, scale), ramp (a, m),
/// quadratic (dim, aij, bi, c). A ramp without m gets default_ramp_order.
FunctionPtr parse_function(const std::string& spec, int default_ramp_order = 1);

/// "name:k=v,..." split into name and ordered (key, value) pairs.
std::pair<std::string, std::vector<std::pair<std::string, double>>> parse_spec(const std::string& spec);

}  // namespace pathvar
