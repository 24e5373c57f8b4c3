#include "pathvar/tensors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <tuple>

#include "pathvar/errors.hpp"
#include "pathvar/random.hpp"

namespace pathvar {

namespace {

constexpr std::size_t kMaxOrder = 32;

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
}

void enumerate(std::size_t dim, std::size_t remaining, std::size_t pos, std::vector<std::uint8_t>& current,
               std::vector<std::uint8_t>& out) {
    if (pos + 1 == dim) {
        current[pos] = static_cast<std::uint8_t>(remaining);
        out.insert(out.end(), current.begin(), current.end());
        return;
    }
    for (std::size_t a = remaining + 1; a-- > 0;) {
        current[pos] = static_cast<std::uint8_t>(a);
        enumerate(dim, remaining - a, pos + 1, current, out);
    }
}

struct OuterEntry {
    std::uint32_t a, b, c;
    double weight;
};

struct ProductTable {
    std::vector<OuterEntry> entries;
};

using TableKey = std::tuple<std::size_t, std::size_t, std::size_t>;

template <typename Build>
std::shared_ptr<const ProductTable> cached_table(std::map<TableKey, std::shared_ptr<const ProductTable>>& cache,
                                                 std::mutex& mutex, TableKey key, Build build) {
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto table = std::make_shared<const ProductTable>(build());
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(table)).first->second;
}

// Entries (i_alpha, i_beta, i_{alpha+beta}) over all alpha of order l, beta of order k.
template <typename Weight>
ProductTable build_sum_table(std::size_t d, std::size_t l, std::size_t k, Weight weight) {
    const auto& A = multi_indices(d, l);
    const auto& B = multi_indices(d, k);
    const auto& C = multi_indices(d, l + k);
    ProductTable table;
    table.entries.reserve(A.size() * B.size());
    std::vector<std::uint8_t> gamma(d);
    for (std::size_t i = 0; i < A.size(); ++i) {
        const auto a = A.alpha(i);
        for (std::size_t j = 0; j < B.size(); ++j) {
            const auto b = B.alpha(j);
            for (std::size_t c = 0; c < d; ++c) gamma[c] = static_cast<std::uint8_t>(a[c] + b[c]);
            const std::size_t g = C.index_of(gamma);
            table.entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                     static_cast<std::uint32_t>(g), weight(A.multiplicity(i), B.multiplicity(j),
                                                                           C.multiplicity(g))});
        }
    }
    return table;
}

std::shared_ptr<const ProductTable> outer_table(std::size_t d, std::size_t l, std::size_t k) {
    static std::mutex mutex;
    static std::map<TableKey, std::shared_ptr<const ProductTable>> cache;
    return cached_table(cache, mutex, {d, l, k}, [&] {
        return build_sum_table(d, l, k, [](double ma, double mb, double mc) { return ma * mb / mc; });
    });
}

std::shared_ptr<const ProductTable> contract_table(std::size_t d, std::size_t l, std::size_t k) {
    static std::mutex mutex;
    static std::map<TableKey, std::shared_ptr<const ProductTable>> cache;
    // a = small index (order l), b = result index (order k - l), c = big index.
    return cached_table(cache, mutex, {d, l, k}, [&] {
        return build_sum_table(d, l, k - l, [](double ma, double, double) { return ma; });
    });
}

}  // namespace

MultiIndexSet::MultiIndexSet(std::size_t dim, std::size_t order) : dim_(dim), order_(order) {
    if (dim == 0) throw ValidationError("tensor dimension must be at least 1");
    if (order > kMaxOrder) throw ValidationError("tensor order too large");
    if (dim > 64) throw ValidationError("tensor dimension too large");
    std::vector<std::uint8_t> current(dim);
    enumerate(dim, order, 0, current, alphas_);
    const std::size_t count = alphas_.size() / dim;
    const double kfact = factorial(order);
    multiplicity_.resize(count);
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed(count);
    for (std::size_t i = 0; i < count; ++i) {
        double denom = 1.0;
        for (auto a : alpha(i)) denom *= factorial(a);
        multiplicity_[i] = std::round(kfact / denom);
        keyed[i] = {key(alpha(i)), i};
    }
    std::sort(keyed.begin(), keyed.end());
    sorted_keys_.resize(count);
    sorted_pos_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        sorted_keys_[i] = keyed[i].first;
        sorted_pos_[i] = keyed[i].second;
    }
}

std::uint64_t MultiIndexSet::key(std::span<const std::uint8_t> alpha) const noexcept {
    // Base (order + 1) digits; collisions are impossible while the key fits.
    std::uint64_t k = 0;
    for (auto a : alpha) k = k * (order_ + 1) + a;
    return k;
}

std::size_t MultiIndexSet::index_of(std::span<const std::uint8_t> alpha) const {
    if (alpha.size() != dim_) throw ValidationError("multi-index has wrong dimension");
    std::size_t total = 0;
    for (auto a : alpha) total += a;
    if (total != order_) throw ValidationError("multi-index has wrong order");
    const auto k = key(alpha);
    auto it = std::lower_bound(sorted_keys_.begin(), sorted_keys_.end(), k);
    return sorted_pos_[static_cast<std::size_t>(it - sorted_keys_.begin())];
}

std::size_t MultiIndexSet::index_of_tuple(std::span<const std::size_t> tuple) const {
    std::vector<std::uint8_t> alpha(dim_, 0);
    for (auto i : tuple) {
        if (i >= dim_) throw ValidationError("tensor index out of range");
        ++alpha[i];
    }
    return index_of(alpha);
}

const MultiIndexSet& multi_indices(std::size_t dim, std::size_t order) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<MultiIndexSet>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{dim, order}];
    if (!slot) slot = std::make_unique<MultiIndexSet>(dim, order);
    return *slot;
}

std::size_t sym_size(std::size_t dim, std::size_t order) {
    return static_cast<std::size_t>(binomial(order + dim - 1, dim - 1));
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

SymTensor::SymTensor(std::size_t dim, std::size_t order)
    : dim_(dim), order_(order), set_(&multi_indices(dim, order)), coeffs_(set_->size(), 0.0) {}

SymTensor::SymTensor(std::size_t dim, std::size_t order, std::vector<double> coefficients)
    : dim_(dim), order_(order), set_(&multi_indices(dim, order)), coeffs_(std::move(coefficients)) {
    if (coeffs_.size() != set_->size())
        throw ValidationError("coefficient count does not match C(k+d-1, d-1)");
}

SymTensor SymTensor::scalar(double value, std::size_t dim) { return SymTensor(dim, 0, {value}); }

double SymTensor::at(std::span<const std::uint8_t> alpha) const { return coeffs_[indices().index_of(alpha)]; }
double& SymTensor::at(std::span<const std::uint8_t> alpha) { return coeffs_[indices().index_of(alpha)]; }

double SymTensor::value() const {
    if (order_ != 0) throw ValidationError("value() requires an order-0 tensor");
    return coeffs_[0];
}

void SymTensor::check_compatible(const SymTensor& other) const {
    if (dim_ != other.dim_ || order_ != other.order_) throw ValidationError("tensor order or dimension mismatch");
}

SymTensor& SymTensor::operator+=(const SymTensor& other) {
    check_compatible(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& other) {
    check_compatible(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SymTensor& SymTensor::operator*=(double factor) noexcept {
    for (double& c : coeffs_) c *= factor;
    return *this;
}

SymTensor& SymTensor::add_scaled(const SymTensor& other, double factor) {
    check_compatible(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += factor * other.coeffs_[i];
    return *this;
}

double SymTensor::max_abs() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double SymTensor::norm() const { return std::sqrt(pairing(*this, *this)); }

SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
SymTensor operator*(double factor, SymTensor a) { return a *= factor; }

void add_sym_power(SymTensor& out, std::span<const double> v, double factor) {
    if (v.size() != out.dim()) throw ValidationError("vector dimension does not match tensor");
    const auto& set = out.indices();
    const std::size_t d = v.size();
    if (d == 1) {
        double x = factor;
        for (std::size_t i = 0; i < out.order(); ++i) x *= v[0];
        out[0] += x;
        return;
    }
    // Powers table v_c^a, a <= k.
    const std::size_t k = out.order();
    std::vector<double> powers(d * (k + 1));
    for (std::size_t c = 0; c < d; ++c) {
        powers[c * (k + 1)] = 1.0;
        for (std::size_t a = 1; a <= k; ++a) powers[c * (k + 1) + a] = powers[c * (k + 1) + a - 1] * v[c];
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto alpha = set.alpha(i);
        double x = factor;
        for (std::size_t c = 0; c < d; ++c) x *= powers[c * (k + 1) + alpha[c]];
        out[i] += x;
    }
}

SymTensor sym_power(std::span<const double> v, std::size_t order) {
    if (v.empty()) throw ValidationError("sym_power needs a non-empty vector");
    SymTensor out(v.size(), order);
    add_sym_power(out, v, 1.0);
    return out;
}

double pairing(const SymTensor& a, const SymTensor& b) {
    if (a.dim() != b.dim() || a.order() != b.order()) throw ValidationError("pairing needs equal order and dimension");
    const auto& set = a.indices();
    double s = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) s += set.multiplicity(i) * a[i] * b[i];
    return s;
}

double evaluate_form(const SymTensor& t, std::span<const double> v) {
    if (v.size() != t.dim()) throw ValidationError("vector dimension does not match tensor");
    if (t.dim() == 1) return t[0] * std::pow(v[0], static_cast<double>(t.order()));
    const auto& set = t.indices();
    double s = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        double x = set.multiplicity(i) * t[i];
        const auto alpha = set.alpha(i);
        for (std::size_t c = 0; c < v.size(); ++c)
            for (std::uint8_t a = 0; a < alpha[c]; ++a) x *= v[c];
        s += x;
    }
    return s;
}

SymTensor sym_outer(const SymTensor& a, const SymTensor& b) {
    if (a.dim() != b.dim()) throw ValidationError("sym_outer needs equal dimensions");
    SymTensor out(a.dim(), a.order() + b.order());
    if (a.dim() == 1) {
        out[0] = a[0] * b[0];
        return out;
    }
    const auto table = outer_table(a.dim(), a.order(), b.order());
    for (const auto& e : table->entries) out[e.c] += e.weight * a[e.a] * b[e.b];
    return out;
}

SymTensor contract(const SymTensor& small, const SymTensor& big) {
    if (small.dim() != big.dim()) throw ValidationError("contract needs equal dimensions");
    if (small.order() > big.order()) throw ValidationError("contract needs order(small) <= order(big)");
    SymTensor out(big.dim(), big.order() - small.order());
    if (big.dim() == 1) {
        out[0] = small[0] * big[0];
        return out;
    }
    const auto table = contract_table(big.dim(), small.order(), big.order());
    for (const auto& e : table->entries) out[e.b] += e.weight * small[e.a] * big[e.c];
    return out;
}

RawTensor::RawTensor(std::size_t dim_, std::size_t order_) : dim(dim_), order(order_) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < order; ++i) n *= dim;
    data.assign(n, 0.0);
}

std::size_t RawTensor::flat_index(std::span<const std::size_t> tuple) const {
    std::size_t f = 0;
    for (auto i : tuple) f = f * dim + i;
    return f;
}

std::vector<std::size_t> RawTensor::tuple(std::size_t flat) const {
    std::vector<std::size_t> t(order);
    for (std::size_t j = order; j-- > 0;) {
        t[j] = flat % dim;
        flat /= dim;
    }
    return t;
}

RawTensor to_dense(const SymTensor& t) {
    RawTensor out(t.dim(), t.order());
    const auto& set = t.indices();
    for (std::size_t f = 0; f < out.data.size(); ++f) out.data[f] = t[set.index_of_tuple(out.tuple(f))];
    return out;
}

SymTensor symmetrize(const RawTensor& t) {
    SymTensor out(t.dim, t.order);
    const auto& set = out.indices();
    for (std::size_t f = 0; f < t.data.size(); ++f) out[set.index_of_tuple(t.tuple(f))] += t.data[f];
    for (std::size_t i = 0; i < set.size(); ++i) out[i] /= set.multiplicity(i);
    return out;
}

RawTensor outer(const RawTensor& a, const RawTensor& b) {
    if (a.dim != b.dim) throw ValidationError("outer product needs equal dimensions");
    RawTensor out(a.dim, a.order + b.order);
    for (std::size_t i = 0; i < a.data.size(); ++i)
        for (std::size_t j = 0; j < b.data.size(); ++j) out.data[i * b.data.size() + j] = a.data[i] * b.data[j];
    return out;
}

PositivityResult is_positive(const SymTensor& t, std::size_t directions, std::uint64_t seed) {
    if (t.order() % 2 != 0) throw ValidationError("positivity is defined for even orders only");
    const std::size_t d = t.dim();
    PositivityResult result;
    result.min_value = std::numeric_limits<double>::infinity();
    std::vector<double> w(d);
    auto test = [&](const std::vector<double>& dir) {
        const double value = evaluate_form(t, dir);
        ++result.directions_tested;
        if (value < result.min_value) {
            result.min_value = value;
            if (value < 0.0) result.witness = dir;
        }
    };
    for (std::size_t c = 0; c < d; ++c) {
        std::fill(w.begin(), w.end(), 0.0);
        w[c] = 1.0;
        test(w);
    }
    Engine engine = make_engine(seed);
    std::normal_distribution<double> normal;
    for (std::size_t m = 0; m < directions; ++m) {
        double norm2 = 0.0;
        for (double& x : w) {
            x = normal(engine);
            norm2 += x * x;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& x : w) x *= inv;
        test(w);
    }
    // Forms of exact positive tensors can evaluate to tiny negatives along
    // their null directions; only violations beyond rounding count.
    double scale = 0.0;
    const auto& set = t.indices();
    for (std::size_t i = 0; i < set.size(); ++i) scale += set.multiplicity(i) * std::abs(t[i]);
    result.positive = !(result.min_value < -1e-12 * scale);
    if (result.positive) result.witness.clear();
    return result;
}

GradedTensor::GradedTensor(std::size_t dim, std::size_t depth) : dim_(dim) {
    for (std::size_t k = 0; k <= depth; ++k) levels_.emplace_back(dim, k);
}

GradedTensor::GradedTensor(std::vector<SymTensor> levels) : dim_(levels.empty() ? 1 : levels[0].dim()), levels_(std::move(levels)) {
    if (levels_.empty()) throw ValidationError("graded tensor needs level 0");
    for (std::size_t k = 0; k < levels_.size(); ++k)
        if (levels_[k].order() != k || levels_[k].dim() != dim_) throw ValidationError("graded tensor level mismatch");
}

GradedTensor GradedTensor::operator*(const GradedTensor& other) const {
    if (dim_ != other.dim_ || depth() != other.depth()) throw ValidationError("graded tensors differ in shape");
    GradedTensor out(dim_, depth());
    for (std::size_t k = 0; k <= depth(); ++k)
        for (std::size_t l = 0; l <= k; ++l) out.levels_[k] += sym_outer(levels_[l], other.levels_[k - l]);
    return out;
}

std::vector<std::vector<std::size_t>> shuffles(std::size_t l, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> current;
    const std::size_t n = l + k;
    // Choose the l positions of the first word among n slots, in order.
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (current.size() == l) {
            out.push_back(current);
            return;
        }
        for (std::size_t p = start; p + (l - current.size()) <= n; ++p) {
            current.push_back(p);
            self(self, p + 1);
            current.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

std::string multi_index_key(std::span<const std::uint8_t> alpha) {
    std::string s;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(alpha[i]);
    }
    return s;
}

}  // namespace pathvar
