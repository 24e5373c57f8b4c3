#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pathvar {

/// All multi-indices alpha in N^d with |alpha| = k, in a fixed order
/// (lexicographically decreasing). Shared, immutable, cached per (d, k).
class MultiIndexSet {
public:
    MultiIndexSet(std::size_t dim, std::size_t order);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t order() const noexcept { return order_; }
    std::size_t size() const noexcept { return multiplicity_.size(); }
    std::span<const std::uint8_t> alpha(std::size_t i) const noexcept { return {alphas_.data() + i * dim_, dim_}; }
    /// Number of index tuples (i_1..i_k) with counts alpha: k! / prod alpha_j!.
    double multiplicity(std::size_t i) const noexcept { return multiplicity_[i]; }
    std::size_t index_of(std::span<const std::uint8_t> alpha) const;
    /// Position of the class of a raw index tuple (i_1..i_k), entries < dim.
    std::size_t index_of_tuple(std::span<const std::size_t> tuple) const;

private:
    std::uint64_t key(std::span<const std::uint8_t> alpha) const noexcept;

    std::size_t dim_;
    std::size_t order_;
    std::vector<std::uint8_t> alphas_;
    std::vector<double> multiplicity_;
    std::vector<std::uint64_t> sorted_keys_;
    std::vector<std::size_t> sorted_pos_;
};

const MultiIndexSet& multi_indices(std::size_t dim, std::size_t order);

/// Number of monomials of degree k in d variables, C(k+d-1, d-1).
std::size_t sym_size(std::size_t dim, std::size_t order);

/// Symmetric order-k tensor over R^d in packed storage: one coefficient T_alpha
/// per multi-index, equal to the (common) entry T_{i_1..i_k} of every index
/// tuple in the class alpha.
class SymTensor {
public:
    SymTensor() : SymTensor(1, 0) {}
    SymTensor(std::size_t dim, std::size_t order);
    SymTensor(std::size_t dim, std::size_t order, std::vector<double> coefficients);

    static SymTensor scalar(double value, std::size_t dim = 1);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t order() const noexcept { return order_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    const MultiIndexSet& indices() const noexcept { return *set_; }

    double& operator[](std::size_t i) noexcept { return coeffs_[i]; }
    double operator[](std::size_t i) const noexcept { return coeffs_[i]; }
    double at(std::span<const std::uint8_t> alpha) const;
    double& at(std::span<const std::uint8_t> alpha);
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    std::span<double> coefficients() noexcept { return coeffs_; }

    /// Order-0 value.
    double value() const;

    SymTensor& operator+=(const SymTensor& other);
    SymTensor& operator-=(const SymTensor& other);
    SymTensor& operator*=(double factor) noexcept;
    /// this += factor * other
    SymTensor& add_scaled(const SymTensor& other, double factor);

    /// Largest absolute coefficient.
    double max_abs() const noexcept;
    /// Frobenius norm of the dense tensor, sqrt(sum mult * T_alpha^2).
    double norm() const;

    bool operator==(const SymTensor& other) const = default;

private:
    void check_compatible(const SymTensor& other) const;

    std::size_t dim_;
    std::size_t order_;
    const MultiIndexSet* set_;
    std::vector<double> coeffs_;
};

SymTensor operator+(SymTensor a, const SymTensor& b);
SymTensor operator-(SymTensor a, const SymTensor& b);
SymTensor operator*(double factor, SymTensor a);

/// v^{(x)k}: coefficients prod_i v_i^{alpha_i}.
SymTensor sym_power(std::span<const double> v, std::size_t order);
/// Accumulates factor * v^{(x)k} into out.
void add_sym_power(SymTensor& out, std::span<const double> v, double factor);

/// Full contraction <T, P> = sum over index tuples T_i P_i.
double pairing(const SymTensor& a, const SymTensor& b);

/// <T, v^{(x)k}> = sum_alpha mult(alpha) T_alpha v^alpha.
double evaluate_form(const SymTensor& t, std::span<const double> v);

/// Sym(A (x) B).
SymTensor sym_outer(const SymTensor& a, const SymTensor& b);

/// Contraction of the first l slots of an order-k tensor with an order-l
/// tensor, giving order k - l: R_beta = sum_alpha mult(alpha) A_alpha B_{alpha+beta}.
SymTensor contract(const SymTensor& small, const SymTensor& big);

/// Dense tensor with d^k entries, index (i_1..i_k) at sum_j i_j d^{k-j}.
struct RawTensor {
    std::size_t dim = 1;
    std::size_t order = 0;
    std::vector<double> data;

    RawTensor() : data(1, 0.0) {}
    RawTensor(std::size_t dim, std::size_t order);
    std::size_t flat_index(std::span<const std::size_t> tuple) const;
    std::vector<std::size_t> tuple(std::size_t flat) const;
};

RawTensor to_dense(const SymTensor& t);
/// Average over all permutations of the index slots.
SymTensor symmetrize(const RawTensor& t);
RawTensor outer(const RawTensor& a, const RawTensor& b);

struct PositivityResult {
    bool positive = true;
    /// Direction with the most negative form value (valid when !positive).
    std::vector<double> witness;
    double min_value = 0.0;
    std::size_t directions_tested = 0;
};

/// Refutation-based positivity test of an even-order form: coordinate axes plus
/// `directions` seeded random unit vectors. positive == true only means that no
/// violation was found.
PositivityResult is_positive(const SymTensor& t, std::size_t directions = 256, std::uint64_t seed = 0);

/// Element of the truncated graded space Sym_0 + ... + Sym_p over R^d.
class GradedTensor {
public:
    GradedTensor(std::size_t dim, std::size_t depth);
    explicit GradedTensor(std::vector<SymTensor> levels);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t depth() const noexcept { return levels_.size() - 1; }
    SymTensor& level(std::size_t k) { return levels_.at(k); }
    const SymTensor& level(std::size_t k) const { return levels_.at(k); }

    /// Truncated product: level k = sum_l Sym(A_l (x) B_{k-l}).
    GradedTensor operator*(const GradedTensor& other) const;

private:
    std::size_t dim_;
    std::vector<SymTensor> levels_;
};

/// (l, k)-shuffles as the sorted positions (0-based) taken by the first word.
std::vector<std::vector<std::size_t>> shuffles(std::size_t l, std::size_t k);

std::uint64_t binomial(std::size_t n, std::size_t k);

/// "a1.a2...ad" key used in serialized tensors.
std::string multi_index_key(std::span<const std::uint8_t> alpha);

}  // namespace pathvar
