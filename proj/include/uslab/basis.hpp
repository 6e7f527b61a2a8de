#pragma once
// Coefficient sequences, basis families and their partial sums.

#include "uslab/polynomial.hpp"
#include "uslab/sequences.hpp"

#include <map>
#include <memory>
#include <optional>

namespace uslab {

// A disjoint, increasing run of coefficient indices produced by one construction step.
struct Block {
    std::size_t valuation = 0;  // first index of the block
    std::size_t degree = 0;     // last index of the block
    std::size_t row = 0;        // family row at which the block certifies its target
};

template <class T>
class CoefficientSequence {
public:
    T get(std::size_t k) const {
        auto it = entries_.find(k);
        return it == entries_.end() ? T(0) : it->second;
    }
    void set(std::size_t k, const T& v) {
        if (ScalarTraits<T>::is_zero(v))
            entries_.erase(k);
        else
            entries_[k] = v;
    }
    // values[i] lands at index valuation + i; the block must start past every earlier block.
    void add_block(std::size_t valuation, const std::vector<T>& values, std::size_t row) {
        if (!blocks_.empty() && valuation <= blocks_.back().degree)
            throw DomainError("block valuation " + std::to_string(valuation) + " does not exceed previous degree " +
                              std::to_string(blocks_.back().degree));
        std::size_t degree = values.empty() ? valuation : valuation + values.size() - 1;
        for (std::size_t i = 0; i < values.size(); ++i) set(valuation + i, values[i]);
        blocks_.push_back({valuation, degree, row});
    }
    const std::map<std::size_t, T>& entries() const { return entries_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    void set_blocks(std::vector<Block> b) { blocks_ = std::move(b); }
    // Largest index with a nonzero entry; nullopt for the zero sequence.
    std::optional<std::size_t> max_index() const {
        if (entries_.empty()) return std::nullopt;
        return entries_.rbegin()->first;
    }
    std::vector<T> dense(std::size_t n) const {
        std::vector<T> out(n + 1, T(0));
        for (const auto& [k, v] : entries_)
            if (k <= n) out[k] = v;
        return out;
    }
    friend CoefficientSequence operator+(const CoefficientSequence& a, const CoefficientSequence& b) {
        CoefficientSequence c = a;
        c.blocks_.clear();
        for (const auto& [k, v] : b.entries_) c.set(k, T(c.get(k) + v));
        return c;
    }
    CoefficientSequence scaled(const T& s) const {
        CoefficientSequence c;
        for (const auto& [k, v] : entries_) c.set(k, T(v * s));
        c.blocks_ = blocks_;
        return c;
    }

private:
    std::map<std::size_t, T> entries_;
    std::vector<Block> blocks_;
};

enum class FamilyKind {
    weighted_monomial,   // alpha(n,k) (z - center)^(k + offset)
    bernstein,           // x^k (1-x)^(n-k)
    binomial_bernstein,  // C(n,k) x^k (1-x)^(n-k); the open variant drops k = n
    scalar,              // x(n,k) = alpha(n,k), a number
    derivative_pair,     // row 2n: k!/(k-n)! a_n z^(k-n) for n <= k <= 2n; odd rows vanish
};

template <class T>
class BasisFamily {
public:
    static BasisFamily monomial(T center = T(0), std::size_t offset = 0);
    static BasisFamily weighted_monomial(WeightTriangle weights, T center = T(0), std::size_t offset = 0);
    static BasisFamily bernstein();
    static BasisFamily binomial_bernstein(bool open_interval);
    static BasisFamily scalar(WeightTriangle values);
    static BasisFamily derivative_pair(ScalarSequence alpha);
    static BasisFamily from_json(const Json& j);

    FamilyKind kind() const { return kind_; }
    bool is_scalar() const { return kind_ == FamilyKind::scalar; }
    const T& center() const { return center_; }
    std::size_t offset() const { return offset_; }
    bool open_interval() const { return open_; }
    const WeightTriangle& weights() const { return *weights_; }
    const ScalarSequence& alpha() const { return *alpha_; }
    std::optional<std::size_t> horizon() const { return horizon_; }
    BasisFamily with_horizon(std::size_t h) const {
        BasisFamily f = *this;
        f.horizon_ = h;
        return f;
    }
    Json descriptor() const;

    // x(n,k) as a polynomial (a constant polynomial for scalar families).
    Polynomial<T> element(std::size_t n, std::size_t k) const;
    // Scalar families only.
    T scalar_element(std::size_t n, std::size_t k) const;
    // S_n(a) = sum_{k <= n} a_k x(n,k).
    Polynomial<T> partial_sum(const CoefficientSequence<T>& a, std::size_t n) const;
    T scalar_partial_sum(const CoefficientSequence<T>& a, std::size_t n) const;

private:
    void check_row(std::size_t n) const;
    FamilyKind kind_ = FamilyKind::weighted_monomial;
    T center_ = T(0);
    std::size_t offset_ = 0;
    bool open_ = false;
    std::shared_ptr<WeightTriangle> weights_;
    std::shared_ptr<ScalarSequence> alpha_;
    std::optional<std::size_t> horizon_;
};

template <class T>
Polynomial<T> family_element(const BasisFamily<T>& F, std::size_t n, std::size_t k) {
    return F.element(n, k);
}
template <class T>
Polynomial<T> partial_sum(const CoefficientSequence<T>& a, const BasisFamily<T>& F, std::size_t n) {
    return F.partial_sum(a, n);
}

mpz_class binomial(std::size_t n, std::size_t k);

// Coefficients b with p = sum_k b_k x^k (1-x)^(n-k); requires n >= deg p and p centered at 0.
template <class T>
std::vector<T> monomial_to_bernstein(const Polynomial<T>& p, std::size_t n);
template <class T>
Polynomial<T> bernstein_to_monomial(const std::vector<T>& b, std::size_t n);

// alpha_n * S_n(f^(n)) computed through the derivative-pair family and through direct
// differentiation; both routes are returned.
template <class T>
struct DerivativeRoutes {
    Polynomial<T> via_family;
    Polynomial<T> via_derivative;
};
template <class T>
DerivativeRoutes<T> derivative_family_routes(const Polynomial<T>& f, std::size_t n, const T& alpha_n);
// Throws InternalMismatch when the two routes disagree (beyond 1e-10 relative in float mode).
template <class T>
Polynomial<T> derivative_family_sum(const Polynomial<T>& f, std::size_t n, const T& alpha_n);

}  // namespace uslab
