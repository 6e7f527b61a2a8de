#pragma once
// Dense polynomials in powers of (z - center).

#include "uslab/scalar.hpp"

#include <algorithm>
#include <vector>

namespace uslab {

template <class T>
class Polynomial {
public:
    using Traits = ScalarTraits<T>;

    Polynomial() : center_(0) {}
    explicit Polynomial(std::vector<T> coeffs, T center = T(0))
        : coeffs_(std::move(coeffs)), center_(std::move(center)) {
        trim();
    }

    static Polynomial constant(const T& c, T center = T(0)) { return Polynomial({c}, center); }
    // (z - center)^k
    static Polynomial monomial(std::size_t k, T center = T(0)) {
        std::vector<T> c(k + 1, T(0));
        c[k] = T(1);
        return Polynomial(std::move(c), center);
    }

    const T& center() const { return center_; }
    const std::vector<T>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    // -1 for the zero polynomial.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    // Index of the first nonzero coefficient; -1 for the zero polynomial.
    long valuation() const {
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            if (!Traits::is_zero(coeffs_[k])) return static_cast<long>(k);
        return -1;
    }
    T coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : T(0); }
    void set_coeff(std::size_t k, const T& v) {
        if (k >= coeffs_.size()) coeffs_.resize(k + 1, T(0));
        coeffs_[k] = v;
        trim();
    }

    T eval(const T& z) const {
        T acc(0);
        T d = z - center_;
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = T(acc * d + coeffs_[i]);
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return Polynomial({}, center_);
        std::vector<T> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = T(coeffs_[k] * T(static_cast<long>(k)));
        return Polynomial(std::move(d), center_);
    }

    // Keep terms of index <= n.
    Polynomial truncated(std::size_t n) const {
        std::vector<T> c(coeffs_.begin(), coeffs_.begin() + std::min(coeffs_.size(), n + 1));
        return Polynomial(std::move(c), center_);
    }

    // Multiply by (z - center)^p.
    Polynomial shifted_up(std::size_t p) const {
        if (is_zero()) return *this;
        std::vector<T> c(p, T(0));
        c.insert(c.end(), coeffs_.begin(), coeffs_.end());
        return Polynomial(std::move(c), center_);
    }

    // Divide by (z - center)^p; the low coefficients must vanish.
    Polynomial shifted_down(std::size_t p) const {
        for (std::size_t k = 0; k < std::min(p, coeffs_.size()); ++k)
            if (!Traits::is_zero(coeffs_[k])) throw DomainError("polynomial valuation below shift");
        if (p >= coeffs_.size()) return Polynomial({}, center_);
        return Polynomial(std::vector<T>(coeffs_.begin() + p, coeffs_.end()), center_);
    }

    // Same polynomial expanded about a new center (exact Taylor shift).
    Polynomial recentered(const T& new_center) const {
        T s = new_center - center_;
        std::vector<T> c = coeffs_;
        const std::size_t n = c.size();
        // Repeated synthetic division by (w - s) where w = z - center.
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t k = n - 1; k-- > i;) c[k] = T(c[k] + s * c[k + 1]);
        return Polynomial(std::move(c), new_center);
    }

    Polynomial scaled(const T& s) const {
        std::vector<T> c = coeffs_;
        for (auto& v : c) v = T(v * s);
        return Polynomial(std::move(c), center_);
    }

    Polynomial& operator+=(const Polynomial& o) {
        require_center(o);
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] = T(coeffs_[k] + o.coeffs_[k]);
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        require_center(o);
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] = T(coeffs_[k] - o.coeffs_[k]);
        trim();
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.require_center(b);
        if (a.is_zero() || b.is_zero()) return Polynomial({}, a.center_);
        std::vector<T> c(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (Traits::is_zero(a.coeffs_[i])) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] = T(c[i + j] + a.coeffs_[i] * b.coeffs_[j]);
        }
        return Polynomial(std::move(c), a.center_);
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.center_ == b.center_ && a.coeffs_ == b.coeffs_;
    }

private:
    void trim() {
        while (!coeffs_.empty() && Traits::is_zero(coeffs_.back())) coeffs_.pop_back();
    }
    void require_center(const Polynomial& o) const {
        if (!(center_ == o.center_)) throw DomainError("polynomials expanded about different centers");
    }

    std::vector<T> coeffs_;
    T center_;
};

using RatPoly = Polynomial<Rational>;
using CplxPoly = Polynomial<Complex>;

// Evaluate with a run-time scalar; throws ModeMismatch when modes differ.
template <class T>
T eval_poly(const Polynomial<T>& p, const Scalar& z) {
    return p.eval(z.as<T>());
}

// Float copy of an exact polynomial.
CplxPoly to_complex_poly(const RatPoly& p);

// (1 - x)^n and similar small helpers used across modules.
template <class T>
Polynomial<T> one_minus_x_pow(std::size_t n);

// Hardy-space H^2(D_s) squared norm: sum |c_k|^2 s^{2k}; p must be centered at 0.
Rational hardy2_norm_sq(const RatPoly& p, const Rational& s);
double hardy2_norm_sq(const CplxPoly& p, double s);

}  // namespace uslab
