#pragma once
// Accurate evaluation and sup norms.
//
// Exact polynomials are evaluated in GMP floating point with enough bits to cover the
// cancellation sum |c_k| |z - center|^k, so the absolute error stays near 2^-64 even
// when monomial coefficients are astronomically large.

#include "uslab/compact_set.hpp"
#include "uslab/polynomial.hpp"

#include <functional>
#include <memory>

namespace uslab {

class ExactEvaluator {
public:
    // radius bounds |z - center| over every point that will be queried.
    ExactEvaluator(const RatPoly& p, double radius);
    ~ExactEvaluator();
    ExactEvaluator(const ExactEvaluator&) = delete;
    ExactEvaluator& operator=(const ExactEvaluator&) = delete;

    double real(double x) const;
    Complex operator()(Complex z) const;
    unsigned long precision_bits() const { return bits_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    unsigned long bits_ = 0;
};

// Pointwise accurate evaluation at double points for either scalar mode.
template <class T>
class PolyEvaluator;

template <>
class PolyEvaluator<Rational> {
public:
    PolyEvaluator(const RatPoly& p, double radius) : ev_(p, radius) {}
    Complex operator()(Complex z) const { return ev_(z); }
    double real(double x) const { return ev_.real(x); }

private:
    ExactEvaluator ev_;
};

template <>
class PolyEvaluator<Complex> {
public:
    PolyEvaluator(const CplxPoly& p, double /*radius*/) : p_(p) {}
    Complex operator()(Complex z) const { return p_.eval(z); }
    double real(double x) const { return p_.eval(Complex(x, 0.0)).real(); }

private:
    CplxPoly p_;
};

using ComplexFunction = std::function<Complex(Complex)>;

// sup over the samples of K of |p|; K must meet the minimum density.
template <class T>
double sup_norm(const Polynomial<T>& p, const CompactSet& K, std::size_t min_density = kDefaultSampleDensity);

// sup over the samples of K of |p - h|.
template <class T>
double sup_distance(const Polynomial<T>& p, const ComplexFunction& h, const CompactSet& K,
                    std::size_t min_density = kDefaultSampleDensity);

// sup over the samples of K of |p - q| where both are exact (no rounding of either).
double sup_distance_exact(const RatPoly& p, const RatPoly& q, const CompactSet& K,
                          std::size_t min_density = kDefaultSampleDensity);

double sup_of(const ComplexFunction& f, const CompactSet& K, std::size_t min_density = kDefaultSampleDensity);

}  // namespace uslab
