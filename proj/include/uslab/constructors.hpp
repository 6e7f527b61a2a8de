#pragma once
// Block constructions of universal series with finite certificates.
//
// Every constructor walks its targets in order. Each target gets one block whose valuation
// exceeds the previous block's degree, placed at a row n in the index sequence, and chosen so
// that the accumulated partial sum at row n (not just the fresh block) meets the target.

#include "uslab/approx.hpp"
#include "uslab/certificate.hpp"
#include "uslab/diagnostics.hpp"

#include <map>

namespace uslab {

enum class IntervalStrategy {
    muntz,  // valuation-constrained best approximation of a polynomial model of the target
    blend,  // divide by x^p with a linear ramp near 0, approximate, multiply back
};
IntervalStrategy strategy_from_string(const std::string& s);
std::string to_string(IntervalStrategy s);

struct ConstructOptions {
    std::size_t max_degree = 512;             // largest row tried on interval targets
    std::size_t horizon = kDefaultHorizon;    // largest row for disc and derivative constructions
    IntervalStrategy strategy = IntervalStrategy::muntz;
    VerdictOptions verdict;
    std::size_t min_valuation = 0;            // first admissible coefficient index
};

template <class T>
struct Construction {
    CoefficientSequence<T> series;
    Certificate certificate;
    BasisFamily<T> family;
};

// Generic block solver. Scalar families get exact one-coefficient solves, interval targets the
// valuation-constrained interval engine, disc targets the two-disc Hermite block.
template <class T>
Construction<T> greedy_universal(const BasisFamily<T>& F, const std::vector<Target>& targets, const IndexSequence& mu,
                                 const ConstructOptions& opt = {});

// a with S_n(a) = q_n for every n < q.size(), by forward substitution.
template <class T>
CoefficientSequence<T> interpolating_universal(const BasisFamily<T>& F, const std::vector<T>& q);

// lambda_0 = q_0 and lambda_n = n q_n - sum_{j<n} lambda_j, so the running means reproduce q.
CoefficientSequence<Rational> cesaro_universal(const std::vector<Rational>& q);
// The family x(n,k) = 1/n (with the n = 0 row equal to 1) used by the Cesaro solve.
BasisFamily<Rational> cesaro_family();

struct RiemannCheck {
    std::size_t p = 0;
    Rational riemann_sum;  // (1/p) sum_{j<p} f(j/p) read back from the table
    Rational partial_sum;  // S_{p-1} of the scalar family 1/(n+1)
    bool equal = false;
};
struct RiemannConflict {
    Rational point;
    Rational first, second;
};
struct RiemannTable {
    std::map<Rational, Rational> values;  // keyed by reduced fractions in [0, 1)
    std::vector<RiemannConflict> conflicts;
    std::vector<RiemannCheck> checks;
    bool all_equal() const;
};
// f(j/p) = a_j for the given primes and 0 <= j < p, with every prime sum checked against the
// family partial sum.
RiemannTable riemann_universal(const CoefficientSequence<Rational>& a, const std::vector<std::size_t>& primes);
// (1/n) sum_{j<n} f(j/n) with f = 0 off the table; composite n carries no certified property.
Rational riemann_sum(const RiemannTable& t, std::size_t n);
// Scalar family x(n,k) = 1/(n+1), whose row p-1 is the Riemann sum over j/p.
BasisFamily<Rational> riemann_family();
// Coefficients whose prime-indexed sums hit q_0, q_1, ... in order.
Construction<Rational> riemann_solve(const std::vector<Rational>& q);

// Targets vanish at 0 on intervals; family alpha(n,k) x^(k+1).
template <class T>
Construction<T> fekete_construct(const std::vector<Target>& targets, const WeightTriangle& alpha,
                                 const IndexSequence& mu, const ConstructOptions& opt = {});

// Targets vanish at 0 on [0,1]; family x^k (1-x)^(n-k), k >= 1.
template <class T>
Construction<T> bernstein_construct(const std::vector<Target>& targets, const IndexSequence& mu,
                                    const ConstructOptions& opt = {});

// Targets on compact L inside (0,1), or inside (0,1] when open_interval is false; family
// C(n,k) x^k (1-x)^(n-k), with k = n dropped in the open variant.
template <class T>
Construction<T> binomial_bernstein_construct(const std::vector<Target>& targets, const IndexSequence& mu,
                                             bool open_interval = true, const ConstructOptions& opt = {});

// Polynomial targets on discs K outside the closed disc of radius omega_radius, each with a
// disc L inside it where the fresh block must stay below epsilon.
template <class T>
Construction<T> taylor_universal_disc(double omega_radius, const WeightTriangle& alpha, const IndexSequence& mu,
                                      const std::vector<Target>& targets, const ConstructOptions& opt = {});

// Polynomial targets h; block q_n with alpha_n S_n(f^(n)) = h exactly and sup_L |q_n| <= epsilon.
template <class T>
Construction<T> derivative_universal_construct(const ScalarSequence& alpha, const IndexSequence& mu,
                                               const std::vector<Target>& targets, const ConstructOptions& opt = {});

// Bound used as a stopping heuristic: (d+1)(1+r^d) max|b_i| r^n / (|alpha_n| n!), in logs.
double derivative_block_log_bound(const RatPoly& h, double r, double log_abs_alpha_n, std::size_t n);

// Blockwise weight transfer: a_k alpha(row,k) / beta(row,k) for k in each block.
template <class T>
CoefficientSequence<T> transfer_weights(const CoefficientSequence<T>& a, const WeightTriangle& from,
                                        const WeightTriangle& to);

}  // namespace uslab
