#pragma once
// Approximation steps used by the block constructions.

#include "uslab/compact_set.hpp"
#include "uslab/evaluation.hpp"
#include "uslab/polynomial.hpp"

#include <functional>
#include <optional>

namespace uslab {

template <class T>
struct ApproximationResult {
    Polynomial<T> polynomial;
    double achieved_error = 0.0;  // on the verification grid (kVerificationFactor x the build density)
    double build_error = 0.0;     // on the build grid
    std::size_t degree = 0;
    std::size_t sample_density = 0;
};

struct ApproximationFailure : Error {
    ApproximationFailure(const std::string& what, double best_error, std::size_t best_degree)
        : Error(what), best_error(best_error), best_degree(best_degree) {}
    double best_error;
    std::size_t best_degree;
};

// Exact interpolating polynomial (about 0) through (nodes[i], values[i]).
RatPoly interpolate_exact(const std::vector<Rational>& nodes, const std::vector<Rational>& values);

// Chebyshev nodes of the interval, rounded to dyadic rationals; n+1 nodes for degree n.
std::vector<Rational> chebyshev_nodes(const Interval& I, std::size_t n);

// Chebyshev interpolation with degree doubling until the verification-grid error is <= eps.
// Exact mode: g is evaluated exactly at rational nodes. Float mode: coefficients are computed
// exactly from the sampled values and rounded, and the error reflects the rounded polynomial.
template <class T>
ApproximationResult<T> approx_on_interval(const std::function<T(const T&)>& g, const CompactSet& I, double eps,
                                          std::size_t max_degree);

// Exact-coefficient interpolant of a double-valued function (values are taken as exact rationals).
ApproximationResult<Rational> approx_real_on_interval(const std::function<double(double)>& g, const CompactSet& I,
                                                      double eps, std::size_t max_degree);

// g(x) = h(x)/x^p for |x| >= eta and (|x|/eta) h(x)/(sgn(x) eta)^p inside; g(0) = 0.
// h(0) must vanish (|h(0)| <= 1e-14).
std::function<double(double)> blend_divide(const std::function<double(double)>& h, std::size_t p, double eta);
// Largest sampled eta with sup |h| <= eps/3 on the samples with |x| <= eta.
double default_blend_eta(const std::function<double(double)>& h, const CompactSet& I, double eps);

// P = z^m Q where Q is the order-(m-1) Taylor truncation at c of h(z)/z^m.
// P vanishes to order m at 0 and matches h to order m at c. Result is centered at 0.
template <class T>
Polynomial<T> hermite_two_disc(const Polynomial<T>& h, const T& c, std::size_t m);

// Taylor data of a function holomorphic near a disc centered at 0.
struct TaylorSource {
    std::function<Complex(std::size_t)> coefficient;
    std::optional<std::size_t> degree;  // set for polynomials
    static TaylorSource from_polynomial(const CplxPoly& p);
    static TaylorSource simple_pole(Complex a);  // 1/(z - a)
    static TaylorSource exponential();
};

struct RateReport {
    std::vector<double> distances;  // D_n for n = 0..n_max
    double rate = 0.0;              // tail-window geometric mean of D_n^(1/n)
    std::size_t window = 0;
};
// D_n = sup_K |f - S_n f| with S_n the degree-n Taylor truncation; K a disc centered at 0.
RateReport bw_rate(const TaylorSource& f, const CompactSet& K, std::size_t n_max);

// Green function of the closed disc of radius R (center 0) with pole at infinity.
double green_disc(double R, Complex z);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds(double rel_tol = 1e-9) const { return lhs <= rhs * (1.0 + rel_tol); }
};
// lhs = sup_{|z|=r} |sum alpha_k p_k z^k|, rhs = sqrt(2/(R-r)) max|alpha| sup_{|z|=R} |P|.
BoundCheck bernstein_bound_check(const CplxPoly& P, const std::vector<Complex>& alpha, double r, double R,
                                 std::size_t density = kDefaultSampleDensity);

// W in x^v (1-x)^s Pi, deg W <= top, approximating the exact polynomial R on the interval K.
// When the weight has no zero on K, W interpolates R at Chebyshev nodes after dividing out the
// weight. When 0 lies in K (s = 0 only), the low-order part of R is replaced by its L2-best
// approximation from the admissible powers on a hull interval, computed in closed form.
RatPoly valuation_constrained_approx(const RatPoly& R, const Interval& K, std::size_t v, std::size_t top,
                                     bool one_minus_x);

// L2[0,1]-best coefficients c_l with x^m ~ sum_l c_l x^{exponents[l]} (closed-form Cauchy solve).
std::vector<Rational> muntz_projection(std::size_t m, const std::vector<std::size_t>& exponents);

}  // namespace uslab
