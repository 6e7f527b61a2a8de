#include "uslab/polynomial.hpp"

namespace uslab {

CplxPoly to_complex_poly(const RatPoly& p) {
    std::vector<Complex> c;
    c.reserve(p.coeffs().size());
    for (const auto& q : p.coeffs()) c.emplace_back(to_double(q), 0.0);
    return CplxPoly(std::move(c), Complex(to_double(p.center()), 0.0));
}

template <class T>
Polynomial<T> one_minus_x_pow(std::size_t n) {
    std::vector<T> c(n + 1, T(0));
    mpz_class binom = 1;
    for (std::size_t k = 0; k <= n; ++k) {
        Rational v(binom);
        if (k % 2 == 1) v = -v;
        c[k] = ScalarTraits<T>::from_rational(v);
        binom = binom * static_cast<unsigned long>(n - k) / static_cast<unsigned long>(k + 1);
    }
    return Polynomial<T>(std::move(c));
}

template RatPoly one_minus_x_pow<Rational>(std::size_t);
template CplxPoly one_minus_x_pow<Complex>(std::size_t);

Rational hardy2_norm_sq(const RatPoly& p, const Rational& s) {
    if (sgn(p.center()) != 0) throw DomainError("Hardy norm needs a polynomial centered at 0");
    if (sgn(s) <= 0) throw DomainError("Hardy radius must be positive");
    Rational s2 = s * s, w = 1, acc = 0;
    for (const auto& c : p.coeffs()) {
        acc += c * c * w;
        w *= s2;
    }
    return acc;
}

double hardy2_norm_sq(const CplxPoly& p, double s) {
    if (p.center() != Complex(0.0, 0.0)) throw DomainError("Hardy norm needs a polynomial centered at 0");
    if (!(s > 0.0)) throw DomainError("Hardy radius must be positive");
    double acc = 0.0, w = 1.0;
    for (const auto& c : p.coeffs()) {
        acc += std::norm(c) * w;
        w *= s * s;
    }
    return acc;
}

}  // namespace uslab
