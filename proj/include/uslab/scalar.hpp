#pragma once
// Scalar modes: exact rationals (GMP) or IEEE complex doubles.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

namespace uslab {

using Rational = mpq_class;
using Complex = std::complex<double>;

enum class Mode { exact, floating };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

// Base error type for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : Error {
    using Error::Error;
};
struct ModeMismatch : Error {
    using Error::Error;
};
struct HorizonExceeded : Error {
    using Error::Error;
};
struct InternalMismatch : Error {
    using Error::Error;
};

// Canonical p/q; mpq_class(p, q) alone leaves common factors in place.
inline Rational ratio(const mpz_class& p, const mpz_class& q) {
    if (sgn(q) == 0) throw DomainError("zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
}
inline Rational ratio(long p, long q) { return ratio(mpz_class(p), mpz_class(q)); }

// Parse "p/q", "p", or a finite decimal like "-0.125" or "1e-3" into an exact rational.
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& q);
// Exact value of a finite double.
Rational rational_from_double(double x);
// log|q|, valid for values far outside the double range; -inf for zero.
double log_abs(const Rational& q);
double log_abs(const mpz_class& z);
double to_double(const Rational& q);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    using Real = Rational;
    static constexpr Mode mode = Mode::exact;
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static double abs(const Rational& x) { return std::fabs(to_double(x)); }
    static double log_abs(const Rational& x) { return uslab::log_abs(x); }
    static Complex to_complex(const Rational& x) { return {to_double(x), 0.0}; }
    static Rational from_rational(const Rational& q) { return q; }
    static Rational from_double(double x) { return rational_from_double(x); }
    static Rational from_complex(const Complex& z) {
        if (z.imag() != 0.0) throw ModeMismatch("exact mode holds real rationals only");
        return rational_from_double(z.real());
    }
    static Rational conj(const Rational& x) { return x; }
};

template <>
struct ScalarTraits<Complex> {
    using Real = double;
    static constexpr Mode mode = Mode::floating;
    static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
    static double abs(const Complex& x) { return std::abs(x); }
    static double log_abs(const Complex& x) {
        if (is_zero(x)) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(x));
    }
    static Complex to_complex(const Complex& x) { return x; }
    static Complex from_rational(const Rational& q) { return {to_double(q), 0.0}; }
    static Complex from_double(double x) { return {x, 0.0}; }
    static Complex from_complex(const Complex& z) { return z; }
    static Complex conj(const Complex& x) { return std::conj(x); }
    static constexpr double epsilon = std::numeric_limits<double>::epsilon();
};

// A mode-tagged scalar for interfaces that receive values at run time.
// Mixing modes in arithmetic throws ModeMismatch.
class Scalar {
public:
    Scalar() : v_(Rational(0)) {}
    Scalar(Rational q) : v_(std::move(q)) {}
    Scalar(Complex z) : v_(z) {}

    Mode mode() const { return v_.index() == 0 ? Mode::exact : Mode::floating; }
    const Rational& exact() const;
    const Complex& floating() const;
    Complex to_complex() const;

    template <class T>
    const T& as() const {
        if constexpr (std::is_same_v<T, Rational>)
            return exact();
        else
            return floating();
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    friend bool operator==(const Scalar& a, const Scalar& b);

private:
    std::variant<Rational, Complex> v_;
};

}  // namespace uslab
