#include "uslab/scalar.hpp"

#include <cctype>

namespace uslab {

std::string to_string(Mode m) { return m == Mode::exact ? "exact" : "float"; }

Mode mode_from_string(const std::string& s) {
    if (s == "exact") return Mode::exact;
    if (s == "float") return Mode::floating;
    throw DomainError("unknown mode '" + s + "' (expected exact or float)");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

Rational parse_decimal(const std::string& s) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
    std::string digits;
    long scale = 0;
    bool seen_digit = false, seen_dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            seen_digit = true;
            if (seen_dot) ++scale;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw DomainError("not a number: '" + s + "'");
    long exponent = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        std::size_t used = 0;
        try {
            exponent = std::stol(s.substr(i), &used);
        } catch (const std::exception&) {
            throw DomainError("bad exponent in '" + s + "'");
        }
        i += used;
    }
    if (i != s.size()) throw DomainError("trailing characters in number '" + s + "'");
    mpz_class num(digits, 10);
    long e = exponent - scale;
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
    Rational q = e < 0 ? Rational(num, p) : Rational(num * p);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s = trim(text);
    auto slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s);
    Rational num = parse_decimal(trim(s.substr(0, slash)));
    Rational den = parse_decimal(trim(s.substr(slash + 1)));
    if (sgn(den) == 0) throw DomainError("zero denominator in '" + s + "'");
    return Rational(num / den);
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw DomainError("non-finite value has no rational form");
    Rational q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

double log_abs(const mpz_class& z) {
    if (sgn(z) == 0) return -std::numeric_limits<double>::infinity();
    long e = 0;
    double m = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

double log_abs(const Rational& q) {
    if (sgn(q) == 0) return -std::numeric_limits<double>::infinity();
    return log_abs(mpz_class(q.get_num())) - log_abs(mpz_class(q.get_den()));
}

double to_double(const Rational& q) {
    double d = q.get_d();
    if (d != 0.0 || sgn(q) == 0) return d;
    // get_d truncates tiny values to zero; keep the sign information readable.
    return std::copysign(std::exp(log_abs(q)), static_cast<double>(sgn(q)));
}

const Rational& Scalar::exact() const {
    if (v_.index() != 0) throw ModeMismatch("expected an exact scalar, got a float scalar");
    return std::get<0>(v_);
}

const Complex& Scalar::floating() const {
    if (v_.index() != 1) throw ModeMismatch("expected a float scalar, got an exact scalar");
    return std::get<1>(v_);
}

Complex Scalar::to_complex() const {
    return mode() == Mode::exact ? Complex(to_double(exact()), 0.0) : floating();
}

namespace {
void require_same(const Scalar& a, const Scalar& b) {
    if (a.mode() != b.mode())
        throw ModeMismatch("cannot combine " + to_string(a.mode()) + " and " + to_string(b.mode()) +
                           " scalars");
}
}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
    require_same(a, b);
    if (a.mode() == Mode::exact) return Scalar(Rational(a.exact() + b.exact()));
    return Scalar(a.floating() + b.floating());
}
Scalar operator-(const Scalar& a, const Scalar& b) {
    require_same(a, b);
    if (a.mode() == Mode::exact) return Scalar(Rational(a.exact() - b.exact()));
    return Scalar(a.floating() - b.floating());
}
Scalar operator*(const Scalar& a, const Scalar& b) {
    require_same(a, b);
    if (a.mode() == Mode::exact) return Scalar(Rational(a.exact() * b.exact()));
    return Scalar(a.floating() * b.floating());
}
Scalar operator/(const Scalar& a, const Scalar& b) {
    require_same(a, b);
    if (a.mode() == Mode::exact) {
        if (sgn(b.exact()) == 0) throw DomainError("division by zero");
        return Scalar(Rational(a.exact() / b.exact()));
    }
    return Scalar(a.floating() / b.floating());
}
bool operator==(const Scalar& a, const Scalar& b) {
    if (a.mode() != b.mode()) return false;
    if (a.mode() == Mode::exact) return a.exact() == b.exact();
    return a.floating() == b.floating();
}

}  // namespace uslab
