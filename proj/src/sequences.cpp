#include "uslab/sequences.hpp"

#include "uslab/json_util.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace uslab {

namespace {

Rational rat_pow(const Rational& b, unsigned long e) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), e);
    Rational r(num, den);
    r.canonicalize();
    return r;
}

mpz_class factorial_z(std::size_t n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

double log_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

Complex to_c(const Rational& q) { return {to_double(q), 0.0}; }

}  // namespace

// ---------------------------------------------------------------- ScalarSequence

void ScalarSequence::check(std::size_t n) const {
    if (length_ && n >= *length_)
        throw HorizonExceeded("explicit sequence has " + std::to_string(*length_) + " entries, index " +
                              std::to_string(n) + " requested");
}

Rational ScalarSequence::exact(std::size_t n) const {
    check(n);
    if (!exact_) throw ModeMismatch("sequence '" + descriptor_.value("kind", std::string("custom")) +
                                    "' has no exact values");
    return exact_(n);
}

Complex ScalarSequence::floating(std::size_t n) const {
    check(n);
    return float_(n);
}

double ScalarSequence::log_abs(std::size_t n) const {
    check(n);
    return log_(n);
}

ScalarSequence ScalarSequence::constant(Rational c) {
    ScalarSequence s;
    s.exact_ = [c](std::size_t) { return c; };
    s.float_ = [c](std::size_t) { return to_c(c); };
    double l = uslab::log_abs(c);
    s.log_ = [l](std::size_t) { return l; };
    s.descriptor_ = {{"kind", "constant"}, {"value", rational_json(c)}};
    return s;
}

ScalarSequence ScalarSequence::linear(long shift) {
    auto v = [shift](std::size_t n) {
        long x = static_cast<long>(n) + shift;
        return x == 0 ? 1L : x;
    };
    ScalarSequence s;
    s.exact_ = [v](std::size_t n) { return Rational(v(n)); };
    s.float_ = [v](std::size_t n) { return Complex(static_cast<double>(v(n)), 0.0); };
    s.log_ = [v](std::size_t n) { return std::log(std::fabs(static_cast<double>(v(n)))); };
    s.descriptor_ = {{"kind", "linear"}, {"shift", shift}};
    return s;
}

ScalarSequence ScalarSequence::power(Rational base) {
    if (sgn(base) == 0) throw DomainError("power sequence base must be nonzero");
    ScalarSequence s;
    double lb = uslab::log_abs(base);
    s.exact_ = [base](std::size_t n) { return rat_pow(base, n); };
    s.float_ = [base, lb](std::size_t n) {
        double m = std::exp(static_cast<double>(n) * lb);
        return Complex(sgn(base) < 0 && n % 2 ? -m : m, 0.0);
    };
    s.log_ = [lb](std::size_t n) { return static_cast<double>(n) * lb; };
    s.descriptor_ = {{"kind", "power"}, {"base", rational_json(base)}};
    return s;
}

ScalarSequence ScalarSequence::exp_square(Rational base) {
    if (sgn(base) <= 0) throw DomainError("exp_square sequence base must be positive");
    ScalarSequence s;
    double lb = uslab::log_abs(base);
    s.exact_ = [base](std::size_t n) { return rat_pow(base, n * n); };
    s.float_ = [lb](std::size_t n) { return Complex(std::exp(static_cast<double>(n * n) * lb), 0.0); };
    s.log_ = [lb](std::size_t n) { return static_cast<double>(n * n) * lb; };
    s.descriptor_ = {{"kind", "exp_square"}, {"base", rational_json(base)}};
    return s;
}

ScalarSequence ScalarSequence::factorial() {
    ScalarSequence s;
    s.exact_ = [](std::size_t n) { return Rational(factorial_z(n)); };
    s.float_ = [](std::size_t n) { return Complex(std::exp(log_factorial(n)), 0.0); };
    s.log_ = [](std::size_t n) { return log_factorial(n); };
    s.descriptor_ = {{"kind", "factorial"}};
    return s;
}

ScalarSequence ScalarSequence::inverse_factorial() {
    ScalarSequence s;
    s.exact_ = [](std::size_t n) { return Rational(mpz_class(1), factorial_z(n)); };
    s.float_ = [](std::size_t n) { return Complex(std::exp(-log_factorial(n)), 0.0); };
    s.log_ = [](std::size_t n) { return -log_factorial(n); };
    s.descriptor_ = {{"kind", "inverse_factorial"}};
    return s;
}

ScalarSequence ScalarSequence::power_over_factorial(Rational base) {
    if (sgn(base) == 0) throw DomainError("power_over_factorial base must be nonzero");
    ScalarSequence s;
    double lb = uslab::log_abs(base);
    s.exact_ = [base](std::size_t n) { return Rational(rat_pow(base, n) / Rational(factorial_z(n))); };
    s.float_ = [base, lb](std::size_t n) {
        double m = std::exp(static_cast<double>(n) * lb - log_factorial(n));
        return Complex(sgn(base) < 0 && n % 2 ? -m : m, 0.0);
    };
    s.log_ = [lb](std::size_t n) { return static_cast<double>(n) * lb - log_factorial(n); };
    s.descriptor_ = {{"kind", "power_over_factorial"}, {"base", rational_json(base)}};
    return s;
}

ScalarSequence ScalarSequence::explicit_values(std::vector<Rational> values) {
    ScalarSequence s;
    auto shared = std::make_shared<std::vector<Rational>>(std::move(values));
    s.length_ = shared->size();
    s.exact_ = [shared](std::size_t n) { return (*shared)[n]; };
    s.float_ = [shared](std::size_t n) { return to_c((*shared)[n]); };
    s.log_ = [shared](std::size_t n) { return uslab::log_abs((*shared)[n]); };
    Json vals = Json::array();
    for (const auto& q : *shared) vals.push_back(rational_json(q));
    s.descriptor_ = {{"kind", "explicit"}, {"values", vals}};
    return s;
}

ScalarSequence ScalarSequence::custom(FloatRule f, std::string label) {
    ScalarSequence s;
    s.float_ = f;
    s.log_ = [f](std::size_t n) {
        Complex v = f(n);
        return v == Complex(0, 0) ? -std::numeric_limits<double>::infinity() : std::log(std::abs(v));
    };
    s.descriptor_ = {{"kind", "custom"}, {"label", label}};
    return s;
}

ScalarSequence ScalarSequence::from_json(const Json& j) {
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "constant") return constant(json_rational(require(j, "value")));
    if (kind == "linear") return linear(j.value("shift", 0L));
    if (kind == "power") return power(json_rational(require(j, "base")));
    if (kind == "exp_square") return exp_square(json_rational(require(j, "base")));
    if (kind == "factorial") return factorial();
    if (kind == "inverse_factorial") return inverse_factorial();
    if (kind == "power_over_factorial") return power_over_factorial(json_rational(require(j, "base")));
    if (kind == "explicit") {
        std::vector<Rational> v;
        for (const auto& x : require(j, "values")) v.push_back(json_rational(x));
        return explicit_values(std::move(v));
    }
    throw SchemaError("unknown scalar sequence kind '" + kind + "'");
}

// ---------------------------------------------------------------- WeightTriangle

void WeightTriangle::check(std::size_t n, std::size_t k) const {
    if (k > n) throw DomainError("weight index k=" + std::to_string(k) + " exceeds row n=" + std::to_string(n));
    if (rows_ && n >= *rows_)
        throw HorizonExceeded("weight table has " + std::to_string(*rows_) + " rows, row " + std::to_string(n) +
                              " requested");
}

Rational WeightTriangle::exact(std::size_t n, std::size_t k) const {
    check(n, k);
    if (!exact_) throw ModeMismatch("weights '" + descriptor_.value("kind", std::string("custom")) +
                                    "' have no exact values");
    return exact_(n, k);
}

Complex WeightTriangle::floating(std::size_t n, std::size_t k) const {
    check(n, k);
    return float_(n, k);
}

double WeightTriangle::log_abs(std::size_t n, std::size_t k) const {
    check(n, k);
    return log_(n, k);
}

std::pair<double, double> WeightTriangle::row_log_range(std::size_t n) const {
    if (row_constant_) {
        double l = log_abs(n, 0);
        return {l, l};
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t k = 0; k <= n; ++k) {
        double l = log_abs(n, k);
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    return {lo, hi};
}

WeightTriangle WeightTriangle::constant_one() {
    WeightTriangle w;
    w.exact_ = [](std::size_t, std::size_t) { return Rational(1); };
    w.float_ = [](std::size_t, std::size_t) { return Complex(1, 0); };
    w.log_ = [](std::size_t, std::size_t) { return 0.0; };
    w.row_constant_ = true;
    w.descriptor_ = {{"kind", "constant_one"}};
    return w;
}

WeightTriangle WeightTriangle::phi_reciprocal(ScalarSequence phi) {
    WeightTriangle w;
    auto p = std::make_shared<ScalarSequence>(std::move(phi));
    if (p->has_exact())
        w.exact_ = [p](std::size_t n, std::size_t) {
            Rational v = p->exact(n);
            if (sgn(v) == 0) throw DomainError("phi(" + std::to_string(n) + ") = 0");
            return Rational(1 / v);
        };
    w.float_ = [p](std::size_t n, std::size_t) { return Complex(1, 0) / p->floating(n); };
    w.log_ = [p](std::size_t n, std::size_t) { return -p->log_abs(n); };
    if (p->length()) w.rows_ = p->length();
    w.row_constant_ = true;
    w.descriptor_ = {{"kind", "phi_reciprocal"}, {"phi", p->descriptor()}};
    return w;
}

WeightTriangle WeightTriangle::cesaro() {
    WeightTriangle w;
    w.exact_ = [](std::size_t n, std::size_t k) {
        if (n == 0) return Rational(1);
        return ratio(static_cast<long>(n - k + 1), static_cast<long>(n));
    };
    w.float_ = [](std::size_t n, std::size_t k) {
        return Complex(n == 0 ? 1.0 : static_cast<double>(n - k + 1) / static_cast<double>(n), 0.0);
    };
    w.log_ = [](std::size_t n, std::size_t k) {
        return n == 0 ? 0.0 : std::log(static_cast<double>(n - k + 1) / static_cast<double>(n));
    };
    w.descriptor_ = {{"kind", "cesaro"}};
    return w;
}

WeightTriangle WeightTriangle::factorial_ratio() {
    WeightTriangle w;
    w.exact_ = [](std::size_t n, std::size_t k) { return ratio(factorial_z(k), factorial_z(n)); };
    w.float_ = [](std::size_t n, std::size_t k) { return Complex(std::exp(log_factorial(k) - log_factorial(n)), 0); };
    w.log_ = [](std::size_t n, std::size_t k) { return log_factorial(k) - log_factorial(n); };
    w.descriptor_ = {{"kind", "factorial_ratio"}};
    return w;
}

WeightTriangle WeightTriangle::explicit_table(std::vector<std::vector<Rational>> rows) {
    for (std::size_t n = 0; n < rows.size(); ++n)
        if (rows[n].size() != n + 1)
            throw DomainError("weight table row " + std::to_string(n) + " must have " + std::to_string(n + 1) +
                              " entries");
    WeightTriangle w;
    auto t = std::make_shared<std::vector<std::vector<Rational>>>(std::move(rows));
    w.rows_ = t->size();
    w.exact_ = [t](std::size_t n, std::size_t k) { return (*t)[n][k]; };
    w.float_ = [t](std::size_t n, std::size_t k) { return Complex(to_double((*t)[n][k]), 0); };
    w.log_ = [t](std::size_t n, std::size_t k) { return uslab::log_abs((*t)[n][k]); };
    Json jr = Json::array();
    for (const auto& row : *t) {
        Json r = Json::array();
        for (const auto& q : row) r.push_back(rational_json(q));
        jr.push_back(r);
    }
    w.descriptor_ = {{"kind", "explicit_table"}, {"rows", jr}};
    return w;
}

WeightTriangle WeightTriangle::custom(std::function<Complex(std::size_t, std::size_t)> rule, std::string label) {
    WeightTriangle w;
    w.float_ = rule;
    w.log_ = [rule](std::size_t n, std::size_t k) {
        Complex v = rule(n, k);
        return v == Complex(0, 0) ? -std::numeric_limits<double>::infinity() : std::log(std::abs(v));
    };
    w.descriptor_ = {{"kind", "custom"}, {"label", label}};
    return w;
}

WeightTriangle WeightTriangle::from_json(const Json& j) {
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "constant_one") return constant_one();
    if (kind == "phi_reciprocal") return phi_reciprocal(ScalarSequence::from_json(require(j, "phi")));
    if (kind == "cesaro") return cesaro();
    if (kind == "factorial_ratio") return factorial_ratio();
    if (kind == "explicit_table") {
        std::vector<std::vector<Rational>> rows;
        for (const auto& r : require(j, "rows")) {
            std::vector<Rational> row;
            for (const auto& x : r) row.push_back(json_rational(x));
            rows.push_back(std::move(row));
        }
        return explicit_table(std::move(rows));
    }
    throw SchemaError("unknown weight kind '" + kind + "'");
}

void WeightTriangle::validate(std::size_t horizon) const {
    std::size_t last = rows_ ? std::min(horizon, *rows_ - 1) : horizon;
    for (std::size_t n = 0; n <= last; ++n) {
        std::size_t kmax = row_constant_ ? 0 : n;
        for (std::size_t k = 0; k <= kmax; ++k)
            if (std::isinf(log_abs(n, k)) && log_abs(n, k) < 0)
                throw DomainError("weight alpha(" + std::to_string(n) + ", " + std::to_string(k) + ") is zero");
    }
}

std::vector<bool> WeightTriangle::convergence_witness(std::size_t horizon, double tol) const {
    std::size_t h = rows_ ? std::min(horizon, *rows_ - 1) : horizon;
    std::size_t half = h / 2;
    std::vector<bool> out;
    for (std::size_t k = 0; k <= half; ++k) {
        Complex a = floating(h, k), b = floating(half, k);
        double scale = std::max({1e-300, std::abs(a), std::abs(b)});
        out.push_back(std::abs(a - b) <= tol * std::max(1.0, scale));
    }
    return out;
}

// ---------------------------------------------------------------- IndexSequence

bool is_prime(std::size_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::size_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

IndexSequence IndexSequence::explicit_list(std::vector<std::size_t> values) {
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1]) throw DomainError("explicit index sequence must be strictly increasing");
    return IndexSequence(Kind::explicit_list, std::move(values));
}

bool IndexSequence::contains(std::size_t n) const {
    switch (kind_) {
        case Kind::all: return true;
        case Kind::even: return n % 2 == 0;
        case Kind::odd: return n % 2 == 1;
        case Kind::primes: return is_prime(n);
        case Kind::explicit_list: return std::binary_search(values_.begin(), values_.end(), n);
    }
    return false;
}

std::optional<std::size_t> IndexSequence::first_at_least(std::size_t n) const {
    switch (kind_) {
        case Kind::all: return n;
        case Kind::even: return n % 2 == 0 ? n : n + 1;
        case Kind::odd: return n % 2 == 1 ? n : n + 1;
        case Kind::primes: {
            std::size_t m = n;
            while (!is_prime(m)) ++m;
            return m;
        }
        case Kind::explicit_list: {
            auto it = std::lower_bound(values_.begin(), values_.end(), n);
            if (it == values_.end()) return std::nullopt;
            return *it;
        }
    }
    return std::nullopt;
}

std::vector<std::size_t> IndexSequence::elements_up_to(std::size_t limit) const {
    std::vector<std::size_t> out;
    for (auto n = first_at_least(0); n && *n <= limit; n = first_at_least(*n + 1)) out.push_back(*n);
    return out;
}

Json IndexSequence::descriptor() const {
    switch (kind_) {
        case Kind::all: return {{"kind", "all"}};
        case Kind::even: return {{"kind", "even"}};
        case Kind::odd: return {{"kind", "odd"}};
        case Kind::primes: return {{"kind", "primes"}};
        case Kind::explicit_list: return {{"kind", "explicit"}, {"values", values_}};
    }
    return {};
}

IndexSequence IndexSequence::from_json(const Json& j) {
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "all") return all();
    if (kind == "even") return even();
    if (kind == "odd") return odd();
    if (kind == "primes") return primes();
    if (kind == "explicit") return explicit_list(require(j, "values").get<std::vector<std::size_t>>());
    throw SchemaError("unknown index sequence kind '" + kind + "'");
}

}  // namespace uslab
