#include "uslab/basis.hpp"

#include "uslab/json_util.hpp"

namespace uslab {

mpz_class binomial(std::size_t n, std::size_t k) {
    mpz_class r;
    if (k > n) return 0;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

namespace {

template <class T>
T from_z(const mpz_class& z) {
    return ScalarTraits<T>::from_rational(Rational(z));
}

mpz_class falling(std::size_t k, std::size_t n) {  // k! / (k-n)!
    mpz_class r = 1;
    for (std::size_t i = k - n + 1; i <= k; ++i) r *= static_cast<unsigned long>(i);
    return r;
}

// sum_k c_k x^k (1-x)^(n-k) for the given per-index scalars, in monomial form.
template <class T>
Polynomial<T> bernstein_sum(const std::map<std::size_t, T>& c, std::size_t n) {
    std::vector<T> out(n + 1, T(0));
    for (const auto& [k, v] : c) {
        if (k > n) continue;
        const std::size_t m = n - k;
        mpz_class b = 1;
        for (std::size_t i = 0; i <= m; ++i) {
            T term = from_z<T>(b);
            if (i % 2 == 1) term = T(-term);
            out[k + i] = T(out[k + i] + v * term);
            b = b * static_cast<unsigned long>(m - i) / static_cast<unsigned long>(i + 1);
        }
    }
    return Polynomial<T>(std::move(out));
}

}  // namespace

template <class T>
BasisFamily<T> BasisFamily<T>::monomial(T center, std::size_t offset) {
    return weighted_monomial(WeightTriangle::constant_one(), center, offset);
}

template <class T>
BasisFamily<T> BasisFamily<T>::weighted_monomial(WeightTriangle weights, T center, std::size_t offset) {
    if constexpr (std::is_same_v<T, Rational>)
        if (!weights.has_exact()) throw ModeMismatch("exact family needs weights with exact values");
    BasisFamily f;
    f.kind_ = FamilyKind::weighted_monomial;
    f.weights_ = std::make_shared<WeightTriangle>(std::move(weights));
    f.center_ = center;
    f.offset_ = offset;
    return f;
}

template <class T>
BasisFamily<T> BasisFamily<T>::bernstein() {
    BasisFamily f;
    f.kind_ = FamilyKind::bernstein;
    return f;
}

template <class T>
BasisFamily<T> BasisFamily<T>::binomial_bernstein(bool open_interval) {
    BasisFamily f;
    f.kind_ = FamilyKind::binomial_bernstein;
    f.open_ = open_interval;
    return f;
}

template <class T>
BasisFamily<T> BasisFamily<T>::scalar(WeightTriangle values) {
    if constexpr (std::is_same_v<T, Rational>)
        if (!values.has_exact()) throw ModeMismatch("exact family needs exact values");
    BasisFamily f;
    f.kind_ = FamilyKind::scalar;
    f.weights_ = std::make_shared<WeightTriangle>(std::move(values));
    return f;
}

template <class T>
BasisFamily<T> BasisFamily<T>::derivative_pair(ScalarSequence alpha) {
    if constexpr (std::is_same_v<T, Rational>)
        if (!alpha.has_exact()) throw ModeMismatch("exact family needs an exact alpha sequence");
    BasisFamily f;
    f.kind_ = FamilyKind::derivative_pair;
    f.alpha_ = std::make_shared<ScalarSequence>(std::move(alpha));
    return f;
}

template <class T>
Json BasisFamily<T>::descriptor() const {
    Json j;
    switch (kind_) {
        case FamilyKind::weighted_monomial:
            j = {{"kind", "weighted_monomial"},
                 {"weights", weights_->descriptor()},
                 {"center", scalar_json(center_)},
                 {"offset", offset_}};
            break;
        case FamilyKind::bernstein: j = {{"kind", "bernstein"}}; break;
        case FamilyKind::binomial_bernstein: j = {{"kind", "binomial_bernstein"}, {"open", open_}}; break;
        case FamilyKind::scalar: j = {{"kind", "scalar"}, {"values", weights_->descriptor()}}; break;
        case FamilyKind::derivative_pair: j = {{"kind", "derivative_pair"}, {"alpha", alpha_->descriptor()}}; break;
    }
    if (horizon_) j["horizon"] = *horizon_;
    return j;
}

template <class T>
BasisFamily<T> BasisFamily<T>::from_json(const Json& j) {
    const std::string kind = require(j, "kind").get<std::string>();
    BasisFamily f;
    if (kind == "weighted_monomial" || kind == "monomial") {
        WeightTriangle w = j.contains("weights") ? WeightTriangle::from_json(j["weights"]) : WeightTriangle::constant_one();
        T c = j.contains("center") ? json_scalar<T>(j["center"]) : T(0);
        f = weighted_monomial(std::move(w), c, j.value("offset", std::size_t{0}));
    } else if (kind == "bernstein") {
        f = bernstein();
    } else if (kind == "binomial_bernstein") {
        f = binomial_bernstein(j.value("open", true));
    } else if (kind == "scalar") {
        f = scalar(WeightTriangle::from_json(require(j, "values")));
    } else if (kind == "derivative_pair") {
        f = derivative_pair(ScalarSequence::from_json(require(j, "alpha")));
    } else {
        throw SchemaError("unknown family kind '" + kind + "'");
    }
    if (j.contains("horizon")) f.horizon_ = j["horizon"].get<std::size_t>();
    return f;
}

template <class T>
void BasisFamily<T>::check_row(std::size_t n) const {
    if (horizon_ && n > *horizon_)
        throw HorizonExceeded("family row " + std::to_string(n) + " beyond horizon " + std::to_string(*horizon_));
}

template <class T>
T BasisFamily<T>::scalar_element(std::size_t n, std::size_t k) const {
    if (kind_ != FamilyKind::scalar) throw DomainError("scalar_element on a polynomial family");
    check_row(n);
    return weights_->template value<T>(n, k);
}

template <class T>
Polynomial<T> BasisFamily<T>::element(std::size_t n, std::size_t k) const {
    check_row(n);
    if (k > n) throw DomainError("family index k exceeds row n");
    switch (kind_) {
        case FamilyKind::weighted_monomial: {
            Polynomial<T> m = Polynomial<T>::monomial(k + offset_, center_);
            return m.scaled(weights_->template value<T>(n, k));
        }
        case FamilyKind::bernstein: return bernstein_sum<T>({{k, T(1)}}, n);
        case FamilyKind::binomial_bernstein:
            if (open_ && k == n) return Polynomial<T>();
            return bernstein_sum<T>({{k, from_z<T>(binomial(n, k))}}, n);
        case FamilyKind::scalar: return Polynomial<T>::constant(weights_->template value<T>(n, k));
        case FamilyKind::derivative_pair: {
            if (n % 2 == 1) return Polynomial<T>();
            std::size_t m = n / 2;
            if (k < m) return Polynomial<T>();
            T c = T(from_z<T>(falling(k, m)) * alpha_->template value<T>(m));
            return Polynomial<T>::monomial(k - m).scaled(c);
        }
    }
    return {};
}

template <class T>
Polynomial<T> BasisFamily<T>::partial_sum(const CoefficientSequence<T>& a, std::size_t n) const {
    check_row(n);
    switch (kind_) {
        case FamilyKind::weighted_monomial: {
            std::vector<T> c;
            for (const auto& [k, v] : a.entries()) {
                if (k > n) break;
                if (c.size() < k + offset_ + 1) c.resize(k + offset_ + 1, T(0));
                c[k + offset_] = T(v * weights_->template value<T>(n, k));
            }
            return Polynomial<T>(std::move(c), center_);
        }
        case FamilyKind::bernstein: {
            std::map<std::size_t, T> c;
            for (const auto& [k, v] : a.entries())
                if (k <= n) c[k] = v;
            return bernstein_sum<T>(c, n);
        }
        case FamilyKind::binomial_bernstein: {
            std::map<std::size_t, T> c;
            for (const auto& [k, v] : a.entries())
                if (k < n || (k == n && !open_)) c[k] = T(v * from_z<T>(binomial(n, k)));
            return bernstein_sum<T>(c, n);
        }
        case FamilyKind::scalar: return Polynomial<T>::constant(scalar_partial_sum(a, n));
        case FamilyKind::derivative_pair: {
            if (n % 2 == 1) return Polynomial<T>();
            std::size_t m = n / 2;
            std::vector<T> c;
            T am = alpha_->template value<T>(m);
            for (const auto& [k, v] : a.entries()) {
                if (k > n) break;
                if (k < m) continue;
                if (c.size() < k - m + 1) c.resize(k - m + 1, T(0));
                c[k - m] = T(v * from_z<T>(falling(k, m)) * am);
            }
            return Polynomial<T>(std::move(c));
        }
    }
    return {};
}

template <class T>
T BasisFamily<T>::scalar_partial_sum(const CoefficientSequence<T>& a, std::size_t n) const {
    if (kind_ != FamilyKind::scalar) throw DomainError("scalar_partial_sum on a polynomial family");
    check_row(n);
    T s(0);
    for (const auto& [k, v] : a.entries()) {
        if (k > n) break;
        s = T(s + v * weights_->template value<T>(n, k));
    }
    return s;
}

template <class T>
std::vector<T> monomial_to_bernstein(const Polynomial<T>& p, std::size_t n) {
    if (!ScalarTraits<T>::is_zero(p.center())) throw DomainError("Bernstein conversion needs a polynomial centered at 0");
    if (p.degree() > static_cast<long>(n))
        throw DomainError("Bernstein degree " + std::to_string(n) + " below polynomial degree " +
                          std::to_string(p.degree()));
    // x^j = sum_{k >= j} C(n-j, k-j) x^k (1-x)^(n-k)
    std::vector<T> b(n + 1, T(0));
    for (std::size_t j = 0; j < p.coeffs().size(); ++j) {
        const T& c = p.coeffs()[j];
        if (ScalarTraits<T>::is_zero(c)) continue;
        mpz_class bin = 1;
        for (std::size_t k = j; k <= n; ++k) {
            b[k] = T(b[k] + c * from_z<T>(bin));
            bin = bin * static_cast<unsigned long>(n - k) / static_cast<unsigned long>(k - j + 1);
        }
    }
    return b;
}

template <class T>
Polynomial<T> bernstein_to_monomial(const std::vector<T>& b, std::size_t n) {
    if (b.size() > n + 1) throw DomainError("more Bernstein coefficients than degree + 1");
    std::map<std::size_t, T> c;
    for (std::size_t k = 0; k < b.size(); ++k)
        if (!ScalarTraits<T>::is_zero(b[k])) c[k] = b[k];
    return bernstein_sum<T>(c, n);
}

template <class T>
DerivativeRoutes<T> derivative_family_routes(const Polynomial<T>& f, std::size_t n, const T& alpha_n) {
    if (!ScalarTraits<T>::is_zero(f.center())) throw DomainError("derivative family sums need f centered at 0");
    // Family route: row 2n of the derivative-pair family with a_k the Taylor coefficients of f.
    std::vector<T> fam;
    for (std::size_t k = n; k <= 2 * n && k < f.coeffs().size(); ++k) {
        if (fam.size() < k - n + 1) fam.resize(k - n + 1, T(0));
        fam[k - n] = T(f.coeffs()[k] * from_z<T>(falling(k, n)) * alpha_n);
    }
    // Direct route: n-th derivative, truncated at degree n, times alpha_n.
    Polynomial<T> d = f;
    for (std::size_t i = 0; i < n; ++i) d = d.derivative();
    return {Polynomial<T>(std::move(fam)), d.truncated(n).scaled(alpha_n)};
}

template <class T>
Polynomial<T> derivative_family_sum(const Polynomial<T>& f, std::size_t n, const T& alpha_n) {
    auto r = derivative_family_routes(f, n, alpha_n);
    if constexpr (std::is_same_v<T, Rational>) {
        if (!(r.via_family == r.via_derivative)) throw InternalMismatch("derivative family routes disagree");
    } else {
        const auto& a = r.via_family.coeffs();
        const auto& b = r.via_derivative.coeffs();
        std::size_t m = std::max(a.size(), b.size());
        double scale = 0;
        for (const auto& v : b) scale = std::max(scale, std::abs(v));
        for (std::size_t k = 0; k < m; ++k) {
            Complex x = k < a.size() ? a[k] : Complex(0), y = k < b.size() ? b[k] : Complex(0);
            if (std::abs(x - y) > 1e-10 * std::max(1.0, scale))
                throw InternalMismatch("derivative family routes disagree at coefficient " + std::to_string(k));
        }
    }
    return r.via_family;
}

template class BasisFamily<Rational>;
template class BasisFamily<Complex>;
template std::vector<Rational> monomial_to_bernstein(const RatPoly&, std::size_t);
template std::vector<Complex> monomial_to_bernstein(const CplxPoly&, std::size_t);
template RatPoly bernstein_to_monomial(const std::vector<Rational>&, std::size_t);
template CplxPoly bernstein_to_monomial(const std::vector<Complex>&, std::size_t);
template DerivativeRoutes<Rational> derivative_family_routes(const RatPoly&, std::size_t, const Rational&);
template DerivativeRoutes<Complex> derivative_family_routes(const CplxPoly&, std::size_t, const Complex&);
template RatPoly derivative_family_sum(const RatPoly&, std::size_t, const Rational&);
template CplxPoly derivative_family_sum(const CplxPoly&, std::size_t, const Complex&);

}  // namespace uslab
