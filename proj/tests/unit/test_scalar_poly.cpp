#include <doctest.h>

#include "uslab/evaluation.hpp"

#include <random>

using namespace uslab;

TEST_CASE("parse rationals") {
    CHECK(parse_rational("3/6") == ratio(1, 2));
    CHECK(parse_rational("-0.125") == ratio(-1, 8));
    CHECK(parse_rational("1e-3") == ratio(1, 1000));
    CHECK(parse_rational(" 7 ") == Rational(7));
    CHECK(parse_rational("2.5/0.5") == Rational(5));
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK_THROWS_AS(parse_rational("abc"), DomainError);
    CHECK(rational_from_double(0.1) != ratio(1, 10));
    CHECK(rational_from_double(0.75) == ratio(3, 4));
}

TEST_CASE("log magnitude of huge and tiny rationals") {
    mpz_class big;
    mpz_ui_pow_ui(big.get_mpz_t(), 2, 250000);
    Rational tiny(mpz_class(1), big);
    CHECK(log_abs(tiny) == doctest::Approx(-250000 * std::log(2.0)).epsilon(1e-12));
    CHECK(std::isinf(log_abs(Rational(0))));
    CHECK(to_double(tiny) == 0.0);
}

TEST_CASE("eval_poly exact and float") {
    RatPoly z2({0, 0, 1});
    CHECK(eval_poly(z2, Scalar(Rational(3))) == Rational(9));
    CplxPoly p({Complex(1, 0), Complex(2, 0)});
    Complex v = eval_poly(p, Scalar(Complex(0, 1)));
    CHECK(v == Complex(1, 2));
    CHECK_THROWS_AS(eval_poly(z2, Scalar(Complex(0, 1))), ModeMismatch);
    CHECK_THROWS_AS(eval_poly(p, Scalar(Rational(1))), ModeMismatch);
}

TEST_CASE("scalar arithmetic refuses mixed modes") {
    Scalar a(ratio(1, 3)), b(ratio(1, 6));
    CHECK((a + b).exact() == ratio(1, 2));
    CHECK_THROWS_AS(a + Scalar(Complex(1, 0)), ModeMismatch);
    CHECK_THROWS_AS(a / Scalar(Rational(0)), DomainError);
}

TEST_CASE("polynomial algebra") {
    RatPoly p({1, 2, 3});
    RatPoly q({0, 1});
    CHECK((p * q).coeffs() == std::vector<Rational>{0, 1, 2, 3});
    CHECK(p.derivative().coeffs() == std::vector<Rational>{2, 6});
    CHECK(p.valuation() == 0);
    CHECK((p * q).valuation() == 1);
    CHECK(RatPoly().degree() == -1);
    CHECK((p - p).is_zero());
    // Recentering keeps values.
    RatPoly r = p.recentered(ratio(3, 2));
    for (int i = -3; i <= 3; ++i) CHECK(r.eval(Rational(i, 2)) == p.eval(Rational(i, 2)));
    CHECK(r.recentered(Rational(0)) == p);
    CHECK(p.shifted_up(2).shifted_down(2) == p);
    CHECK_THROWS_AS(p.shifted_down(1), DomainError);
    CHECK(one_minus_x_pow<Rational>(3).coeffs() == std::vector<Rational>{1, -3, 3, -1});
}

TEST_CASE("sup norm of monomials on discs") {
    for (int n : {0, 1, 3, 7}) {
        CplxPoly zn = CplxPoly::monomial(n);
        double r = 0.75;
        CHECK(sup_norm(zn, CompactSet::disc(0.0, r)) == doctest::Approx(std::pow(r, n)).epsilon(1e-14));
        CHECK(sup_norm(RatPoly::monomial(n), CompactSet::disc(0.0, r)) == doctest::Approx(std::pow(r, n)));
    }
}

TEST_CASE("sup norm of x(1-x) on the unit interval is exactly 1/4") {
    RatPoly p({0, 1, -1});
    auto K = CompactSet::interval(0, 1);
    CHECK(sup_norm(p, K) == 0.25);
    CHECK(sup_norm(to_complex_poly(p), K) == 0.25);
}

TEST_CASE("sup norm rejects sparse sampling") {
    RatPoly p({1});
    CHECK_THROWS_AS(sup_norm(p, CompactSet::interval(0, 1, 64)), DomainError);
    CHECK_NOTHROW(sup_norm(p, CompactSet::interval(0, 1, 64), 32));
    CHECK(sup_norm(p, CompactSet::points({Complex(2, 0)})) == 1.0);
}

TEST_CASE("doubling the density never lowers the sampled sup norm") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Complex> c(1 + trial % 9);
        for (auto& v : c) v = {U(rng), U(rng)};
        CplxPoly p(c);
        auto K = trial % 2 ? CompactSet::disc({U(rng), U(rng)}, 0.5 + 0.5 * std::fabs(U(rng)))
                           : CompactSet::interval(-1, ratio(1, 2));
        double a = sup_norm(p, K), b = sup_norm(p, K.with_density(2 * K.density()));
        CHECK(b >= a * (1 - 1e-6));
    }
}

TEST_CASE("exact evaluation survives catastrophic cancellation") {
    // (x - 1)^40 expanded in monomials, evaluated at 1 + 2^-10.
    RatPoly p = RatPoly({-1, 1});
    RatPoly q = RatPoly::constant(1);
    for (int i = 0; i < 40; ++i) q = q * p;
    double x = 1.0 + std::ldexp(1.0, -10);
    ExactEvaluator ev(q, 2.0);
    CHECK(ev.real(x) == doctest::Approx(std::ldexp(1.0, -400)).epsilon(1e-12));
    CplxPoly qf = to_complex_poly(q);
    CHECK(std::abs(qf.eval(x) - std::ldexp(1.0, -400)) > 1e-20);  // doubles cannot
}

TEST_CASE("Hardy norm") {
    CHECK(hardy2_norm_sq(RatPoly({0, 1}), Rational(2)) == 4);
    CHECK(hardy2_norm_sq(RatPoly({3}), Rational(5)) == 9);
    CHECK(hardy2_norm_sq(CplxPoly({Complex(0, 0), Complex(0, 1)}), 2.0) == doctest::Approx(4.0));
    CHECK_THROWS_AS(hardy2_norm_sq(RatPoly({1}, 1), Rational(1)), DomainError);
}
