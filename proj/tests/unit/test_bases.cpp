#include <doctest.h>

#include "uslab/basis.hpp"
#include "uslab/evaluation.hpp"
#include "uslab/json_util.hpp"

#include <random>

using namespace uslab;

TEST_CASE("weight kinds and the phi(0) convention") {
    auto w = WeightTriangle::phi_reciprocal(ScalarSequence::linear(0));
    CHECK(w.exact(0, 0) == 1);
    CHECK(w.exact(4, 2) == ratio(1, 4));
    auto c = WeightTriangle::cesaro();
    CHECK(c.exact(0, 0) == 1);
    CHECK(c.exact(4, 1) == 1);
    CHECK(c.exact(4, 4) == ratio(1, 4));
    auto sq = WeightTriangle::phi_reciprocal(ScalarSequence::exp_square(2));
    CHECK(sq.log_abs(500, 3) == doctest::Approx(-250000 * std::log(2.0)));
    CHECK(sq.floating(500, 3) == Complex(0, 0));  // underflows, which is why log_abs exists
    CHECK(WeightTriangle::factorial_ratio().exact(5, 2) == ratio(1, 60));
}

TEST_CASE("zero weights are rejected") {
    auto w = WeightTriangle::explicit_table({{Rational(1)}, {Rational(1), Rational(0)}});
    CHECK_THROWS_AS(w.validate(1), DomainError);
    CHECK_NOTHROW(w.validate(0));
    CHECK_THROWS_AS(w.exact(2, 0), HorizonExceeded);
    auto c = WeightTriangle::custom([](std::size_t n, std::size_t) { return Complex(n == 3 ? 0.0 : 1.0, 0); });
    CHECK_THROWS_AS(c.validate(5), DomainError);
    CHECK_THROWS_AS(c.exact(1, 0), ModeMismatch);
}

TEST_CASE("weights round-trip through JSON") {
    auto w = WeightTriangle::phi_reciprocal(ScalarSequence::power(ratio(3, 2)));
    auto w2 = WeightTriangle::from_json(w.descriptor());
    CHECK(w2.exact(7, 1) == w.exact(7, 1));
    CHECK_THROWS_AS(WeightTriangle::from_json(Json{{"kind", "nope"}}), SchemaError);
}

TEST_CASE("convergence witness") {
    auto w = WeightTriangle::phi_reciprocal(ScalarSequence::linear(0));
    auto wit = w.convergence_witness(400);
    CHECK(wit.size() == 201);
    CHECK(wit[0]);
}

TEST_CASE("index sequences") {
    auto p = IndexSequence::primes();
    CHECK(p.elements_up_to(20) == std::vector<std::size_t>{2, 3, 5, 7, 11, 13, 17, 19});
    CHECK(*IndexSequence::even().first_at_least(5) == 6);
    auto e = IndexSequence::explicit_list({1, 4, 9});
    CHECK(*e.first_at_least(2) == 4);
    CHECK(!e.first_at_least(10));
    CHECK_THROWS_AS(IndexSequence::explicit_list({3, 2}), DomainError);
}

TEST_CASE("scalar family 1/n reproduces the Cesaro partial sums") {
    auto F = BasisFamily<Rational>::scalar(WeightTriangle::phi_reciprocal(ScalarSequence::linear(0)));
    CoefficientSequence<Rational> a;
    a.set(0, 1);
    a.set(1, 1);
    CHECK(F.scalar_partial_sum(a, 0) == 1);
    CHECK(F.scalar_partial_sum(a, 1) == 2);
}

TEST_CASE("partial sums are linear in the coefficient sequence") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> U(-9, 9);
    std::vector<BasisFamily<Rational>> fams = {
        BasisFamily<Rational>::monomial(),
        BasisFamily<Rational>::weighted_monomial(WeightTriangle::cesaro(), 0, 1),
        BasisFamily<Rational>::bernstein(),
        BasisFamily<Rational>::binomial_bernstein(true),
        BasisFamily<Rational>::derivative_pair(ScalarSequence::inverse_factorial()),
    };
    for (const auto& F : fams) {
        for (int trial = 0; trial < 10; ++trial) {
            CoefficientSequence<Rational> a, b;
            for (std::size_t k = 0; k < 12; ++k) {
                a.set(k, ratio(U(rng), 1 + std::abs(U(rng))));
                b.set(k, ratio(U(rng), 1 + std::abs(U(rng))));
            }
            std::size_t n = 8 + trial % 4;
            CHECK(F.partial_sum(a + b, n) == F.partial_sum(a, n) + F.partial_sum(b, n));
            RatPoly direct;
            for (std::size_t k = 0; k <= n; ++k) direct += F.element(n, k).scaled(a.get(k));
            if (F.kind() == FamilyKind::weighted_monomial) direct = RatPoly(direct.coeffs(), F.center());
            CHECK(F.partial_sum(a, n) == direct);
        }
    }
}

TEST_CASE("open binomial Bernstein family drops the top element") {
    auto F = BasisFamily<Rational>::binomial_bernstein(true);
    CHECK(F.element(4, 4).is_zero());
    CHECK(F.element(4, 2).coeffs() == std::vector<Rational>{0, 0, 6, -12, 6});
    auto H = BasisFamily<Rational>::binomial_bernstein(false);
    CHECK(H.element(4, 4) == RatPoly::monomial(4));
}

TEST_CASE("Bernstein conversions") {
    // x = sum_k (k/n)-weighted basis: in the unnormalized basis x = sum_k C(n-1, k-1) x^k (1-x)^(n-k)
    RatPoly x({0, 1});
    auto b = monomial_to_bernstein(x, 3);
    CHECK(b == std::vector<Rational>{0, 1, 2, 1});
    CHECK(bernstein_to_monomial(b, 3) == x);
    CHECK_THROWS_AS(monomial_to_bernstein(RatPoly({0, 0, 1}), 1), DomainError);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> U(-50, 50);
    for (int t = 0; t < 20; ++t) {
        std::vector<Rational> c(1 + t);
        for (auto& v : c) v = ratio(U(rng), 1 + std::abs(U(rng)));
        RatPoly p(c);
        std::size_t n = c.size() + t % 3;
        CHECK(bernstein_to_monomial(monomial_to_bernstein(p, n), n) == p);
    }
}

TEST_CASE("derivative family sums: both routes agree") {
    RatPoly f({1, 1});
    CHECK(derivative_family_sum(f, 1, Rational(1)) == RatPoly({1}));
    RatPoly g({0, 0, 0, 1});  // z^3
    // alpha S_2 of 6 z, truncated at 2: 6 z
    CHECK(derivative_family_sum(g, 2, ratio(1, 6)) == RatPoly({0, 1}));
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> U(-20, 20);
    for (int t = 0; t < 30; ++t) {
        std::vector<Rational> c(2 + t);
        for (auto& v : c) v = ratio(U(rng), 1 + std::abs(U(rng)));
        RatPoly p(c);
        std::size_t n = 1 + t % 7;
        auto r = derivative_family_routes(p, n, ratio(1, 3));
        CHECK(r.via_family == r.via_derivative);
        std::vector<Complex> cf;
        for (const auto& q : c) cf.emplace_back(to_double(q), 0);
        CHECK_NOTHROW(derivative_family_sum(CplxPoly(cf), n, Complex(0.5, 0.25)));
    }
}

TEST_CASE("family descriptors round-trip") {
    std::vector<BasisFamily<Rational>> fams = {
        BasisFamily<Rational>::weighted_monomial(WeightTriangle::phi_reciprocal(ScalarSequence::linear(1)), 0, 1),
        BasisFamily<Rational>::bernstein(),
        BasisFamily<Rational>::binomial_bernstein(false),
        BasisFamily<Rational>::scalar(WeightTriangle::cesaro()),
        BasisFamily<Rational>::derivative_pair(ScalarSequence::constant(1)).with_horizon(99),
    };
    CoefficientSequence<Rational> a;
    for (std::size_t k = 0; k < 8; ++k) a.set(k, ratio(static_cast<long>(k) + 1, 3));
    for (const auto& F : fams) {
        auto G = BasisFamily<Rational>::from_json(F.descriptor());
        CHECK(G.descriptor() == F.descriptor());
        CHECK(G.partial_sum(a, 6) == F.partial_sum(a, 6));
    }
    CHECK_THROWS_AS(fams.back().partial_sum(a, 100), HorizonExceeded);
}

TEST_CASE("coefficient sequences enforce block order") {
    CoefficientSequence<Rational> a;
    a.add_block(0, {1, 2}, 1);
    CHECK_THROWS_AS(a.add_block(1, {3}, 2), DomainError);
    a.add_block(2, {Rational(0), Rational(5)}, 4);
    CHECK(a.blocks().size() == 2);
    CHECK(a.blocks()[1].degree == 3);
    CHECK(*a.max_index() == 3);
    CHECK(a.get(2) == 0);
}
