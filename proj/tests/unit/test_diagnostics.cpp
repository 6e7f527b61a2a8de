#include <doctest.h>

#include "uslab/diagnostics.hpp"

#include <cmath>
#include <set>

using namespace uslab;

TEST_CASE("falling factorial identity: hand-expanded cases") {
    auto r0 = falling_factorial_identity(0, ratio(1, 2));
    CHECK(r0.lhs == 1);
    CHECK(r0.rhs == 1);
    CHECK(r0.equal);
    auto r1 = falling_factorial_identity(1, ratio(1, 2));
    CHECK(r1.lhs == 2);
    CHECK(r1.rhs == 2);
    CHECK(r1.equal);
}

TEST_CASE("falling factorial identity: exact sweep") {
    for (std::size_t n = 0; n <= 15; ++n)
        for (auto d : {ratio(1, 3), ratio(1, 2), ratio(2, 3)}) {
            auto r = falling_factorial_identity(n, d);
            CHECK_MESSAGE(r.equal, "n=" << n << " delta=" << d.get_str());
        }
    CHECK_THROWS_AS(falling_factorial_identity(3, Rational(0)), DomainError);
    CHECK_THROWS_AS(falling_factorial_identity(3, Rational(1)), DomainError);
}

TEST_CASE("C_mu verdicts on closed-form weights") {
    auto mu = IndexSequence::all();
    auto one = check_condition_cmu(WeightTriangle::constant_one(), mu, 500);
    CHECK(one.verdict == Verdict::pass);
    CHECK(one.witness.size() == one.indices.size());
    CHECK(one.indices.size() == 500);

    auto inv_n = check_condition_cmu(WeightTriangle::phi_reciprocal(ScalarSequence::linear(0)), mu, 500);
    CHECK(inv_n.verdict == Verdict::pass);
    // n^(-1/n) at n = 251, the smallest top-half row.
    CHECK(inv_n.estimate == doctest::Approx(std::pow(500.0, -1.0 / 500.0) > std::pow(251.0, -1.0 / 251.0)
                                                ? std::pow(500.0, -1.0 / 500.0)
                                                : std::pow(251.0, -1.0 / 251.0)));
    // A = 1.01 is finer than the margin allows, so its count is advisory.
    CHECK_FALSE(inv_n.a_decisive.back());

    auto sq = check_condition_cmu(WeightTriangle::phi_reciprocal(ScalarSequence::exp_square(2)), mu, 500);
    CHECK(sq.verdict == Verdict::fail);
    CHECK(sq.witness[9] == doctest::Approx(std::pow(2.0, -10.0)));
}

TEST_CASE("C_mu fail verdicts stay fail as the horizon grows") {
    auto sq = WeightTriangle::phi_reciprocal(ScalarSequence::exp_square(2));
    auto two = WeightTriangle::phi_reciprocal(ScalarSequence::power(2));
    for (std::size_t h : {50, 100, 200, 400, 800}) {
        CHECK(check_condition_cmu(sq, IndexSequence::all(), h).verdict == Verdict::fail);
        CHECK(check_condition_cmu(two, IndexSequence::all(), h).verdict == Verdict::fail);
        CHECK(check_necessary(two, IndexSequence::even(), h).verdict == Verdict::fail);
    }
}

TEST_CASE("necessary condition") {
    auto mu = IndexSequence::all();
    CHECK(check_necessary(WeightTriangle::constant_one(), mu, 500).verdict == Verdict::pass);
    auto sq = check_necessary(WeightTriangle::phi_reciprocal(ScalarSequence::exp_square(2)), mu, 500);
    CHECK(sq.verdict == Verdict::fail);
    // k!/n! has its maximum 1 at k = n, while its minimum 1/n! sends C_mu to fail.
    auto fr = WeightTriangle::factorial_ratio();
    CHECK(check_necessary(fr, mu, 200).verdict == Verdict::pass);
    CHECK(check_condition_cmu(fr, mu, 200).verdict == Verdict::fail);
}

TEST_CASE("phi criterion") {
    auto mu = IndexSequence::all();
    auto lin = phi_criterion(ScalarSequence::linear(0), mu, 500);
    CHECK(lin.verdict == Verdict::pass);
    CHECK(lin.estimate == doctest::Approx(std::pow(500.0, 1.0 / 500.0)));
    CHECK(phi_criterion(ScalarSequence::power(2), mu, 500).verdict == Verdict::fail);
    CHECK(phi_criterion(ScalarSequence::power(2), mu, 500).estimate == doctest::Approx(2.0));
    CHECK(phi_criterion(ScalarSequence::constant(1), mu, 500).verdict == Verdict::pass);
    CHECK_THROWS_AS(phi_criterion(ScalarSequence::explicit_values({1, 2, 0, 3}), mu, 3), DomainError);
}

TEST_CASE("verdicts are consistent across the three tests") {
    auto mu = IndexSequence::all();
    auto lin = ScalarSequence::linear(0);
    auto pw = ScalarSequence::power(2);
    CHECK(check_condition_cmu(WeightTriangle::phi_reciprocal(lin), mu, 500).passed());
    CHECK(check_necessary(WeightTriangle::phi_reciprocal(lin), mu, 500).passed());
    CHECK(phi_criterion(lin, mu, 500).passed());
    CHECK(check_condition_cmu(WeightTriangle::phi_reciprocal(pw), mu, 500).verdict == Verdict::fail);
    CHECK(check_necessary(WeightTriangle::phi_reciprocal(pw), mu, 500).verdict == Verdict::fail);
    CHECK(phi_criterion(pw, mu, 500).verdict == Verdict::fail);
}

TEST_CASE("horizon beyond the materialized rows") {
    auto w = WeightTriangle::explicit_table({{Rational(1)}, {Rational(1), Rational(1)}});
    CHECK_THROWS_AS(check_condition_cmu(w, IndexSequence::all(), 5), HorizonExceeded);
}

TEST_CASE("root test") {
    CoefficientSequence<Rational> ones, pow2, invfact;
    Rational f = 1;
    for (std::size_t n = 0; n <= 200; ++n) {
        ones.set(n, 1);
        pow2.set(n, Rational(mpz_class(1) << static_cast<unsigned>(n)));
        if (n > 0) f /= static_cast<long>(n);
        invfact.set(n, f);
    }
    CHECK(radius_root_test(ones, 200).estimate == doctest::Approx(1.0));
    CHECK(radius_root_test(pow2, 200).estimate == doctest::Approx(2.0));
    const double e100 = radius_root_test(invfact, 100).estimate;
    const double e200 = radius_root_test(invfact, 200).estimate;
    CHECK(e200 < e100);
    CHECK(e200 < 0.03);
    CoefficientSequence<Rational> few;
    few.set(3, 1);
    CHECK_THROWS_AS(radius_root_test(few, 200), DomainError);
    CHECK_THROWS_AS(radius_root_test(ones, 5), DomainError);
}

TEST_CASE("series radius of the derivative weights") {
    CHECK(series_R_of_alpha(ScalarSequence::constant(1), 200).infinite);
    auto r1 = series_R_of_alpha(ScalarSequence::inverse_factorial(), 200);
    CHECK_FALSE(r1.infinite);
    CHECK(r1.R == doctest::Approx(1.0));
    auto r2 = series_R_of_alpha(ScalarSequence::power_over_factorial(2), 200);
    CHECK(r2.R == doctest::Approx(2.0));
    CHECK_THROWS_AS(series_R_of_alpha(ScalarSequence::explicit_values({1, 1, 0, 1, 1, 1}), 5), DomainError);
}

TEST_CASE("gap detection") {
    CoefficientSequence<Rational> zero, ones;
    for (std::size_t n = 0; n <= 300; ++n) ones.set(n, 1);
    auto ns = IndexSequence::explicit_list({10, 20, 40, 80, 160});
    auto gz = ostrowski_gap_detect(zero, ns, 300);
    CHECK(gz.decay_evidence);
    CHECK(gz.windows.size() == 5);
    for (const auto& w : gz.windows) CHECK(w.window_max == 0.0);
    auto g1 = ostrowski_gap_detect(ones, ns, 300);
    CHECK_FALSE(g1.decay_evidence);
    for (const auto& w : g1.windows) CHECK(w.window_max == doctest::Approx(1.0));
    CHECK(g1.windows[0].lo == static_cast<std::size_t>(std::ceil(10.0 / std::log(3.0))));
    CHECK_THROWS_AS(ostrowski_gap_detect(ones, ns, 300, [](std::size_t) { return 2.0; }), DomainError);
}

TEST_CASE("rational enumeration") {
    auto q = enumerate_rationals(9);
    REQUIRE(q.size() == 9);
    CHECK(q[0] == 0);
    CHECK(q[1] == 1);
    CHECK(q[2] == -1);
    CHECK(q[3] == ratio(1, 2));
    CHECK(q[5] == 2);
    CHECK(q[7] == ratio(1, 3));
    auto big = enumerate_rationals(401);
    std::set<std::string> seen;
    for (const auto& r : big) seen.insert(r.get_str());
    CHECK(seen.size() == big.size());
}

TEST_CASE("certificate verification on a hand-built series") {
    // S_n of the plain monomial family for a = (0, 1, 0, -1/6): x - x^3/6 against sin x on [-1/2, 1/2].
    CoefficientSequence<Rational> a;
    a.add_block(1, {Rational(1), Rational(0), ratio(-1, 6)}, 3);
    auto F = BasisFamily<Rational>::monomial();
    auto t = Target::function_on("sin", "sin(x)", CompactSet::interval(ratio(-1, 2), ratio(1, 2)), 1e-3);
    CertificateRecord r;
    r.target_id = t.id;
    r.lambda = r.row = 3;
    r.sample_density = 512;
    r.epsilon = t.epsilon;
    r.achieved_error = record_error(a, F, t, 3, t.K);
    r.ok = r.achieved_error <= r.epsilon;
    r.target = t.to_json();
    Certificate c;
    c.records = {r};
    c.family = F.descriptor();
    c.mu = IndexSequence::all().descriptor();
    c.blocks = a.blocks();
    CHECK(r.ok);
    CHECK(r.achieved_error == doctest::Approx(std::sin(0.5) - (0.5 - 0.125 / 6)).epsilon(1e-6));

    auto rep = verify_certificate(a, F, c);
    CHECK(rep.all_confirmed());
    REQUIRE(rep.records.size() == 1);
    CHECK(rep.records[0].status == RecordStatus::confirmed);

    auto round = Certificate::from_json(Json::parse(c.to_json().dump()));
    CHECK(verify_certificate(a, F, round).all_confirmed());
    auto a2 = series_from_json<Rational>(Json::parse(series_json(a).dump()));
    CHECK(a2.entries() == a.entries());
    CHECK(a2.blocks().size() == 1);

    Certificate tampered = c;
    tampered.records[0].achieved_error /= 2;
    auto bad = verify_certificate(a, F, tampered);
    CHECK_FALSE(bad.all_confirmed());
    CHECK(bad.records[0].status == RecordStatus::violated);

    Certificate wrong_mu = c;
    wrong_mu.mu = IndexSequence::even().descriptor();
    CHECK_FALSE(verify_certificate(a, F, wrong_mu).all_confirmed());

    Certificate other = c;
    other.family = BasisFamily<Rational>::bernstein().descriptor();
    CHECK_THROWS_AS(verify_certificate(a, F, other), DomainError);

    CHECK(verify_certificate(a, F, Certificate{}).records.empty());
}

TEST_CASE("verdict JSON") {
    auto v = check_condition_cmu(WeightTriangle::constant_one(), IndexSequence::all(), 20);
    Json j = v.to_json();
    CHECK(j["verdict"] == "pass-at-horizon");
    CHECK(j["a_grid"].size() == 3);
    CHECK(j["witness"].size() == 20);
}
