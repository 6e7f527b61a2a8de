#include "uslab/diagnostics.hpp"

#include "uslab/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace uslab {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass-at-horizon";
        case Verdict::fail: return "fail-at-horizon";
        default: return "inconclusive";
    }
}

std::string to_string(RecordStatus s) {
    switch (s) {
        case RecordStatus::confirmed: return "confirmed";
        case RecordStatus::violated: return "violated";
        default: return "failed";
    }
}

Json ConditionVerdict::to_json() const {
    Json grid = Json::array();
    for (std::size_t i = 0; i < a_grid.size(); ++i)
        grid.push_back({{"A", a_grid[i]}, {"count", a_counts[i]}, {"decisive", static_cast<bool>(a_decisive[i])}});
    return {{"condition", condition}, {"horizon", horizon},  {"indices", indices},   {"witness", witness},
            {"estimate", estimate},   {"verdict", to_string(verdict)}, {"a_grid", grid}, {"margin", margin},
            {"note", note}};
}

namespace {

// Rows of mu in [1, horizon]; the top half is n > horizon / 2.
std::vector<std::size_t> sampled_rows(const IndexSequence& mu, std::size_t horizon) {
    std::vector<std::size_t> rows;
    for (auto n : mu.elements_up_to(horizon))
        if (n >= 1) rows.push_back(n);
    return rows;
}

void check_horizon(const WeightTriangle& alpha, std::size_t horizon) {
    if (alpha.rows() && horizon > *alpha.rows() - 1)
        throw HorizonExceeded("horizon " + std::to_string(horizon) + " exceeds the materialized weight rows");
}

// Shared protocol for the two weight-triangle conditions. use_min selects min_k or max_k.
ConditionVerdict triangle_condition(const std::string& name, const WeightTriangle& alpha, const IndexSequence& mu,
                                    std::size_t horizon, const VerdictOptions& opt, bool use_min) {
    check_horizon(alpha, horizon);
    ConditionVerdict v;
    v.condition = name;
    v.horizon = horizon;
    v.margin = opt.margin;
    v.a_grid = opt.a_grid;
    v.a_counts.assign(opt.a_grid.size(), 0);
    for (double A : opt.a_grid) {
        if (!(A > 1.0)) throw DomainError("A-grid values must exceed 1");
        v.a_decisive.push_back(A >= 1.0 / (1.0 - opt.margin) - 1e-12);
    }
    double running_max = -1.0;
    std::size_t top_rows = 0;
    for (auto n : sampled_rows(mu, horizon)) {
        auto [lo, hi] = alpha.row_log_range(n);
        const double lg = use_min ? lo : hi;
        const double w = std::exp(lg / static_cast<double>(n));
        v.indices.push_back(n);
        v.witness.push_back(w);
        if (2 * n <= horizon) continue;
        ++top_rows;
        running_max = std::max(running_max, w);
        // |alpha(n,k)| >= A^-n for every k (or for some k when testing the max).
        for (std::size_t i = 0; i < opt.a_grid.size(); ++i)
            if (lg >= -static_cast<double>(n) * std::log(opt.a_grid[i]) - 1e-12) ++v.a_counts[i];
    }
    v.estimate = std::max(running_max, 0.0);
    if (top_rows == 0) {
        v.verdict = Verdict::inconclusive;
        v.note = "no sampled rows in the top half of the horizon";
        return v;
    }
    const double threshold = 1.0 - opt.margin;
    bool counts_ok = true;
    for (std::size_t i = 0; i < opt.a_grid.size(); ++i)
        if (v.a_decisive[i] && v.a_counts[i] < opt.min_count) counts_ok = false;
    if (running_max >= threshold && counts_ok)
        v.verdict = Verdict::pass;
    else if (running_max < threshold)
        v.verdict = Verdict::fail;
    else
        v.verdict = Verdict::inconclusive;
    v.note = "finite-horizon estimate; margin " + std::to_string(opt.margin) +
             " is a tolerance choice, A below 1/(1-margin) reported as advisory counts";
    return v;
}

}  // namespace

ConditionVerdict check_condition_cmu(const WeightTriangle& alpha, const IndexSequence& mu, std::size_t horizon,
                                     const VerdictOptions& opt) {
    return triangle_condition("C_mu", alpha, mu, horizon, opt, true);
}

ConditionVerdict check_necessary(const WeightTriangle& alpha, const IndexSequence& mu, std::size_t horizon,
                                 const VerdictOptions& opt) {
    return triangle_condition("necessary", alpha, mu, horizon, opt, false);
}

ConditionVerdict phi_criterion(const ScalarSequence& phi, const IndexSequence& mu, std::size_t horizon,
                               const VerdictOptions& opt) {
    ConditionVerdict v;
    v.condition = "phi";
    v.horizon = horizon;
    v.margin = opt.margin;
    double running_min = std::numeric_limits<double>::infinity();
    for (auto n : sampled_rows(mu, horizon)) {
        const double lg = phi.log_abs(n);
        if (!std::isfinite(lg)) throw DomainError("phi(" + std::to_string(n) + ") is zero");
        const double w = std::exp(lg / static_cast<double>(n));
        v.indices.push_back(n);
        v.witness.push_back(w);
        if (2 * n > horizon) running_min = std::min(running_min, w);
    }
    if (!std::isfinite(running_min)) {
        v.verdict = Verdict::inconclusive;
        v.note = "no sampled rows in the top half of the horizon";
        return v;
    }
    v.estimate = running_min;
    v.verdict = std::abs(running_min - 1.0) <= opt.margin ? Verdict::pass : Verdict::fail;
    v.note = "liminf estimated by the top-half running min";
    return v;
}

IdentityResult falling_factorial_identity(std::size_t n, const Rational& delta) {
    if (delta <= 0 || delta >= 1) throw DomainError("delta must lie strictly between 0 and 1");
    IdentityResult r;
    r.lhs = 0;
    Rational dpow = 1;
    for (std::size_t l = n; l <= 2 * n; ++l) {
        mpz_class falling = 1;
        for (std::size_t i = 0; i < n; ++i) falling *= static_cast<unsigned long>(l - i);
        r.lhs += dpow * Rational(falling);
        dpow *= delta;
    }
    mpz_class nfact = 1;
    for (std::size_t i = 2; i <= n; ++i) nfact *= static_cast<unsigned long>(i);
    Rational sum = 0;
    const Rational comp = 1 - delta;
    for (std::size_t k = 0; k <= n; ++k) {
        Rational term = Rational(binomial(2 * n + 1, k));
        for (std::size_t i = 0; i < k; ++i) term *= delta;
        for (std::size_t i = 0; i < n - k; ++i) term *= comp;
        sum += term;
    }
    r.rhs = Rational(nfact) * sum;
    r.lhs.canonicalize();
    r.rhs.canonicalize();
    r.equal = r.lhs == r.rhs;
    return r;
}

template <class T>
RootTestReport radius_root_test(const CoefficientSequence<T>& a, std::size_t horizon) {
    if (horizon < 10) throw DomainError("root test needs a horizon of at least 10");
    RootTestReport rep;
    for (const auto& [k, v] : a.entries()) {
        if (k == 0 || k > horizon) continue;
        rep.indices.push_back(k);
        rep.roots.push_back(std::exp(ScalarTraits<T>::log_abs(v) / static_cast<double>(k)));
    }
    if (rep.indices.size() < 10)
        throw DomainError("root test needs at least 10 nonzero coefficients, found " + std::to_string(rep.indices.size()));
    const std::size_t top = rep.indices.back();
    for (std::size_t i = 0; i < rep.indices.size(); ++i)
        if (2 * rep.indices[i] > top) rep.estimate = std::max(rep.estimate, rep.roots[i]);
    return rep;
}

SeriesRadius series_R_of_alpha(const ScalarSequence& alpha, std::size_t horizon, double cap) {
    if (horizon < 4) throw DomainError("series radius needs a horizon of at least 4");
    SeriesRadius out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t n = 1; n <= horizon; ++n) {
        const double la = alpha.log_abs(n);
        if (!std::isfinite(la)) throw DomainError("alpha(" + std::to_string(n) + ") is zero");
        const double log_root = (-std::lgamma(static_cast<double>(n) + 1.0) - la) / static_cast<double>(n);
        if (2 * n <= horizon) continue;
        out.limsup_root = std::max(out.limsup_root, std::exp(log_root));
        const double x = std::log(static_cast<double>(n));
        sx += x;
        sy += log_root;
        sxx += x * x;
        sxy += x * log_root;
        ++m;
    }
    const double den = static_cast<double>(m) * sxx - sx * sx;
    out.slope = den != 0.0 ? (static_cast<double>(m) * sxy - sx * sy) / den : 0.0;
    // Roots decaying like a power of n (as (1/n!)^(1/n) ~ e/n does) mean an infinite radius.
    if (out.slope <= -0.5 || out.limsup_root == 0.0 || 1.0 / out.limsup_root > cap) {
        out.infinite = true;
        out.R = std::numeric_limits<double>::infinity();
    } else {
        out.R = 1.0 / out.limsup_root;
    }
    return out;
}

template <class T>
GapReport ostrowski_gap_detect(const CoefficientSequence<T>& a, const IndexSequence& n_list, std::size_t limit,
                               const ShrinkRule& shrink) {
    GapReport rep;
    std::size_t k = 0;
    for (auto n : n_list.elements_up_to(limit)) {
        if (n == 0) continue;
        ++k;
        const double e = shrink(k);
        const auto lo = static_cast<std::size_t>(std::ceil(e * static_cast<double>(n)));
        if (!(e > 0.0) || lo > n) throw DomainError("empty gap window at k = " + std::to_string(k));
        GapWindow w{k, std::max<std::size_t>(lo, 1), n, 0.0};
        for (auto it = a.entries().lower_bound(w.lo); it != a.entries().end() && it->first <= w.hi; ++it)
            w.window_max = std::max(w.window_max,
                                    std::exp(ScalarTraits<T>::log_abs(it->second) / static_cast<double>(it->first)));
        rep.windows.push_back(w);
    }
    if (rep.windows.empty()) throw DomainError("no gap windows below the limit");
    bool all_zero = true, non_increasing = true;
    for (std::size_t i = 0; i < rep.windows.size(); ++i) {
        if (rep.windows[i].window_max != 0.0) all_zero = false;
        if (i > 0 && rep.windows[i].window_max > rep.windows[i - 1].window_max) non_increasing = false;
    }
    rep.decay_evidence =
        all_zero || (non_increasing && rep.windows.back().window_max < rep.windows.front().window_max);
    return rep;
}

std::vector<Rational> enumerate_rationals(std::size_t count) {
    std::vector<Rational> out;
    if (count == 0) return out;
    out.push_back(0);
    Rational r = 1;
    while (out.size() < count) {
        out.push_back(r);
        if (out.size() < count) out.push_back(-r);
        // Calkin-Wilf successor 1 / (2 floor(r) - r + 1).
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
        r = 1 / (Rational(2 * fl) - r + 1);
        r.canonicalize();
    }
    return out;
}

Json RecordCheck::to_json() const {
    Json j = {{"target_id", target_id},   {"status", to_string(status)},
              {"claimed", claimed},       {"recomputed", recomputed},
              {"recomputed_refined", recomputed_refined}, {"reason", reason}};
    if (small_on_L_recomputed) j["small_on_L_recomputed"] = *small_on_L_recomputed;
    return j;
}

bool VerificationReport::all_confirmed() const { return violations() == 0; }

std::size_t VerificationReport::violations() const {
    std::size_t n = structural.size();
    for (const auto& r : records)
        if (r.status == RecordStatus::violated) ++n;
    return n;
}

Json VerificationReport::to_json() const {
    Json rec = Json::array();
    for (const auto& r : records) rec.push_back(r.to_json());
    return {{"records", rec}, {"structural", structural}, {"all_confirmed", all_confirmed()}};
}

namespace {

template <class T>
bool exact_match(const CoefficientSequence<T>& a, const BasisFamily<T>& F, const Target& t, std::size_t row) {
    if (t.is_scalar() && F.kind() == FamilyKind::scalar) {
        const T s = F.scalar_partial_sum(a, row);
        if constexpr (std::is_same_v<T, Rational>)
            return s == *t.value;
        else
            return std::abs(s - ScalarTraits<T>::from_rational(*t.value)) <= 1e-10 * (1.0 + std::abs(to_double(*t.value)));
    }
    auto hp = t.function.polynomial();
    if (!hp) return false;
    const Polynomial<T> S = F.partial_sum(a, row);
    if constexpr (std::is_same_v<T, Rational>) {
        return S == (hp->center() == S.center() ? *hp : hp->recentered(S.center()));
    } else {
        const CplxPoly h = to_complex_poly(*hp);
        const std::size_t n = std::max(S.coeffs().size(), h.coeffs().size());
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(S.coeff(k) - h.coeff(k)) > 1e-10 * (1.0 + std::abs(h.coeff(k)))) return false;
        return true;
    }
}

}  // namespace

template <class T>
VerificationReport verify_certificate(const CoefficientSequence<T>& a, const BasisFamily<T>& F,
                                      const Certificate& cert) {
    VerificationReport rep;
    if (cert.records.empty()) return rep;
    Json fam = F.descriptor();
    if (!cert.family.is_null() && cert.family != fam)
        throw DomainError("certificate family " + cert.family.dump() + " does not match " + fam.dump());
    const Mode want = std::is_same_v<T, Rational> ? Mode::exact : Mode::floating;
    if (cert.mode != want) throw DomainError("certificate mode does not match the coefficient type");

    std::optional<IndexSequence> mu;
    if (!cert.mu.is_null()) mu = IndexSequence::from_json(cert.mu);
    std::optional<std::size_t> prev_lambda;
    for (const auto& r : cert.records) {
        if (!r.ok) continue;
        if (mu && !mu->contains(r.lambda))
            rep.structural.push_back("target " + r.target_id + ": lambda " + std::to_string(r.lambda) +
                                     " is not in the index sequence");
        if (prev_lambda && r.lambda <= *prev_lambda)
            rep.structural.push_back("target " + r.target_id + ": lambda not strictly increasing");
        prev_lambda = r.lambda;
        if (F.horizon() && r.row > *F.horizon())
            throw DomainError("record row " + std::to_string(r.row) + " exceeds the family horizon");
    }
    for (std::size_t i = 1; i < cert.blocks.size(); ++i)
        if (cert.blocks[i].valuation <= cert.blocks[i - 1].degree)
            rep.structural.push_back("block " + std::to_string(i) + " starts at or below the previous block's degree");

    for (const auto& r : cert.records) {
        RecordCheck c;
        c.target_id = r.target_id;
        c.claimed = r.achieved_error;
        if (!r.ok) {
            // The claim describes the best uncommitted attempt; nothing in the series backs it.
            c.status = RecordStatus::failed;
            c.reason = "record reports a failed target";
            rep.records.push_back(std::move(c));
            continue;
        }
        const Target t = Target::from_json(r.target);
        const bool scalar = t.is_scalar();
        const CompactSet K = scalar ? t.K : t.K.with_density(r.sample_density);
        c.recomputed = record_error(a, F, t, r.row, K);
        c.recomputed_refined = scalar ? c.recomputed : record_error(a, F, t, r.row, K.refined());
        std::vector<std::string> why;
        if (std::abs(c.recomputed - c.claimed) > kReproduceRelTol * std::abs(c.claimed) + kReproduceAbsTol)
            why.push_back("claimed error not reproduced");
        if (r.small_on_L) {
            if (!r.block || *r.block >= cert.blocks.size()) {
                why.push_back("small-on-L claim without a block reference");
            } else {
                const Polynomial<T> B = block_polynomial(a, cert.blocks[*r.block]);
                const double s = sup_norm(B, r.small_on_L->L);
                const double s4 = sup_norm(B, r.small_on_L->L.refined());
                c.small_on_L_recomputed = s4;
                if (std::abs(s - r.small_on_L->achieved) >
                    kReproduceRelTol * std::abs(r.small_on_L->achieved) + kReproduceAbsTol)
                    why.push_back("small-on-L value not reproduced");
                if (s4 > r.small_on_L->bound + kRefineAbsSlack) why.push_back("small-on-L bound exceeded when refined");
            }
        }
        if (r.exact_identity && *r.exact_identity && !exact_match(a, F, t, r.row))
            why.push_back("exact identity does not hold");
        if (c.recomputed_refined > r.epsilon) why.push_back("refined error exceeds epsilon");
        if (c.recomputed_refined > 2.0 * c.claimed + kRefineAbsSlack) why.push_back("refined error exceeds twice the claim");
        c.status = why.empty() ? RecordStatus::confirmed : RecordStatus::violated;
        for (std::size_t i = 0; i < why.size(); ++i) c.reason += (i ? "; " : "") + why[i];
        rep.records.push_back(std::move(c));
    }
    return rep;
}

template RootTestReport radius_root_test(const CoefficientSequence<Rational>&, std::size_t);
template RootTestReport radius_root_test(const CoefficientSequence<Complex>&, std::size_t);
template GapReport ostrowski_gap_detect(const CoefficientSequence<Rational>&, const IndexSequence&, std::size_t,
                                        const ShrinkRule&);
template GapReport ostrowski_gap_detect(const CoefficientSequence<Complex>&, const IndexSequence&, std::size_t,
                                        const ShrinkRule&);
template VerificationReport verify_certificate(const CoefficientSequence<Rational>&, const BasisFamily<Rational>&,
                                               const Certificate&);
template VerificationReport verify_certificate(const CoefficientSequence<Complex>&, const BasisFamily<Complex>&,
                                               const Certificate&);

}  // namespace uslab
