#include "uslab/constructors.hpp"

#include "uslab/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace uslab {

IntervalStrategy strategy_from_string(const std::string& s) {
    if (s == "muntz") return IntervalStrategy::muntz;
    if (s == "blend") return IntervalStrategy::blend;
    throw DomainError("unknown interval strategy '" + s + "'");
}

std::string to_string(IntervalStrategy s) { return s == IntervalStrategy::muntz ? "muntz" : "blend"; }

namespace {

template <class T>
constexpr Mode mode_of() {
    return std::is_same_v<T, Rational> ? Mode::exact : Mode::floating;
}

template <class T>
Rational exact_of(const T& v) {
    if constexpr (std::is_same_v<T, Rational>) {
        return v;
    } else {
        if (v.imag() != 0.0) throw DomainError("interval constructions need real coefficients");
        return rational_from_double(v.real());
    }
}

template <class T>
CoefficientSequence<Rational> exact_shadow(const CoefficientSequence<T>& a) {
    if constexpr (std::is_same_v<T, Rational>) {
        return a;
    } else {
        CoefficientSequence<Rational> s;
        for (const auto& [k, v] : a.entries()) s.set(k, exact_of(v));
        s.set_blocks(a.blocks());
        return s;
    }
}

bool acceptable(double build, double refined, double eps) {
    return refined <= eps && refined <= 2.0 * build + kRefineAbsSlack;
}

// Running state shared by the block constructors.
template <class T>
struct Builder {
    BasisFamily<T> F;
    IndexSequence mu;
    CoefficientSequence<T> a;
    Certificate cert;
    std::size_t next_v = 0;  // smallest index the next block may use

    Builder(BasisFamily<T> f, IndexSequence m, std::size_t min_valuation)
        : F(std::move(f)), mu(std::move(m)), next_v(min_valuation) {
        cert.family = F.descriptor();
        cert.mu = mu.descriptor();
        cert.mode = mode_of<T>();
    }

    CertificateRecord record(const Target& t, std::size_t lambda, std::size_t row, double err, bool ok,
                             std::string note) const {
        CertificateRecord r;
        r.target_id = t.id;
        r.lambda = lambda;
        r.row = row;
        r.achieved_error = err;
        r.epsilon = t.epsilon;
        r.sample_density = t.is_scalar() ? 0 : t.K.density();
        r.ok = ok;
        r.note = std::move(note);
        r.target = t.to_json();
        return r;
    }

    void fail(const Target& t, double best, std::string note, std::size_t lambda = 0) {
        cert.records.push_back(record(t, lambda, lambda, best, false, std::move(note)));
    }

    // The target is met by the series as it stands at the smallest admissible row.
    bool already_met(const Target& t) {
        auto n = mu.first_at_least(next_v);
        if (!n) return false;
        if (!t.is_zero() && !(t.is_scalar() && F.is_scalar())) return false;
        const double build = record_error(a, F, t, *n, t.K);
        const double refined = t.is_scalar() ? build : record_error(a, F, t, *n, t.K.refined());
        if (!acceptable(build, refined, t.epsilon)) return false;
        cert.records.push_back(record(t, *n, *n, build, true, "met without a new block"));
        next_v = *n + 1;
        return true;
    }

    void commit(const Target& t, CoefficientSequence<T> trial, std::size_t lambda, std::size_t row, double build,
                std::string note) {
        a = std::move(trial);
        auto r = record(t, lambda, row, build, true, std::move(note));
        r.block = a.blocks().size() - 1;
        cert.records.push_back(std::move(r));
        next_v = a.blocks().back().degree + 1;
    }

    Construction<T> finish() {
        cert.blocks = a.blocks();
        cert.success = std::all_of(cert.records.begin(), cert.records.end(), [](const auto& r) { return r.ok; });
        return {a, cert, F};
    }
};

// ---- scalar families ----

template <class T>
void scalar_step(Builder<T>& B, const Target& t, const ConstructOptions& opt) {
    auto n = B.mu.first_at_least(B.next_v);
    if (!n || *n > opt.horizon) return B.fail(t, std::numeric_limits<double>::infinity(), "no admissible row below the horizon");
    const T diag = B.F.scalar_element(*n, *n);
    if (ScalarTraits<T>::is_zero(diag)) return B.fail(t, std::numeric_limits<double>::infinity(), "x(n,n) = 0", *n);
    const T q = ScalarTraits<T>::from_rational(*t.value);
    const T an = T((q - B.F.scalar_partial_sum(B.a, *n)) / diag);
    CoefficientSequence<T> trial = B.a;
    trial.add_block(*n, {an}, *n);
    const double err = record_error(trial, B.F, t, *n, t.K);
    if (err > t.epsilon) return B.fail(t, err, "rounding left the value outside tolerance", *n);
    B.commit(t, std::move(trial), *n, *n, err, "exact solve");
}

// ---- interval engine ----

struct IntervalPlan {
    std::size_t offset = 0;  // power shift of the family elements
    bool one_minus_x = false;
};

IntervalPlan interval_plan(const BasisFamily<Rational>& F) {
    switch (F.kind()) {
        case FamilyKind::weighted_monomial:
            if (sgn(F.center()) != 0) throw DomainError("interval engine needs monomials centered at 0");
            return {F.offset(), false};
        case FamilyKind::bernstein: return {0, false};
        case FamilyKind::binomial_bernstein: return {0, F.open_interval()};
        default: throw DomainError("interval engine does not handle this family");
    }
}

// Coefficients a_v..a_n whose row-n family combination equals W.
std::vector<Rational> extract_block(const BasisFamily<Rational>& F, const RatPoly& W, std::size_t v, std::size_t n) {
    std::vector<Rational> vals;
    switch (F.kind()) {
        case FamilyKind::weighted_monomial:
            for (std::size_t k = v; k <= n; ++k) vals.push_back(W.coeff(k + F.offset()) / F.weights().exact(n, k));
            break;
        case FamilyKind::bernstein: vals = monomial_to_bernstein(W.shifted_down(v), n - v); break;
        case FamilyKind::binomial_bernstein: {
            vals = monomial_to_bernstein(W.shifted_down(v), n - v);
            for (std::size_t i = 0; i < vals.size(); ++i) vals[i] /= Rational(binomial(n, v + i));
            if (F.open_interval()) {
                if (sgn(vals.back()) != 0) throw InternalMismatch("open binomial block has a nonzero top coefficient");
                vals.back() = 0;
            }
            break;
        }
        default: throw DomainError("interval engine does not handle this family");
    }
    return vals;
}

// Rows to try: doubling the block length from n0 - v, then the largest row within the cap.
std::vector<std::size_t> interval_rows(const IndexSequence& mu, std::size_t v, std::size_t n0, std::size_t cap) {
    std::vector<std::size_t> rows;
    std::size_t len = std::max<std::size_t>(n0 > v ? n0 - v : 1, 1);
    for (;; len *= 2) {
        auto n = mu.first_at_least(v + len);
        if (!n || *n > cap) break;
        if (rows.empty() || *n > rows.back()) rows.push_back(*n);
    }
    auto all = mu.elements_up_to(cap);
    if (!all.empty() && all.back() >= v + 1 && (rows.empty() || all.back() > rows.back())) rows.push_back(all.back());
    return rows;
}

template <class T>
void interval_step(Builder<T>& B, const Target& t, const ConstructOptions& opt, bool zero_at_origin) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const BasisFamily<Rational> Fx = BasisFamily<Rational>::from_json(B.F.descriptor());
    IntervalPlan plan;
    try {
        plan = interval_plan(Fx);
    } catch (const DomainError& e) {
        return B.fail(t, inf, e.what());
    }
    t.K.validate();
    const Interval& I = t.K.as_interval();
    const std::size_t v = B.next_v;
    const std::size_t s = plan.one_minus_x ? 1 : 0;

    // Exact polynomial model of the target.
    RatPoly Rh;
    if (auto hp = t.function.polynomial()) {
        Rh = *hp;
    } else {
        try {
            Rh = approx_real_on_interval([&t](double x) { return t.function.real(x); }, t.K, t.epsilon / 4,
                                         opt.max_degree)
                     .polynomial;
        } catch (const ApproximationFailure& e) {
            return B.fail(t, e.best_error, std::string("target model: ") + e.what());
        }
    }
    if (zero_at_origin && sgn(Rh.coeff(0)) != 0) Rh = Rh - RatPoly::constant(Rh.coeff(0));

    const std::size_t deg = static_cast<std::size_t>(std::max(0L, Rh.degree()));
    const std::size_t n0 = std::max(v + 1 + s, deg > plan.offset ? deg - plan.offset : 0);
    const auto exact_a = exact_shadow(B.a);
    const std::function<double(double)> h_real = [&t](double x) { return t.function.real(x); };

    double best = inf;
    std::size_t best_row = 0;
    std::string last_issue;
    for (std::size_t n : interval_rows(B.mu, v, n0, opt.max_degree)) {
        if (n < v + s) continue;
        const RatPoly prev = Fx.partial_sum(exact_a, n);
        RatPoly W;
        try {
            if (opt.strategy == IntervalStrategy::muntz) {
                const RatPoly r = Rh - prev;
                if (r.degree() > static_cast<long>(n + plan.offset)) continue;
                W = valuation_constrained_approx(r, I, v + plan.offset, n + plan.offset, plan.one_minus_x);
            } else {
                if (plan.one_minus_x) throw DomainError("blend strategy does not cover the open binomial family");
                const double radius = std::max(std::fabs(to_double(I.a)), std::fabs(to_double(I.b)));
                auto ev = std::make_shared<ExactEvaluator>(prev, radius);
                std::function<double(double)> r = [h_real, ev](double x) { return h_real(x) - ev->real(x); };
                const std::size_t p = v + plan.offset;
                const double eta = p == 0 ? 1.0 : default_blend_eta(r, t.K, t.epsilon);
                std::function<double(double)> g = p == 0 ? r : blend_divide(r, p, eta);
                W = approx_real_on_interval(g, t.K, t.epsilon / 3, n - v).polynomial.shifted_up(p);
            }
        } catch (const ApproximationFailure& e) {
            if (e.best_error < best) best = e.best_error, best_row = n;
            last_issue = e.what();
            continue;
        } catch (const DomainError& e) {
            return B.fail(t, best, e.what(), best_row);
        }
        const auto vals = extract_block(Fx, W, v, n);
        std::vector<T> tv;
        tv.reserve(vals.size());
        for (const auto& q : vals) tv.push_back(ScalarTraits<T>::from_rational(q));
        CoefficientSequence<T> trial = B.a;
        trial.add_block(v, tv, n);
        const double build = record_error(trial, B.F, t, n, t.K);
        const double refined = record_error(trial, B.F, t, n, t.K.refined());
        if (acceptable(build, refined, t.epsilon)) {
            B.commit(t, std::move(trial), n, n, build, "interval block, " + to_string(opt.strategy));
            return;
        }
        if (refined < best) best = refined, best_row = n;
    }
    std::string note = "no row up to " + std::to_string(opt.max_degree) + " met the tolerance";
    if (!last_issue.empty()) note += " (" + last_issue + ")";
    B.fail(t, best, note, best_row);
}

// ---- disc engine (two-disc Hermite blocks) ----

template <class T>
T disc_center(const Target& t) {
    const Complex c = t.K.as_disc().center;
    if constexpr (std::is_same_v<T, Rational>) {
        if (c.imag() != 0.0) throw ModeMismatch("exact mode needs real disc centers");
        return rational_from_double(c.real());
    } else {
        return c;
    }
}

template <class T>
Polynomial<T> target_polynomial(const Target& t) {
    auto hp = t.function.polynomial();
    if (!hp) throw DomainError("target '" + t.id + "' must be a polynomial");
    if constexpr (std::is_same_v<T, Rational>)
        return *hp;
    else
        return to_complex_poly(*hp);
}

// Whether block start m still lands on a row within the horizon.
inline bool attempt_row_fits(const IndexSequence& mu, std::size_t m, std::size_t horizon) {
    auto n = mu.first_at_least(std::max(2 * m - 1, m));
    return n && *n <= horizon;
}

// Blocks z^m Q matching the residual to order m at the center of K; m grows until the K error
// (epsilon/2 when an L is given, epsilon otherwise) and the L smallness both hold.
template <class T>
void hermite_step(Builder<T>& B, const Target& t, const ConstructOptions& opt, Json* tradeoff) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (B.F.kind() != FamilyKind::weighted_monomial || !ScalarTraits<T>::is_zero(B.F.center()) || B.F.offset() != 0)
        return B.fail(t, inf, "disc blocks need the weighted monomial family at 0");
    Polynomial<T> h;
    T c;
    try {
        h = target_polynomial<T>(t);
        c = disc_center<T>(t);
        if (ScalarTraits<T>::is_zero(c)) throw DomainError("disc blocks need K centered away from 0");
        t.K.validate();
        if (t.L) t.L->validate();
    } catch (const Error& e) {
        return B.fail(t, inf, e.what());
    }
    const double epsK = t.L ? t.epsilon / 2 : t.epsilon;
    double best = inf;
    std::size_t best_row = 0;
    Json curve = Json::array();
    struct Attempt {
        CoefficientSequence<T> trial;
        std::size_t n = 0;
        double build = 0, sl = 0;
        bool ok = false;
    };
    auto attempt = [&](std::size_t m) -> std::optional<Attempt> {
        auto n = B.mu.first_at_least(std::max(2 * m - 1, m));
        if (!n || *n > opt.horizon) return std::nullopt;
        const Polynomial<T> r = h - B.F.partial_sum(B.a, *n);
        const Polynomial<T> P = hermite_two_disc(r, c, m);
        std::vector<T> vals;
        for (std::size_t i = m; i <= *n; ++i) vals.push_back(T(P.coeff(i) / B.F.weights().template value<T>(*n, i)));
        Attempt at;
        at.trial = B.a;
        at.trial.add_block(m, vals, *n);
        at.n = *n;
        at.build = record_error(at.trial, B.F, t, *n, t.K);
        const double refined = record_error(at.trial, B.F, t, *n, t.K.refined());
        double sl4 = 0.0;
        if (t.L) {
            const Polynomial<T> Q = block_polynomial(at.trial, at.trial.blocks().back());
            at.sl = sup_norm(Q, *t.L);
            sl4 = sup_norm(Q, t.L->refined());
        }
        curve.push_back({{"m", m}, {"n", *n}, {"error_on_K", refined}, {"sup_on_L", sl4}});
        at.ok = acceptable(at.build, refined, epsK) && (!t.L || sl4 <= t.epsilon);
        const double score = std::max(refined / epsK, t.L ? sl4 / t.epsilon : 0.0) * t.epsilon;
        if (score < best) best = score, best_row = *n;
        return at;
    };
    // Gallop in m with doubling steps, then bisect back to the smallest m that passes.
    const std::size_t m0 = std::max<std::size_t>(B.next_v, 1);
    std::size_t lo = m0 - 1, step = 1, m = m0;
    std::optional<std::pair<std::size_t, Attempt>> found;
    bool clamped = false;
    while (!found) {
        auto at = attempt(m);
        if (!at) {
            // Past the horizon: try once more at the last admissible m, then stop.
            if (clamped || m == lo + 1) break;
            clamped = true;
            std::size_t hi = m;
            while (hi > lo + 1 && !attempt_row_fits(B.mu, hi - 1, opt.horizon)) --hi;
            if (hi - 1 <= lo) break;
            m = hi - 1;
            continue;
        }
        if (at->ok) {
            found.emplace(m, std::move(*at));
            break;
        }
        lo = m;
        if (clamped) break;
        step *= 2;
        m = lo + step;
    }
    if (found) {
        while (found->first > lo + 1) {
            const std::size_t mid = lo + (found->first - lo) / 2;
            auto at = attempt(mid);
            if (at && at->ok)
                found.emplace(mid, std::move(*at));
            else
                lo = mid;
        }
        auto& [mm, at] = *found;
        B.commit(t, std::move(at.trial), at.n, at.n, at.build, "two-disc Hermite block, m = " + std::to_string(mm));
        if (t.L) B.cert.records.back().small_on_L = SmallOnL{*t.L, at.sl, t.epsilon};
        if (tradeoff) (*tradeoff)[t.id] = curve;
        return;
    }
    if (tradeoff) (*tradeoff)[t.id] = curve;
    B.fail(t, best, "K and L conditions not met jointly below the horizon " + std::to_string(opt.horizon), best_row);
}

template <class T>
Construction<T> run_greedy(const BasisFamily<T>& F, const std::vector<Target>& targets, const IndexSequence& mu,
                           const ConstructOptions& opt, bool zero_at_origin, Json* tradeoff = nullptr) {
    Builder<T> B(F, mu, opt.min_valuation);
    for (const auto& t : targets) {
        if (B.already_met(t)) continue;
        if (t.is_scalar()) {
            if (!F.is_scalar()) {
                B.fail(t, std::numeric_limits<double>::infinity(), "scalar target needs a scalar family");
                continue;
            }
            scalar_step(B, t, opt);
        } else if (F.is_scalar()) {
            B.fail(t, std::numeric_limits<double>::infinity(), "function target on a scalar family");
        } else if (t.K.is_interval()) {
            interval_step(B, t, opt, zero_at_origin);
        } else if (t.K.is_disc()) {
            hermite_step(B, t, opt, tradeoff);
        } else {
            B.fail(t, std::numeric_limits<double>::infinity(), "function targets need an interval or a disc");
        }
    }
    return B.finish();
}

void require_vanishing_at_origin(const std::vector<Target>& targets) {
    for (const auto& t : targets) {
        if (t.is_scalar()) throw DomainError("target '" + t.id + "' must be a function");
        if (std::abs(t.function(Complex(0.0, 0.0))) > 1e-14)
            throw DomainError("target '" + t.id + "' does not vanish at 0; the space is functions vanishing at 0");
    }
}

}  // namespace

template <class T>
Construction<T> greedy_universal(const BasisFamily<T>& F, const std::vector<Target>& targets, const IndexSequence& mu,
                                 const ConstructOptions& opt) {
    return run_greedy(F, targets, mu, opt, false);
}

template <class T>
CoefficientSequence<T> interpolating_universal(const BasisFamily<T>& F, const std::vector<T>& q) {
    if (!F.is_scalar()) throw DomainError("interpolating solve needs a scalar family");
    CoefficientSequence<T> a;
    for (std::size_t n = 0; n < q.size(); ++n) {
        const T diag = F.scalar_element(n, n);
        if (ScalarTraits<T>::is_zero(diag)) throw DomainError("x(n,n) = 0 at n = " + std::to_string(n));
        a.add_block(n, {T((q[n] - F.scalar_partial_sum(a, n)) / diag)}, n);
    }
    return a;
}

BasisFamily<Rational> cesaro_family() {
    return BasisFamily<Rational>::scalar(WeightTriangle::phi_reciprocal(ScalarSequence::linear(0)));
}

CoefficientSequence<Rational> cesaro_universal(const std::vector<Rational>& q) {
    // lambda_n = n q_n - sum_{j<n} lambda_j, with lambda_0 = q_0.
    CoefficientSequence<Rational> a;
    Rational sum = 0;
    std::vector<Block> blocks;
    for (std::size_t n = 0; n < q.size(); ++n) {
        const Rational ln = n == 0 ? q[0] : Rational(q[n] * static_cast<long>(n) - sum);
        sum += ln;
        a.set(n, ln);
        blocks.push_back({n, n, n});
    }
    a.set_blocks(std::move(blocks));
    return a;
}

bool RiemannTable::all_equal() const {
    return conflicts.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.equal; });
}

BasisFamily<Rational> riemann_family() {
    return BasisFamily<Rational>::scalar(WeightTriangle::phi_reciprocal(ScalarSequence::linear(1)));
}

RiemannTable riemann_universal(const CoefficientSequence<Rational>& a, const std::vector<std::size_t>& primes) {
    RiemannTable t;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (!is_prime(primes[i])) throw DomainError(std::to_string(primes[i]) + " is not prime");
        if (i > 0 && primes[i] <= primes[i - 1]) throw DomainError("primes must be strictly increasing");
    }
    for (std::size_t p : primes)
        for (std::size_t j = 0; j < p; ++j) {
            const Rational x = ratio(static_cast<long>(j), static_cast<long>(p));
            const Rational v = a.get(j);
            auto [it, inserted] = t.values.emplace(x, v);
            if (!inserted && it->second != v) t.conflicts.push_back({x, it->second, v});
        }
    const auto F = riemann_family();
    for (std::size_t p : primes) {
        RiemannCheck c;
        c.p = p;
        c.riemann_sum = riemann_sum(t, p);
        c.partial_sum = F.scalar_partial_sum(a, p - 1);
        c.equal = c.riemann_sum == c.partial_sum;
        t.checks.push_back(std::move(c));
    }
    return t;
}

Rational riemann_sum(const RiemannTable& t, std::size_t n) {
    if (n == 0) throw DomainError("Riemann sum over zero points");
    Rational s = 0;
    for (std::size_t j = 0; j < n; ++j) {
        auto it = t.values.find(ratio(static_cast<long>(j), static_cast<long>(n)));
        if (it != t.values.end()) s += it->second;
    }
    return s / static_cast<long>(n);
}

Construction<Rational> riemann_solve(const std::vector<Rational>& q) {
    std::vector<std::size_t> rows;
    for (std::size_t p = 2; rows.size() < q.size(); ++p)
        if (is_prime(p)) rows.push_back(p - 1);
    std::vector<Target> targets;
    for (std::size_t i = 0; i < q.size(); ++i) targets.push_back(Target::scalar("q" + std::to_string(i), q[i], 1e-300));
    ConstructOptions opt;
    opt.horizon = rows.empty() ? 0 : rows.back();
    return run_greedy(riemann_family(), targets, IndexSequence::explicit_list(rows), opt, false);
}

template <class T>
Construction<T> fekete_construct(const std::vector<Target>& targets, const WeightTriangle& alpha,
                                 const IndexSequence& mu, const ConstructOptions& opt) {
    require_vanishing_at_origin(targets);
    for (const auto& t : targets)
        if (!t.K.is_interval()) throw DomainError("target '" + t.id + "' needs an interval");
    return run_greedy(BasisFamily<T>::weighted_monomial(alpha, T(0), 1), targets, mu, opt, true);
}

template <class T>
Construction<T> bernstein_construct(const std::vector<Target>& targets, const IndexSequence& mu,
                                    const ConstructOptions& opt) {
    require_vanishing_at_origin(targets);
    for (const auto& t : targets) {
        if (!t.K.is_interval()) throw DomainError("target '" + t.id + "' needs an interval");
        const auto& I = t.K.as_interval();
        if (sgn(I.a) < 0 || I.b > 1) throw DomainError("target '" + t.id + "' must live on [0,1]");
    }
    ConstructOptions o = opt;
    o.min_valuation = std::max<std::size_t>(o.min_valuation, 1);
    return run_greedy(BasisFamily<T>::bernstein(), targets, mu, o, true);
}

template <class T>
Construction<T> binomial_bernstein_construct(const std::vector<Target>& targets, const IndexSequence& mu,
                                             bool open_interval, const ConstructOptions& opt) {
    for (const auto& t : targets) {
        if (t.is_scalar() || !t.K.is_interval()) throw DomainError("target '" + t.id + "' needs an interval");
        const auto& I = t.K.as_interval();
        if (sgn(I.a) <= 0 || I.b > 1 || (open_interval && I.b == 1))
            throw DomainError("target '" + t.id + "' must lie in " + (open_interval ? "(0,1)" : "(0,1]"));
    }
    return run_greedy(BasisFamily<T>::binomial_bernstein(open_interval), targets, mu, opt, false);
}

template <class T>
Construction<T> taylor_universal_disc(double omega_radius, const WeightTriangle& alpha, const IndexSequence& mu,
                                      const std::vector<Target>& targets, const ConstructOptions& opt) {
    if (!(omega_radius > 0)) throw DomainError("the disc of convergence needs a positive radius");
    const auto verdict = check_condition_cmu(alpha, mu, opt.horizon, opt.verdict);
    Builder<T> B(BasisFamily<T>::weighted_monomial(alpha), mu, opt.min_valuation);
    B.cert.diagnostics["condition"] = verdict.to_json();
    if (verdict.verdict == Verdict::fail) {
        for (const auto& t : targets)
            B.fail(t, std::numeric_limits<double>::infinity(), "rejected: weights fail the growth condition at the horizon");
        return B.finish();
    }
    if (verdict.verdict == Verdict::inconclusive)
        B.cert.diagnostics["warning"] = "growth condition inconclusive at the horizon; proceeding";
    Json tradeoff = Json::object();
    for (const auto& t : targets) {
        if (t.is_scalar() || !t.K.is_disc() || !t.L || !t.L->is_disc()) {
            B.fail(t, std::numeric_limits<double>::infinity(), "needs a disc K and a disc L");
            continue;
        }
        const auto& K = t.K.as_disc();
        const auto& L = t.L->as_disc();
        if (std::abs(K.center) - K.radius <= omega_radius) {
            B.fail(t, std::numeric_limits<double>::infinity(), "K meets the closed disc of convergence");
            continue;
        }
        if (std::abs(L.center) + L.radius >= omega_radius) {
            B.fail(t, std::numeric_limits<double>::infinity(), "L is not inside the disc of convergence");
            continue;
        }
        if (B.already_met(t)) continue;
        hermite_step(B, t, opt, &tradeoff);
    }
    B.cert.diagnostics["tradeoff"] = tradeoff;
    return B.finish();
}

double derivative_block_log_bound(const RatPoly& h, double r, double log_abs_alpha_n, std::size_t n) {
    const long d = std::max(0L, h.degree());
    double maxb = 0.0;
    for (const auto& b : h.coeffs()) maxb = std::max(maxb, std::fabs(to_double(b)));
    if (maxb == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(static_cast<double>(d + 1)) + std::log1p(std::pow(r, static_cast<double>(d))) + std::log(maxb) +
           static_cast<double>(n) * std::log(r) - log_abs_alpha_n - std::lgamma(static_cast<double>(n) + 1.0);
}

namespace {

// a_{n+i} = b_i i! / (alpha_n (n+i)!)
template <class T>
std::vector<T> derivative_block(const RatPoly& h, const ScalarSequence& alpha, std::size_t n) {
    std::vector<T> vals;
    if constexpr (std::is_same_v<T, Rational>) {
        const Rational an = alpha.exact(n);
        mpz_class ratio_f = 1;  // (n+i)!/i!, starting at n!
        for (std::size_t i = 2; i <= n; ++i) ratio_f *= static_cast<unsigned long>(i);
        for (std::size_t i = 0; i < h.coeffs().size(); ++i) {
            if (i > 0) {
                ratio_f *= static_cast<unsigned long>(n + i);
                ratio_f /= static_cast<unsigned long>(i);
            }
            vals.push_back(h.coeffs()[i] / (an * Rational(ratio_f)));
        }
    } else {
        const Complex af = alpha.floating(n);
        const Complex phase = af == Complex(0, 0) ? Complex(1, 0) : af / std::abs(af);
        const double la = alpha.log_abs(n);
        for (std::size_t i = 0; i < h.coeffs().size(); ++i) {
            const double b = to_double(h.coeffs()[i]);
            const double lr = std::lgamma(static_cast<double>(i) + 1.0) -
                              std::lgamma(static_cast<double>(n + i) + 1.0) - la;
            vals.push_back(Complex(b * std::exp(lr), 0.0) / phase);
        }
    }
    return vals;
}

}  // namespace

template <class T>
Construction<T> derivative_universal_construct(const ScalarSequence& alpha, const IndexSequence& mu,
                                               const std::vector<Target>& targets, const ConstructOptions& opt) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    Builder<T> B(BasisFamily<T>::derivative_pair(alpha), mu, opt.min_valuation);
    const SeriesRadius R = series_R_of_alpha(alpha, std::max<std::size_t>(opt.horizon, 4));
    B.cert.diagnostics["series_radius"] = R.infinite ? Json("infinity") : Json(R.R);
    std::optional<std::size_t> prev_n, prev_deg;
    for (const auto& t : targets) {
        auto hp = t.is_scalar() ? std::nullopt : t.function.polynomial();
        if (!hp) {
            B.fail(t, inf, "derivative targets must be polynomials");
            continue;
        }
        if (!t.K.is_disc() && !t.K.is_interval()) {
            B.fail(t, inf, "K must be a disc or an interval");
            continue;
        }
        const std::size_t d = static_cast<std::size_t>(std::max(0L, hp->degree()));
        // Pollution guard: the new window [n, 2n] misses every earlier support and the new
        // support misses every earlier window.
        std::size_t lo = std::max({d, B.next_v, opt.min_valuation});
        if (prev_n) lo = std::max({lo, 2 * *prev_n + 1, *prev_deg + 1});
        if (hp->is_zero()) {
            auto n = mu.first_at_least(lo);
            if (n && *n <= opt.horizon) {
                const double err = record_error(B.a, B.F, t, 2 * *n, t.K);
                if (err <= t.epsilon) {
                    B.cert.records.push_back(B.record(t, *n, 2 * *n, err, true, "met without a new block"));
                    B.next_v = *n + 1;
                    continue;
                }
            }
        }
        const double r = t.L ? (t.L->is_disc() ? std::abs(t.L->as_disc().center) + t.L->as_disc().radius
                                               : t.L->max_distance_from(0.0))
                             : 0.0;
        double best = inf;
        std::size_t best_n = 0;
        bool done = false;
        for (auto n = mu.first_at_least(lo); n && *n <= opt.horizon; n = mu.first_at_least(*n + 1)) {
            const auto vals = derivative_block<T>(*hp, alpha, *n);
            CoefficientSequence<T> trial = B.a;
            trial.add_block(*n, vals, 2 * *n);
            // The block occupies [n, n + d]; its certifying row in the paired family is 2n.
            const double build = record_error(trial, B.F, t, 2 * *n, t.K);
            const double refined = record_error(trial, B.F, t, 2 * *n, t.K.refined());
            double sl = 0.0, sl4 = 0.0;
            if (t.L) {
                const auto Q = block_polynomial(trial, trial.blocks().back());
                sl = sup_norm(Q, *t.L);
                sl4 = sup_norm(Q, t.L->refined());
            }
            if (acceptable(build, refined, t.epsilon) && (!t.L || sl4 <= t.epsilon)) {
                const double lb = derivative_block_log_bound(*hp, r, alpha.log_abs(*n), *n);
                B.a = std::move(trial);
                auto rec = B.record(t, *n, 2 * *n, build, true, "derivative block, n = " + std::to_string(*n));
                rec.block = B.a.blocks().size() - 1;
                // Identity through this block alone (other blocks zeroed) and through the whole series.
                const auto routes = derivative_family_routes(block_polynomial(B.a, B.a.blocks().back()), *n,
                                                             alpha.template value<T>(*n));
                const Polynomial<T> h = target_polynomial<T>(t);
                if constexpr (std::is_same_v<T, Rational>) {
                    rec.exact_identity = routes.via_family == h && routes.via_derivative == h &&
                                         B.F.partial_sum(B.a, 2 * *n) == h;
                } else {
                    double dev = 0.0;
                    const auto S = B.F.partial_sum(B.a, 2 * *n);
                    for (std::size_t k = 0; k < std::max(S.coeffs().size(), h.coeffs().size()); ++k)
                        dev = std::max(dev, std::abs(S.coeff(k) - h.coeff(k)) / (1.0 + std::abs(h.coeff(k))));
                    rec.exact_identity = dev <= 1e-10;
                }
                if (t.L) rec.small_on_L = SmallOnL{*t.L, sl, t.epsilon};
                rec.note += ", bound " + std::to_string(std::exp(lb));
                B.cert.records.push_back(std::move(rec));
                B.next_v = B.a.blocks().back().degree + 1;
                prev_n = *n;
                prev_deg = B.a.blocks().back().degree;
                done = true;
                break;
            }
            const double score = std::max(refined, sl4);
            if (score < best) best = score, best_n = *n;
        }
        if (!done) {
            std::string why = "horizon " + std::to_string(opt.horizon) + " exceeded";
            if (t.L && !R.infinite && r >= R.R) why += "; L reaches the series radius " + std::to_string(R.R);
            B.fail(t, best, why, best_n);
        }
    }
    return B.finish();
}

template <class T>
CoefficientSequence<T> transfer_weights(const CoefficientSequence<T>& a, const WeightTriangle& from,
                                        const WeightTriangle& to) {
    CoefficientSequence<T> out;
    for (const auto& b : a.blocks())
        for (std::size_t k = b.valuation; k <= b.degree; ++k)
            out.set(k, T(a.get(k) * from.template value<T>(b.row, k) / to.template value<T>(b.row, k)));
    out.set_blocks(a.blocks());
    return out;
}

#define USLAB_CONSTRUCTORS(T)                                                                                       \
    template Construction<T> greedy_universal(const BasisFamily<T>&, const std::vector<Target>&, const IndexSequence&, \
                                              const ConstructOptions&);                                              \
    template CoefficientSequence<T> interpolating_universal(const BasisFamily<T>&, const std::vector<T>&);         \
    template Construction<T> fekete_construct(const std::vector<Target>&, const WeightTriangle&,                     \
                                              const IndexSequence&, const ConstructOptions&);                        \
    template Construction<T> bernstein_construct(const std::vector<Target>&, const IndexSequence&,                   \
                                                 const ConstructOptions&);                                           \
    template Construction<T> binomial_bernstein_construct(const std::vector<Target>&, const IndexSequence&, bool,    \
                                                          const ConstructOptions&);                                  \
    template Construction<T> taylor_universal_disc(double, const WeightTriangle&, const IndexSequence&,              \
                                                   const std::vector<Target>&, const ConstructOptions&);             \
    template Construction<T> derivative_universal_construct(const ScalarSequence&, const IndexSequence&,             \
                                                            const std::vector<Target>&, const ConstructOptions&);    \
    template CoefficientSequence<T> transfer_weights(const CoefficientSequence<T>&, const WeightTriangle&,           \
                                                     const WeightTriangle&);

USLAB_CONSTRUCTORS(Rational)
USLAB_CONSTRUCTORS(Complex)

}  // namespace uslab
