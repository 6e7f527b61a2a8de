#include "uslab/runner.hpp"

#include "uslab/constructors.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#ifndef USLAB_VERSION
#define USLAB_VERSION "0.0.0"
#endif

namespace uslab {

std::string version_string() { return USLAB_VERSION; }

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string determinism_hash(const Json& report) {
    Json copy = report;
    copy.erase("timing");
    copy.erase("determinism_hash");
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << fnv1a64(copy.dump());
    return os.str();
}

void seal_report(Json& report) {
    report["schema_version"] = kSchemaVersion;
    report["versions"] = {{"uslab", version_string()}, {"gmp", gmp_version}, {"schema_version", kSchemaVersion}};
    report["determinism_hash"] = determinism_hash(report);
}

namespace {

using Clock = std::chrono::steady_clock;

// ---- config access; every malformed field becomes a SchemaError ----

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    return j.at(key);
}

template <class V>
V get_or(const Json& j, const char* key, V fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    try {
        return j.at(key).get<V>();
    } catch (const Json::exception&) {
        throw SchemaError(std::string("field '") + key + "' has the wrong type");
    }
}

std::size_t checked_horizon(std::size_t h) {
    if (h == 0 || h > kMaxHorizon)
        throw SchemaError("horizon must lie in [1, " + std::to_string(kMaxHorizon) + "], got " + std::to_string(h));
    return h;
}

double positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw SchemaError(std::string(what) + " must be positive and finite");
    return v;
}

VerdictOptions verdict_options(const Json& o) {
    VerdictOptions v;
    v.margin = get_or(o, "margin", v.margin);
    if (!(v.margin > 0 && v.margin < 1)) throw SchemaError("margin must lie in (0, 1)");
    v.min_count = get_or(o, "min_count", v.min_count);
    v.a_grid = get_or(o, "a_grid", v.a_grid);
    for (double A : v.a_grid)
        if (!(A > 1)) throw SchemaError("every A in a_grid must exceed 1");
    return v;
}

ConstructOptions construct_options(const Json& o) {
    ConstructOptions c;
    c.max_degree = get_or(o, "max_degree", c.max_degree);
    if (c.max_degree == 0 || c.max_degree > kMaxHorizon) throw SchemaError("max_degree must lie in [1, 10000]");
    c.horizon = checked_horizon(get_or(o, "horizon", c.horizon));
    try {
        c.strategy = strategy_from_string(get_or<std::string>(o, "strategy", to_string(c.strategy)));
    } catch (const DomainError& e) {
        throw SchemaError(e.what());
    }
    c.min_valuation = get_or(o, "min_valuation", c.min_valuation);
    c.verdict = verdict_options(o);
    return c;
}

std::vector<Rational> rational_list(const Json& j, const char* what) {
    if (j.is_object()) {
        if (j.contains("enumerate")) return enumerate_rationals(j.at("enumerate").get<std::size_t>());
        throw SchemaError(std::string(what) + " object must carry 'enumerate'");
    }
    if (!j.is_array()) throw SchemaError(std::string(what) + " must be a list of rationals");
    std::vector<Rational> out;
    for (const auto& v : j) out.push_back(json_rational(v));
    return out;
}

// Polynomials with coefficients drawn from a fixed list. Raw engine draws keep the stream
// identical across standard libraries.
std::vector<Target> random_targets(const Json& desc, std::uint64_t seed) {
    const std::size_t count = get_or<std::size_t>(desc, "count", 10);
    const std::size_t dmin = get_or<std::size_t>(desc, "degree_min", 0);
    const std::size_t dmax = get_or<std::size_t>(desc, "degree_max", 3);
    if (dmin > dmax) throw SchemaError("degree_min exceeds degree_max");
    std::vector<Rational> coeffs = desc.contains("coefficients") ? rational_list(desc.at("coefficients"), "coefficients")
                                                                 : std::vector<Rational>{1};
    if (coeffs.empty()) throw SchemaError("coefficient list is empty");
    const CompactSet K = compact_set_from_json(field(desc, "K"));
    std::optional<CompactSet> L;
    if (desc.contains("L")) L = compact_set_from_json(desc.at("L"));
    const double eps = positive(field(desc, "epsilon").get<double>(), "epsilon");
    const std::string prefix = get_or<std::string>(desc, "prefix", "r");
    std::mt19937_64 rng(seed);
    std::vector<Target> out;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t d = dmin + static_cast<std::size_t>(rng() % (dmax - dmin + 1));
        std::string expr;
        for (std::size_t k = 0; k <= d; ++k) {
            const Rational& c = coeffs[rng() % coeffs.size()];
            if (k) expr += " + ";
            expr += "(" + c.get_str() + ")";
            if (k) expr += "*z^" + std::to_string(k);
        }
        out.push_back(Target::function_on(prefix + std::to_string(i), expr, K, eps, L));
    }
    return out;
}

std::vector<Target> config_targets(const Json& cfg, std::uint64_t seed) {
    std::vector<Target> ts;
    if (cfg.contains("targets")) {
        const Json& arr = cfg.at("targets");
        if (!arr.is_array()) throw SchemaError("targets must be a list");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Json t = arr[i];
            // A top-level sample density fills in sets that do not name their own.
            if (cfg.contains("sample_density"))
                for (const char* key : {"K", "L"})
                    if (t.contains(key) && t[key].is_object() && !t[key].contains("density") &&
                        t[key].value("type", "") != "points")
                        t[key]["density"] = cfg.at("sample_density");
            ts.push_back(Target::from_json(t, i));
        }
    }
    if (cfg.contains("random_targets")) {
        auto more = random_targets(cfg.at("random_targets"), seed);
        ts.insert(ts.end(), more.begin(), more.end());
    }
    std::map<std::string, int> seen;
    for (const auto& t : ts)
        if (seen[t.id]++) throw SchemaError("duplicate target id '" + t.id + "'");
    return ts;
}

IndexSequence config_mu(const Json& cfg) {
    return cfg.contains("mu") ? IndexSequence::from_json(cfg.at("mu")) : IndexSequence::all();
}

// ---- report assembly ----

Json failure_entries(const Certificate& cert) {
    Json out = Json::array();
    for (const auto& r : cert.records) {
        if (r.ok) continue;
        Json f = {{"target_id", r.target_id}, {"best_error", r.achieved_error}, {"row", r.row},
                  {"epsilon", r.epsilon},     {"note", r.note}};
        if (cert.diagnostics.contains("tradeoff") && cert.diagnostics["tradeoff"].contains(r.target_id))
            f["tradeoff"] = cert.diagnostics["tradeoff"][r.target_id];
        out.push_back(std::move(f));
    }
    return out;
}

struct Outcome {
    Json body = Json::object();
    Json series;
    bool success = true;
};

void add_certificate(Outcome& out, const Certificate& cert) {
    out.body["certificates"].push_back(cert.to_json());
    for (auto& f : failure_entries(cert)) out.body["failures"].push_back(std::move(f));
    if (cert.diagnostics.contains("condition")) out.body["verdicts"].push_back(cert.diagnostics["condition"]);
    out.success = out.success && cert.success;
}

template <class T>
void add_construction(Outcome& out, const Construction<T>& c) {
    add_certificate(out, c.certificate);
    out.series = series_json(c.series);
}

// Interpolating-style constructions certify each prescribed value exactly.
template <class T>
Certificate interpolation_certificate(const BasisFamily<T>& F, const CoefficientSequence<T>& a,
                                      const std::vector<Rational>& q) {
    constexpr bool exact = std::is_same_v<T, Rational>;
    Certificate cert;
    cert.family = F.descriptor();
    cert.mu = IndexSequence::all().descriptor();
    cert.mode = ScalarTraits<T>::mode;
    cert.blocks = a.blocks();
    for (std::size_t n = 0; n < q.size(); ++n) {
        CertificateRecord r;
        const Target t = Target::scalar("q" + std::to_string(n), q[n], 1e-12);
        r.target_id = t.id;
        r.lambda = r.row = n;
        r.epsilon = t.epsilon;
        r.sample_density = 1;
        r.achieved_error = record_error(a, F, t, n, t.K);
        r.ok = exact ? r.achieved_error == 0.0 : r.achieved_error <= r.epsilon * std::max(1.0, std::fabs(to_double(q[n])));
        if (exact) r.exact_identity = r.ok;
        r.note = "forward substitution";
        r.target = t.to_json();
        cert.records.push_back(std::move(r));
    }
    cert.success = std::all_of(cert.records.begin(), cert.records.end(), [](const auto& r) { return r.ok; });
    return cert;
}

// Runs a constructor call; inputs it rejects still produce a report carrying the reason.
template <class F>
void guarded(Outcome& out, F&& call) {
    try {
        call();
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        out.success = false;
        out.body["failures"].push_back({{"target_id", nullptr}, {"note", std::string("rejected: ") + e.what()}});
    }
}

template <class T>
Outcome construct_in_mode(const std::string& name, const Json& cfg, const std::vector<Target>& targets,
                          const ConstructOptions& opt) {
    Outcome out;
    const IndexSequence mu = config_mu(cfg);
    const Json& o = cfg.contains("options") ? cfg.at("options") : Json::object();
    if (name == "greedy") {
        const auto F = BasisFamily<T>::from_json(field(cfg, "family"));
        guarded(out, [&] { add_construction(out, greedy_universal(F, targets, mu, opt)); });
    } else if (name == "interpolating") {
        const auto F = BasisFamily<T>::from_json(field(cfg, "family"));
        const auto qr = rational_list(field(cfg, "values"), "values");
        std::vector<T> q;
        for (const auto& v : qr) q.push_back(ScalarTraits<T>::from_rational(v));
        guarded(out, [&] {
            auto a = interpolating_universal(F, q);
            add_certificate(out, interpolation_certificate(F, a, qr));
            out.series = series_json(a);
        });
    } else if (name == "fekete") {
        const auto w = WeightTriangle::from_json(field(cfg, "weights"));
        guarded(out, [&] { add_construction(out, fekete_construct<T>(targets, w, mu, opt)); });
    } else if (name == "bernstein") {
        guarded(out, [&] { add_construction(out, bernstein_construct<T>(targets, mu, opt)); });
    } else if (name == "binomial_bernstein") {
        const bool open = get_or(o, "open_interval", true);
        guarded(out, [&] { add_construction(out, binomial_bernstein_construct<T>(targets, mu, open, opt)); });
    } else if (name == "taylor_disc") {
        const double omega = positive(get_or(o, "omega_radius", 1.0), "omega_radius");
        const auto w = WeightTriangle::from_json(field(cfg, "weights"));
        guarded(out, [&] { add_construction(out, taylor_universal_disc<T>(omega, w, mu, targets, opt)); });
    } else if (name == "derivative") {
        const auto alpha = ScalarSequence::from_json(field(cfg, "alpha"));
        std::optional<std::size_t> rt_h;
        if (o.contains("root_test_horizon")) rt_h = checked_horizon(o.at("root_test_horizon").get<std::size_t>());
        guarded(out, [&] {
            auto c = derivative_universal_construct<T>(alpha, mu, targets, opt);
            add_construction(out, c);
            if (rt_h) {
                const auto rt = radius_root_test(c.series, *rt_h);
                out.body["root_test"] = {{"estimate", rt.estimate}, {"indices", rt.indices}, {"roots", rt.roots}};
            }
        });
    } else {
        throw SchemaError("unknown constructor '" + name + "'");
    }
    return out;
}

Outcome run_construct(const std::string& name, const Json& cfg, Mode mode, std::uint64_t seed) {
    const ConstructOptions opt = construct_options(cfg.contains("options") ? cfg.at("options") : Json::object());
    if (name == "cesaro" || name == "riemann") {
        if (mode != Mode::exact) throw SchemaError(name + " runs in exact mode only");
        Outcome out;
        const auto q = rational_list(field(cfg, "values"), "values");
        if (name == "cesaro") {
            guarded(out, [&] {
                auto a = cesaro_universal(q);
                add_certificate(out, interpolation_certificate(cesaro_family(), a, q));
                out.series = series_json(a);
            });
        } else {
            auto sol = riemann_solve(q);
            add_construction(out, sol);
            std::vector<std::size_t> primes;
            for (std::size_t p = 2; primes.size() < q.size(); ++p)
                if (is_prime(p)) primes.push_back(p);
            const auto table = riemann_universal(sol.series, primes);
            Json checks = Json::array();
            for (const auto& c : table.checks)
                checks.push_back({{"p", c.p},
                                  {"riemann_sum", rational_json(c.riemann_sum)},
                                  {"partial_sum", rational_json(c.partial_sum)},
                                  {"equal", c.equal}});
            out.body["riemann"] = {{"checks", checks}, {"conflicts", table.conflicts.size()}, {"all_equal", table.all_equal()}};
            out.success = out.success && table.all_equal() && table.conflicts.empty();
        }
        return out;
    }
    const auto targets = config_targets(cfg, seed);
    return mode == Mode::exact ? construct_in_mode<Rational>(name, cfg, targets, opt)
                               : construct_in_mode<Complex>(name, cfg, targets, opt);
}

// lhs <= rhs over random polynomials, weights and radii 0 < r < R <= 2.
Json bernstein_inequality_fuzz(std::size_t trials, std::size_t degree_max, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::size_t violations = 0;
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t d = rng() % (degree_max + 1);
        std::vector<Complex> p(d + 1), alpha(d + 1);
        for (std::size_t k = 0; k <= d; ++k) {
            p[k] = {2 * unit() - 1, 2 * unit() - 1};
            alpha[k] = {2 * unit() - 1, 2 * unit() - 1};
        }
        double R = 2.0 * (1.0 - unit());  // (0, 2]
        double r = R * (0.01 + 0.98 * unit());
        const auto b = bernstein_bound_check(CplxPoly(p), alpha, r, R);
        if (!b.holds()) ++violations;
        if (b.rhs > 0) worst = std::max(worst, b.lhs / b.rhs);
    }
    return {{"condition", "bernstein_inequality"},
            {"trials", trials},
            {"degree_max", degree_max},
            {"seed", seed},
            {"violations", violations},
            {"worst_ratio", worst},
            {"verdict", violations == 0 ? "pass" : "fail"}};
}

Json hermite_rate(const Json& cfg) {
    const auto h = Expression::parse(get_or<std::string>(cfg, "function", "1")).polynomial();
    if (!h) throw SchemaError("hermite_rate needs a polynomial function");
    const Rational c = json_rational(field(cfg, "center"));
    const CompactSet K = compact_set_from_json(field(cfg, "K"));
    const std::size_t m_min = get_or<std::size_t>(cfg, "m_min", 5), m_max = get_or<std::size_t>(cfg, "m_max", 40);
    const std::size_t window = get_or<std::size_t>(cfg, "window", 10);
    if (m_min == 0 || m_max < m_min + window) throw SchemaError("hermite_rate needs 1 <= m_min and m_max >= m_min + window");
    std::vector<double> errs;
    for (std::size_t m = m_min; m <= m_max; ++m) errs.push_back(sup_distance_exact(hermite_two_disc(*h, c, m), *h, K));
    // Least-squares slope of log error against m over the last window points.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = errs.size() - window; i < errs.size(); ++i) {
        const double x = static_cast<double>(m_min + i), y = std::log(errs[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double w = static_cast<double>(window);
    const double slope = (w * sxy - sx * sy) / (w * sxx - sx * sx);
    bool decreasing = true;
    for (std::size_t i = errs.size() - window; i < errs.size(); ++i) decreasing = decreasing && errs[i] < errs[i - 1];
    const double limit = get_or(cfg, "slope_limit", std::log(0.9));
    return {{"condition", "hermite_rate"},
            {"errors", errs},
            {"m_min", m_min},
            {"slope", slope},
            {"slope_limit", limit},
            {"eventually_decreasing", decreasing},
            {"verdict", decreasing && slope <= limit ? "pass" : "fail"}};
}

Outcome run_diagnose(const std::string& name, const Json& cfg, std::uint64_t seed) {
    Outcome out;
    const Json& o = cfg.contains("options") ? cfg.at("options") : Json::object();
    const VerdictOptions vo = verdict_options(o);
    const std::size_t horizon = checked_horizon(get_or<std::size_t>(cfg, "horizon", kDefaultHorizon));
    const IndexSequence mu = config_mu(cfg);
    auto push = [&out](const ConditionVerdict& v) {
        out.body["verdicts"].push_back(v.to_json());
        out.success = out.success && v.passed();
    };
    if (name == "condition_cmu") {
        push(check_condition_cmu(WeightTriangle::from_json(field(cfg, "weights")), mu, horizon, vo));
    } else if (name == "necessary") {
        push(check_necessary(WeightTriangle::from_json(field(cfg, "weights")), mu, horizon, vo));
    } else if (name == "phi_criterion") {
        push(phi_criterion(ScalarSequence::from_json(field(cfg, "phi")), mu, horizon, vo));
    } else if (name == "consistency") {
        const auto phi = ScalarSequence::from_json(field(cfg, "phi"));
        const auto w = WeightTriangle::phi_reciprocal(phi);
        const auto a = check_condition_cmu(w, mu, horizon, vo);
        const auto b = check_necessary(w, mu, horizon, vo);
        const auto c = phi_criterion(phi, mu, horizon, vo);
        for (const auto* v : {&a, &b, &c}) out.body["verdicts"].push_back(v->to_json());
        // Agreement is reported on its own; success still needs every verdict to pass.
        out.body["consistent"] = a.verdict == b.verdict && b.verdict == c.verdict;
        out.success = a.passed() && b.passed() && c.passed();
    } else if (name == "series_radius") {
        const auto r = series_R_of_alpha(ScalarSequence::from_json(field(cfg, "alpha")), horizon);
        out.body["series_radius"] = {{"R", r.infinite ? Json("inf") : Json(r.R)},
                                     {"limsup_root", r.limsup_root},
                                     {"slope", r.slope},
                                     {"infinite", r.infinite}};
    } else if (name == "bernstein_inequality") {
        Json v = bernstein_inequality_fuzz(get_or<std::size_t>(cfg, "trials", 1000),
                                           get_or<std::size_t>(cfg, "degree_max", 50), seed);
        out.success = v["verdict"] == "pass";
        out.body["verdicts"].push_back(std::move(v));
    } else if (name == "hermite_rate") {
        Json v = hermite_rate(cfg);
        out.success = v["verdict"] == "pass";
        out.body["verdicts"].push_back(std::move(v));
    } else {
        throw SchemaError("unknown diagnostic '" + name + "'");
    }
    return out;
}

std::string identity_name(const std::string& name) {
    if (name == "falling-factorial" || name == "falling_factorial" || name == "lemma52") return "falling-factorial";
    throw SchemaError("unknown identity '" + name + "'");
}

Json identity_body(std::size_t n_max, const std::vector<Rational>& deltas, bool& all_equal) {
    if (n_max > kMaxHorizon) throw SchemaError("n_max must not exceed 10000");
    for (const auto& d : deltas)
        if (sgn(d) <= 0 || d >= 1) throw SchemaError("delta " + d.get_str() + " must lie strictly between 0 and 1");
    Json cases = Json::array();
    all_equal = true;
    for (const auto& d : deltas)
        for (std::size_t n = 0; n <= n_max; ++n) {
            const auto r = falling_factorial_identity(n, d);
            cases.push_back({{"n", n}, {"delta", rational_json(d)}, {"lhs", rational_json(r.lhs)},
                             {"rhs", rational_json(r.rhs)}, {"equal", r.equal}});
            all_equal = all_equal && r.equal;
        }
    return {{"name", "falling-factorial"}, {"n_max", n_max}, {"cases", cases},
            {"count", cases.size()}, {"all_equal", all_equal}};
}

Json load_json_file(const std::string& path);

template <class T>
Json verify_in_mode(const Json& report, const Json& series_j) {
    const auto series = series_from_json<T>(series_j);
    Json checks = Json::array();
    bool ok = true;
    for (const auto& cj : field(report, "certificates")) {
        const Certificate cert = Certificate::from_json(cj);
        const auto F = BasisFamily<T>::from_json(cert.family);
        const auto rep = verify_certificate(series, F, cert);
        ok = ok && rep.violations() == 0 && rep.structural.empty();
        checks.push_back(rep.to_json());
    }
    return {{"reports", checks}, {"no_violations", ok}};
}

RunResult finish(Outcome out, const Json& echo, const std::string& command, const std::string& name, Mode mode,
                 Clock::time_point start) {
    RunResult res;
    Json& rep = res.report;
    rep = std::move(out.body);
    rep["config"] = echo;
    rep["command"] = command;
    rep["name"] = name;
    rep["mode"] = to_string(mode);
    rep["success"] = out.success;
    for (const char* key : {"certificates", "verdicts", "failures"})
        if (!rep.contains(key)) rep[key] = Json::array();
    rep["timing"] = {{"wall_seconds", std::chrono::duration<double>(Clock::now() - start).count()}};
    seal_report(rep);
    res.series = std::move(out.series);
    res.exit_code = out.success ? kExitOk : kExitFailure;
    return res;
}

}  // namespace

RunResult identity_sweep(std::size_t n_max, const std::vector<Rational>& deltas) {
    const auto start = Clock::now();
    Outcome out;
    bool all_equal = true;
    out.body["identity"] = identity_body(n_max, deltas, all_equal);
    out.success = all_equal;
    Json echo = {{"schema_version", kSchemaVersion}, {"command", "identity"}, {"name", "falling-factorial"},
                 {"n_max", n_max}};
    for (const auto& d : deltas) echo["deltas"].push_back(rational_json(d));
    return finish(std::move(out), echo, "identity", "falling-factorial", Mode::exact, start);
}

RunResult verify_report(const Json& report, const Json& series) {
    const auto start = Clock::now();
    Outcome out;
    const Mode mode = mode_from_string(field(series, "mode").get<std::string>());
    out.body["verification"] = mode == Mode::exact ? verify_in_mode<Rational>(report, series)
                                                   : verify_in_mode<Complex>(report, series);
    out.success = out.body["verification"]["no_violations"].get<bool>();
    out.body["verified_hash"] = report.value("determinism_hash", "");
    Json echo = {{"schema_version", kSchemaVersion}, {"command", "verify"}};
    return finish(std::move(out), echo, "verify", "certificates", mode, start);
}

RunResult run_config(const Json& config, const RunOverrides& overrides) {
    const auto start = Clock::now();
    if (!config.is_object()) throw SchemaError("config must be a JSON object");
    if (get_or<int>(config, "schema_version", -1) != kSchemaVersion)
        throw SchemaError("config schema_version must be " + std::to_string(kSchemaVersion));
    const std::string command = field(config, "command").get<std::string>();
    Json echo = config;
    Mode mode = mode_from_string(get_or<std::string>(config, "mode", "exact"));
    if (overrides.mode) mode = *overrides.mode;
    std::uint64_t seed = get_or<std::uint64_t>(config, "seed", 0);
    if (overrides.seed) seed = *overrides.seed;
    echo["mode"] = to_string(mode);
    echo["seed"] = seed;

    try {
        if (command == "identity") {
            identity_name(get_or<std::string>(config, "name", "falling-factorial"));
            const std::size_t n_max = get_or<std::size_t>(config, "n_max", 15);
            std::vector<Rational> deltas = config.contains("deltas")
                                               ? rational_list(config.at("deltas"), "deltas")
                                               : std::vector<Rational>{ratio(1, 3), ratio(1, 2), ratio(2, 3)};
            Outcome out;
            bool all_equal = true;
            out.body["identity"] = identity_body(n_max, deltas, all_equal);
            out.success = all_equal;
            return finish(std::move(out), echo, command, "falling-factorial", Mode::exact, start);
        }
        if (command == "verify") {
            RunResult r = verify_report(load_json_file(field(config, "report").get<std::string>()),
                                        load_json_file(field(config, "series").get<std::string>()));
            r.report["config"] = echo;
            seal_report(r.report);
            return r;
        }
        const std::string name = field(config, "name").get<std::string>();
        Outcome out;
        if (command == "construct") {
            out = run_construct(name, config, mode, seed);
        } else if (command == "diagnose") {
            out = run_diagnose(name, config, seed);
        } else {
            throw SchemaError("unknown command '" + command + "'");
        }
        return finish(std::move(out), echo, command, name, mode, start);
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("config: ") + e.what());
    }
}

std::string report_csv(const Json& report) {
    std::ostringstream os;
    os << "target_id,lambda,error,epsilon,sample_density\n";
    char buf[64];
    auto num = [&buf](const Json& v) -> std::string {
        if (v.is_null()) return "inf";
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    };
    if (report.contains("certificates"))
        for (const auto& c : report.at("certificates"))
            for (const auto& r : c.at("records"))
                os << r.at("target_id").get<std::string>() << ',' << r.at("lambda").get<std::size_t>() << ','
                   << num(r.at("achieved_error")) << ',' << num(r.at("epsilon")) << ','
                   << r.at("sample_density").get<std::size_t>() << '\n';
    return os.str();
}

namespace {
Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
    }
}
}  // namespace

}  // namespace uslab
