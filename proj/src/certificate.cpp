#include <limits>
#include "uslab/certificate.hpp"

#include "uslab/evaluation.hpp"

namespace uslab {

Json compact_set_json(const CompactSet& K) {
    if (K.is_interval()) {
        const auto& I = K.as_interval();
        return {{"type", "interval"}, {"a", rational_json(I.a)}, {"b", rational_json(I.b)}, {"density", K.density()}};
    }
    if (K.is_disc()) {
        const auto& D = K.as_disc();
        return {{"type", "disc"}, {"center", complex_json(D.center)}, {"radius", D.radius}, {"density", K.density()}};
    }
    Json pts = Json::array();
    for (const auto& z : K.as_points().points) pts.push_back(complex_json(z));
    return {{"type", "points"}, {"points", pts}};
}

CompactSet compact_set_from_json(const Json& j) {
    const std::string type = require(j, "type").get<std::string>();
    const std::size_t density = j.value("density", kDefaultSampleDensity);
    if (type == "interval") return CompactSet::interval(json_rational(require(j, "a")), json_rational(require(j, "b")), density);
    if (type == "disc") {
        const Json& r = require(j, "radius");
        const double radius = r.is_number() ? r.get<double>() : to_double(json_rational(r));
        return CompactSet::disc(json_complex(j.value("center", Json(0))), radius, density);
    }
    if (type == "points") {
        std::vector<Complex> pts;
        for (const auto& p : require(j, "points")) pts.push_back(json_complex(p));
        return CompactSet::points(std::move(pts));
    }
    throw SchemaError("unknown compact set type '" + type + "'");
}

bool Target::is_zero() const {
    if (value) return false;
    auto p = function.polynomial();
    return p && p->is_zero();
}

Target Target::scalar(std::string id, Rational value, double epsilon) {
    Target t;
    t.id = std::move(id);
    t.value = std::move(value);
    t.K = CompactSet::points({Complex(0.0, 0.0)});
    t.epsilon = epsilon;
    return t;
}

Target Target::function_on(std::string id, const std::string& expr, CompactSet K, double epsilon,
                           std::optional<CompactSet> L) {
    if (!(epsilon > 0.0)) throw DomainError("target tolerance must be > 0");
    Target t;
    t.id = std::move(id);
    t.function = Expression::parse(expr);
    t.K = std::move(K);
    t.epsilon = epsilon;
    t.L = std::move(L);
    return t;
}

Target Target::from_json(const Json& j, std::size_t index) {
    const std::string id = j.value("id", "t" + std::to_string(index));
    const double eps = require(j, "epsilon").get<double>();
    if (!(eps > 0.0)) throw SchemaError("target '" + id + "': epsilon must be > 0");
    if (j.contains("value")) return scalar(id, json_rational(j["value"]), eps);
    std::optional<CompactSet> L;
    if (j.contains("L")) L = compact_set_from_json(j["L"]);
    try {
        return function_on(id, require(j, "function").get<std::string>(), compact_set_from_json(require(j, "K")), eps, L);
    } catch (const DomainError& e) {
        throw SchemaError("target '" + id + "': " + e.what());
    }
}

Json Target::to_json() const {
    Json j = {{"id", id}, {"epsilon", epsilon}};
    if (value) {
        j["value"] = rational_json(*value);
        return j;
    }
    j["function"] = function.text();
    j["K"] = compact_set_json(K);
    if (L) j["L"] = compact_set_json(*L);
    return j;
}

Json CertificateRecord::to_json() const {
    Json j = {{"target_id", target_id},     {"lambda", lambda},   {"row", row},
              {"achieved_error", achieved_error}, {"epsilon", epsilon}, {"sample_density", sample_density},
              {"ok", ok},                   {"note", note},       {"target", target}};
    if (block) j["block"] = *block;
    if (exact_identity) j["exact_identity"] = *exact_identity;
    if (small_on_L)
        j["small_on_L"] = {{"L", compact_set_json(small_on_L->L)},
                           {"achieved", small_on_L->achieved},
                           {"bound", small_on_L->bound}};
    return j;
}

CertificateRecord CertificateRecord::from_json(const Json& j) {
    CertificateRecord r;
    r.target_id = require(j, "target_id").get<std::string>();
    r.lambda = require(j, "lambda").get<std::size_t>();
    r.row = j.value("row", r.lambda);
    const Json& err = require(j, "achieved_error");
    // JSON has no infinity; the writer emits null for it.
    r.achieved_error = err.is_null() ? std::numeric_limits<double>::infinity() : err.get<double>();
    r.epsilon = require(j, "epsilon").get<double>();
    r.sample_density = j.value("sample_density", std::size_t(0));
    r.ok = require(j, "ok").get<bool>();
    r.note = j.value("note", "");
    r.target = require(j, "target");
    if (j.contains("block")) r.block = j["block"].get<std::size_t>();
    if (j.contains("exact_identity")) r.exact_identity = j["exact_identity"].get<bool>();
    if (j.contains("small_on_L")) {
        const Json& s = j["small_on_L"];
        r.small_on_L = SmallOnL{compact_set_from_json(require(s, "L")), require(s, "achieved").get<double>(),
                                require(s, "bound").get<double>()};
    }
    return r;
}

Json block_json(const Block& b) { return {{"valuation", b.valuation}, {"degree", b.degree}, {"row", b.row}}; }
Block block_from_json(const Json& j) {
    return {require(j, "valuation").get<std::size_t>(), require(j, "degree").get<std::size_t>(),
            require(j, "row").get<std::size_t>()};
}

Json Certificate::to_json() const {
    Json rec = Json::array();
    for (const auto& r : records) rec.push_back(r.to_json());
    Json bl = Json::array();
    for (const auto& b : blocks) bl.push_back(block_json(b));
    return {{"records", rec},      {"family", family}, {"mu", mu},
            {"blocks", bl},        {"mode", to_string(mode)},
            {"success", success}, {"diagnostics", diagnostics}};
}

Certificate Certificate::from_json(const Json& j) {
    Certificate c;
    for (const auto& r : require(j, "records")) c.records.push_back(CertificateRecord::from_json(r));
    c.family = j.value("family", Json());
    c.mu = j.value("mu", Json());
    if (j.contains("blocks"))
        for (const auto& b : j["blocks"]) c.blocks.push_back(block_from_json(b));
    c.mode = mode_from_string(j.value("mode", "exact"));
    c.success = j.value("success", true);
    c.diagnostics = j.value("diagnostics", Json::object());
    return c;
}

template <class T>
Json series_json(const CoefficientSequence<T>& a) {
    Json entries = Json::array();
    for (const auto& [k, v] : a.entries()) entries.push_back(Json::array({k, scalar_json<T>(v)}));
    Json bl = Json::array();
    for (const auto& b : a.blocks()) bl.push_back(block_json(b));
    const Mode m = std::is_same_v<T, Rational> ? Mode::exact : Mode::floating;
    return {{"mode", to_string(m)}, {"entries", entries}, {"blocks", bl}};
}

template <class T>
CoefficientSequence<T> series_from_json(const Json& j) {
    const Mode want = std::is_same_v<T, Rational> ? Mode::exact : Mode::floating;
    if (j.contains("mode") && mode_from_string(j["mode"].get<std::string>()) != want)
        throw ModeMismatch("series mode does not match the requested scalar type");
    CoefficientSequence<T> a;
    for (const auto& e : require(j, "entries")) {
        if (!e.is_array() || e.size() != 2) throw SchemaError("series entries are [index, value]");
        a.set(e[0].get<std::size_t>(), json_scalar<T>(e[1]));
    }
    std::vector<Block> blocks;
    if (j.contains("blocks"))
        for (const auto& b : j["blocks"]) blocks.push_back(block_from_json(b));
    a.set_blocks(std::move(blocks));
    return a;
}

template <class T>
double record_error(const CoefficientSequence<T>& a, const BasisFamily<T>& F, const Target& t, std::size_t row,
                    const CompactSet& K) {
    if (t.is_scalar()) {
        if (!F.is_scalar()) throw DomainError("scalar target '" + t.id + "' needs a scalar family");
        const T diff = F.scalar_partial_sum(a, row) - ScalarTraits<T>::from_rational(*t.value);
        if constexpr (std::is_same_v<T, Rational>)
            return to_double(abs(diff));
        else
            return std::abs(diff);
    }
    const Polynomial<T> S = F.partial_sum(a, row);
    if constexpr (std::is_same_v<T, Rational>) {
        if (auto hp = t.function.polynomial()) return sup_distance_exact(S, *hp, K);
    }
    return sup_distance<T>(S, [&t](Complex z) { return t(z); }, K);
}

template <class T>
Polynomial<T> block_polynomial(const CoefficientSequence<T>& a, const Block& b) {
    std::vector<T> c(b.degree + 1, T(0));
    for (std::size_t k = b.valuation; k <= b.degree; ++k) c[k] = a.get(k);
    return Polynomial<T>(std::move(c));
}

template Json series_json(const CoefficientSequence<Rational>&);
template Json series_json(const CoefficientSequence<Complex>&);
template CoefficientSequence<Rational> series_from_json(const Json&);
template CoefficientSequence<Complex> series_from_json(const Json&);
template double record_error(const CoefficientSequence<Rational>&, const BasisFamily<Rational>&, const Target&,
                             std::size_t, const CompactSet&);
template double record_error(const CoefficientSequence<Complex>&, const BasisFamily<Complex>&, const Target&,
                             std::size_t, const CompactSet&);
template RatPoly block_polynomial(const CoefficientSequence<Rational>&, const Block&);
template CplxPoly block_polynomial(const CoefficientSequence<Complex>&, const Block&);

}  // namespace uslab
