#include "uslab/json_util.hpp"

namespace uslab {

Rational json_rational(const Json& j) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(mpz_class(j.dump()));
        if (j.is_number()) return parse_rational(j.dump());
    } catch (const DomainError& e) {
        throw SchemaError(std::string("bad rational: ") + e.what());
    }
    throw SchemaError("expected a rational, got " + j.dump());
}

Json rational_json(const Rational& q) { return q.get_str(); }

Complex json_complex(const Json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw SchemaError("complex values are [re, im]");
        return {to_double(json_rational(j[0])), to_double(json_rational(j[1]))};
    }
    return {to_double(json_rational(j)), 0.0};
}

Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

const Json& require(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing required key '") + key + "'");
    return j.at(key);
}

}  // namespace uslab
