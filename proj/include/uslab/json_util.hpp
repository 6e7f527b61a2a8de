#pragma once
// JSON helpers shared by the descriptor and report code.

#include "uslab/scalar.hpp"

#include <json.hpp>

namespace uslab {

using Json = nlohmann::json;

struct SchemaError : Error {
    using Error::Error;
};

// Accepts "p/q" strings, decimal strings and JSON numbers (read through their decimal text).
Rational json_rational(const Json& j);
Json rational_json(const Rational& q);
// Accepts a number, a rational string or [re, im].
Complex json_complex(const Json& j);
Json complex_json(const Complex& z);

template <class T>
T json_scalar(const Json& j) {
    if constexpr (std::is_same_v<T, Rational>)
        return json_rational(j);
    else
        return json_complex(j);
}
template <class T>
Json scalar_json(const T& v) {
    if constexpr (std::is_same_v<T, Rational>)
        return rational_json(v);
    else
        return complex_json(v);
}

const Json& require(const Json& j, const char* key);

}  // namespace uslab
