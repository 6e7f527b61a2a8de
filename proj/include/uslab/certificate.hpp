#pragma once
// Targets, certificates and their JSON forms.

#include "uslab/basis.hpp"
#include "uslab/compact_set.hpp"
#include "uslab/expression.hpp"
#include "uslab/json_util.hpp"

#include <optional>
#include <string>
#include <vector>

namespace uslab {

Json compact_set_json(const CompactSet& K);
CompactSet compact_set_from_json(const Json& j);

// One approximation request: a function (or a number, for scalar families) on K within epsilon.
// L, when present, is where the fresh block must stay small.
struct Target {
    std::string id;
    Expression function;
    std::optional<Rational> value;
    CompactSet K;
    double epsilon = 0.0;
    std::optional<CompactSet> L;

    bool is_scalar() const { return value.has_value(); }
    // Scalar targets are by definition reachable in one step; a function target is zero when
    // its expression expands to the zero polynomial.
    bool is_zero() const;
    Complex operator()(Complex z) const { return function(z); }

    static Target scalar(std::string id, Rational value, double epsilon);
    static Target function_on(std::string id, const std::string& expr, CompactSet K, double epsilon,
                              std::optional<CompactSet> L = std::nullopt);
    // Missing ids default to "t<index>".
    static Target from_json(const Json& j, std::size_t index = 0);
    Json to_json() const;
};

struct SmallOnL {
    CompactSet L;
    double achieved = 0.0;  // sup over L of the block polynomial, without family weights
    double bound = 0.0;
};

struct CertificateRecord {
    std::string target_id;
    std::size_t lambda = 0;  // the certifying index in the declared index sequence
    std::size_t row = 0;     // family row whose partial sum is measured (equals lambda except for paired families)
    double achieved_error = 0.0;  // at sample_density
    double epsilon = 0.0;
    std::size_t sample_density = 0;
    bool ok = false;
    std::optional<std::size_t> block;  // index of the block produced for this target
    std::optional<SmallOnL> small_on_L;
    std::optional<bool> exact_identity;  // partial sum equals the target exactly
    std::string note;
    Json target;  // Target::to_json of the request

    Json to_json() const;
    static CertificateRecord from_json(const Json& j);
};

struct Certificate {
    std::vector<CertificateRecord> records;
    Json family;
    Json mu;
    std::vector<Block> blocks;
    Mode mode = Mode::exact;
    bool success = true;
    Json diagnostics = Json::object();

    Json to_json() const;
    static Certificate from_json(const Json& j);
};

Json block_json(const Block& b);
Block block_from_json(const Json& j);

template <class T>
Json series_json(const CoefficientSequence<T>& a);
template <class T>
CoefficientSequence<T> series_from_json(const Json& j);

// Error of the family partial sum at `row` against the target: |S - value| for scalar targets,
// the sampled sup distance on K (at K's density) otherwise.
template <class T>
double record_error(const CoefficientSequence<T>& a, const BasisFamily<T>& F, const Target& t, std::size_t row,
                    const CompactSet& K);

// Plain power-series polynomial of the coefficients in a block.
template <class T>
Polynomial<T> block_polynomial(const CoefficientSequence<T>& a, const Block& b);

}  // namespace uslab
