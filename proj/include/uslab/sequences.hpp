#pragma once
// Scalar sequences, weight triangles and index sequences.

#include "uslab/scalar.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <vector>

namespace uslab {

using Json = nlohmann::json;

inline constexpr std::size_t kDefaultHorizon = 500;

// A sequence n -> s(n) with exact values where available and a log-magnitude that
// stays finite for values such as 2^(-n^2) at n = 500.
class ScalarSequence {
public:
    using ExactRule = std::function<Rational(std::size_t)>;
    using FloatRule = std::function<Complex(std::size_t)>;
    using LogRule = std::function<double(std::size_t)>;

    static ScalarSequence constant(Rational c);
    // s(n) = n + shift, with the zero value replaced by 1 so that 1/s(n) is defined.
    static ScalarSequence linear(long shift = 0);
    static ScalarSequence power(Rational base);           // base^n
    static ScalarSequence exp_square(Rational base);      // base^(n^2)
    static ScalarSequence factorial();                    // n!
    static ScalarSequence inverse_factorial();            // 1/n!
    static ScalarSequence power_over_factorial(Rational base);  // base^n / n!
    static ScalarSequence explicit_values(std::vector<Rational> values);
    // Float-only rule; exact() throws ModeMismatch.
    static ScalarSequence custom(FloatRule f, std::string label = "custom");
    static ScalarSequence from_json(const Json& j);

    Rational exact(std::size_t n) const;
    Complex floating(std::size_t n) const;
    template <class T>
    T value(std::size_t n) const {
        if constexpr (std::is_same_v<T, Rational>)
            return exact(n);
        else
            return floating(n);
    }
    double log_abs(std::size_t n) const;
    bool has_exact() const { return static_cast<bool>(exact_); }
    // Explicit sequences end; the rest are unbounded.
    std::optional<std::size_t> length() const { return length_; }
    const Json& descriptor() const { return descriptor_; }

private:
    ExactRule exact_;
    FloatRule float_;
    LogRule log_;
    std::optional<std::size_t> length_;
    Json descriptor_;
    void check(std::size_t n) const;
};

// Triangular weights alpha(n, k), 0 <= k <= n; every materialized entry must be nonzero.
class WeightTriangle {
public:
    static WeightTriangle constant_one();
    // alpha(n, k) = 1 / phi(n)
    static WeightTriangle phi_reciprocal(ScalarSequence phi);
    // alpha(n, k) = (n - k + 1) / n, and alpha(0, 0) = 1
    static WeightTriangle cesaro();
    // alpha(n, k) = k! / n!
    static WeightTriangle factorial_ratio();
    static WeightTriangle explicit_table(std::vector<std::vector<Rational>> rows);
    static WeightTriangle custom(std::function<Complex(std::size_t, std::size_t)> rule,
                                 std::string label = "custom");
    static WeightTriangle from_json(const Json& j);

    Rational exact(std::size_t n, std::size_t k) const;
    Complex floating(std::size_t n, std::size_t k) const;
    template <class T>
    T value(std::size_t n, std::size_t k) const {
        if constexpr (std::is_same_v<T, Rational>)
            return exact(n, k);
        else
            return floating(n, k);
    }
    double log_abs(std::size_t n, std::size_t k) const;
    // min_k and max_k of log|alpha(n, k)|.
    std::pair<double, double> row_log_range(std::size_t n) const;
    bool has_exact() const { return static_cast<bool>(exact_); }
    // Depends on n only; lets row scans skip the k loop.
    bool row_constant() const { return row_constant_; }
    std::optional<std::size_t> rows() const { return rows_; }
    const Json& descriptor() const { return descriptor_; }

    // Throws DomainError naming the first zero entry with n <= horizon.
    void validate(std::size_t horizon) const;

    // Advisory convergence witness: for each k <= horizon/2, whether
    // |alpha(horizon, k) - alpha(horizon/2, k)| is small relative to the entries.
    std::vector<bool> convergence_witness(std::size_t horizon, double tol = 1e-2) const;

private:
    std::function<Rational(std::size_t, std::size_t)> exact_;
    std::function<Complex(std::size_t, std::size_t)> float_;
    std::function<double(std::size_t, std::size_t)> log_;
    std::optional<std::size_t> rows_;
    bool row_constant_ = false;
    Json descriptor_;
    void check(std::size_t n, std::size_t k) const;
};

// Increasing sequences of nonnegative integers used to pick certifying rows.
class IndexSequence {
public:
    enum class Kind { all, even, odd, primes, explicit_list };

    static IndexSequence all() { return IndexSequence(Kind::all, {}); }
    static IndexSequence even() { return IndexSequence(Kind::even, {}); }
    static IndexSequence odd() { return IndexSequence(Kind::odd, {}); }
    static IndexSequence primes() { return IndexSequence(Kind::primes, {}); }
    static IndexSequence explicit_list(std::vector<std::size_t> values);
    static IndexSequence from_json(const Json& j);

    Kind kind() const { return kind_; }
    bool contains(std::size_t n) const;
    // Smallest element >= n, if any.
    std::optional<std::size_t> first_at_least(std::size_t n) const;
    std::vector<std::size_t> elements_up_to(std::size_t limit) const;
    Json descriptor() const;

private:
    IndexSequence(Kind k, std::vector<std::size_t> v) : kind_(k), values_(std::move(v)) {}
    Kind kind_;
    std::vector<std::size_t> values_;
};

bool is_prime(std::size_t n);

}  // namespace uslab
