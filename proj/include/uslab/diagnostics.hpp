#pragma once
// Finite-horizon verdicts, exact identities, radius estimates, gap detection and
// independent certificate verification.

#include "uslab/certificate.hpp"

#include <functional>
#include <limits>

namespace uslab {

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct VerdictOptions {
    double margin = 0.05;
    std::size_t min_count = 5;  // rows in the top half that must clear each decisive A
    std::vector<double> a_grid = {1.5, 1.1, 1.01};
};

struct ConditionVerdict {
    std::string condition;
    std::size_t horizon = 0;
    std::vector<std::size_t> indices;  // sampled n in the index sequence, 1 <= n <= horizon
    std::vector<double> witness;       // one value per sampled n
    double estimate = 0.0;             // running extremum over the top half
    Verdict verdict = Verdict::inconclusive;
    std::vector<double> a_grid;
    std::vector<std::size_t> a_counts;  // top-half rows with every |alpha(n,k)| >= A^-n
    std::vector<bool> a_decisive;       // A >= 1/(1 - margin); finer A are advisory
    double margin = 0.0;
    std::string note;

    bool passed() const { return verdict == Verdict::pass; }
    Json to_json() const;
};

// m_n = min_k |alpha(n,k)|^(1/n) over n in mu. Pass when the top-half running max reaches
// 1 - margin and every decisive A is cleared by at least min_count top-half rows; fail when the
// running max stays below 1 - margin; inconclusive otherwise.
ConditionVerdict check_condition_cmu(const WeightTriangle& alpha, const IndexSequence& mu, std::size_t horizon,
                                     const VerdictOptions& opt = {});
// Same protocol on M_n = max_k |alpha(n,k)|^(1/n).
ConditionVerdict check_necessary(const WeightTriangle& alpha, const IndexSequence& mu, std::size_t horizon,
                                 const VerdictOptions& opt = {});
// |phi(n)|^(1/n) over n in mu; the liminf estimate is the top-half running min, pass iff it is
// within margin of 1.
ConditionVerdict phi_criterion(const ScalarSequence& phi, const IndexSequence& mu, std::size_t horizon,
                               const VerdictOptions& opt = {});

struct IdentityResult {
    Rational lhs, rhs;
    bool equal = false;
};
// sum_{l=n}^{2n} d^(l-n) l(l-1)...(l-n+1)  against  n! sum_{k=0}^{n} C(2n+1,k) d^k (1-d)^(n-k).
IdentityResult falling_factorial_identity(std::size_t n, const Rational& delta);

struct RootTestReport {
    double estimate = 0.0;  // running max of |a_n|^(1/n) over the top half of the nonzero indices
    std::vector<std::size_t> indices;
    std::vector<double> roots;
};
template <class T>
RootTestReport radius_root_test(const CoefficientSequence<T>& a, std::size_t horizon);

struct SeriesRadius {
    double R = 0.0;  // +infinity when the terms decay faster than geometrically
    double limsup_root = 0.0;
    double slope = 0.0;  // log-log slope of the roots over the top half
    bool infinite = false;
};
// Radius of sum z^n / (n! |alpha_n|), estimated from n = 1..horizon.
SeriesRadius series_R_of_alpha(const ScalarSequence& alpha, std::size_t horizon, double cap = 1e6);

struct GapWindow {
    std::size_t k = 0;
    std::size_t lo = 0, hi = 0;
    double window_max = 0.0;  // max |a_j|^(1/j) over the window
};
struct GapReport {
    std::vector<GapWindow> windows;
    bool decay_evidence = false;  // window maxima non-increasing and ending below where they start
};
using ShrinkRule = std::function<double(std::size_t)>;
inline double default_shrink(std::size_t k) { return 1.0 / std::log(static_cast<double>(k) + 2.0); }
// Windows [ceil(shrink(k) n_k), n_k] for the elements n_1 < n_2 < ... of n_list up to limit.
template <class T>
GapReport ostrowski_gap_detect(const CoefficientSequence<T>& a, const IndexSequence& n_list, std::size_t limit,
                               const ShrinkRule& shrink = default_shrink);

// 0, then r, -r for the positive rationals r in Calkin-Wilf order.
std::vector<Rational> enumerate_rationals(std::size_t count);

enum class RecordStatus { confirmed, violated, failed };
std::string to_string(RecordStatus s);

struct RecordCheck {
    std::string target_id;
    RecordStatus status = RecordStatus::confirmed;
    double claimed = 0.0;
    double recomputed = 0.0;          // at the certificate's density
    double recomputed_refined = 0.0;  // at kVerificationFactor x that density
    std::optional<double> small_on_L_recomputed;
    std::string reason;
    Json to_json() const;
};

struct VerificationReport {
    std::vector<RecordCheck> records;
    std::vector<std::string> structural;  // index-sequence and block-discipline violations
    bool all_confirmed() const;
    std::size_t violations() const;
    Json to_json() const;
};

inline constexpr double kReproduceRelTol = 1e-9;
inline constexpr double kReproduceAbsTol = 1e-14;
inline constexpr double kRefineAbsSlack = 1e-12;

// Recomputes every claim from the coefficients. A record is confirmed when the recomputation at
// the claimed density reproduces the claim, the refined error is <= epsilon and at most twice the
// claim, and small-on-L and exact-identity claims also hold. Throws DomainError when the family
// does not match the certificate.
template <class T>
VerificationReport verify_certificate(const CoefficientSequence<T>& a, const BasisFamily<T>& F,
                                      const Certificate& cert);

}  // namespace uslab
