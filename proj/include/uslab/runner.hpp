#pragma once
// Config-driven runs shared by the command-line tool and the Python module.
//
// A config names a command (construct, diagnose, verify, identity) and its inputs. A run returns
// a report whose every record traces back to a config target by id, the coefficient series when
// one was built, and the exit status the command-line tool should use.

#include "uslab/certificate.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace uslab {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::size_t kMaxHorizon = 10000;

enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitSchema = 2 };

struct RunOverrides {
    std::optional<Mode> mode;
    std::optional<std::uint64_t> seed;
};

struct RunResult {
    Json report;
    Json series;  // null unless a coefficient series was built
    int exit_code = kExitOk;
};

// Throws SchemaError for malformed configs; construction failures come back in the report.
RunResult run_config(const Json& config, const RunOverrides& overrides = {});

// Recheck every certificate in a report against a serialized series.
RunResult verify_report(const Json& report, const Json& series);

// Exact sweep of the falling-factorial identity for n = 0..n_max and each delta.
RunResult identity_sweep(std::size_t n_max, const std::vector<Rational>& deltas);

// One row per certificate record: target_id, lambda, error, epsilon, sample_density.
std::string report_csv(const Json& report);

// FNV-1a over the report dump with the timing and hash keys removed.
std::uint64_t fnv1a64(std::string_view bytes);
std::string determinism_hash(const Json& report);
// Adds the versions block and the determinism hash; timing stays outside the hash.
void seal_report(Json& report);

std::string version_string();

}  // namespace uslab
