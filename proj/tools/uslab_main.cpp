// uslab: run experiment configs, verify saved certificates, sweep the exact identity.

#include "uslab/runner.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using uslab::Json;

void write_file(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw uslab::Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw uslab::Error("write to '" + path + "' failed");
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw uslab::SchemaError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw uslab::SchemaError("'" + path + "' is not valid JSON: " + e.what());
    }
}

// The series lands next to the report unless a path is given.
std::string series_path_for(const std::string& report_path) {
    const auto dot = report_path.rfind(".json");
    return (dot == std::string::npos ? report_path : report_path.substr(0, dot)) + ".series.json";
}

void emit(const uslab::RunResult& r, std::string out, std::string csv, std::string series) {
    const std::string text = r.report.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    if (!csv.empty()) write_file(csv, uslab::report_csv(r.report));
    if (!r.series.is_null()) {
        if (series.empty() && !out.empty()) series = series_path_for(out);
        if (!series.empty()) write_file(series, r.series.dump(2) + "\n");
    }
    std::cerr << "uslab: " << r.report.value("command", "") << " " << r.report.value("name", "") << ": "
              << (r.exit_code == uslab::kExitOk ? "ok" : "failed") << " (hash "
              << r.report.value("determinism_hash", "") << ")\n";
}

std::vector<uslab::Rational> parse_deltas(const std::string& s) {
    std::vector<uslab::Rational> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const std::string piece = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!piece.empty()) out.push_back(uslab::json_rational(Json(piece)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw uslab::SchemaError("no deltas given");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uslab: constructions and certificates for generalized universal series"};
    app.set_version_flag("--version", uslab::version_string());
    app.require_subcommand(1);

    std::string config_path, out_path, csv_path, series_path, mode_name;
    std::int64_t seed = -1;
    auto* run = app.add_subcommand("run", "Run an experiment config");
    run->add_option("config", config_path, "Config JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_path, "Report JSON path (stdout when omitted)");
    run->add_option("--csv", csv_path, "CSV table of certificate records");
    run->add_option("--series", series_path, "Series JSON path (defaults next to the report)");
    run->add_option("--mode", mode_name, "Numeric mode")->check(CLI::IsMember({"exact", "float"}));
    run->add_option("--seed", seed, "RNG seed for seeded commands")->check(CLI::NonNegativeNumber);

    std::string report_path, verify_series;
    auto* verify = app.add_subcommand("verify", "Recheck the certificates of a report");
    verify->add_option("report", report_path, "Report JSON")->required()->check(CLI::ExistingFile);
    verify->add_option("series", verify_series, "Series JSON")->required()->check(CLI::ExistingFile);
    verify->add_option("--out", out_path, "Verification report path (stdout when omitted)");

    std::string identity_name, deltas = "1/3,1/2,2/3";
    std::size_t n_max = 15;
    auto* identity = app.add_subcommand("identity", "Exact sweep of the falling-factorial identity");
    identity->add_option("name", identity_name, "Identity name (falling-factorial, alias lemma52)")->required();
    identity->add_option("--n-max", n_max, "Largest n")->capture_default_str();
    identity->add_option("--deltas", deltas, "Comma-separated rationals in (0,1)")->capture_default_str();
    identity->add_option("--out", out_path, "Report JSON path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : uslab::kExitSchema;
    }

    try {
        if (*run) {
            const Json cfg = read_json(config_path);
            uslab::RunOverrides ov;
            if (!mode_name.empty()) ov.mode = uslab::mode_from_string(mode_name);
            if (seed >= 0) ov.seed = static_cast<std::uint64_t>(seed);
            const auto r = uslab::run_config(cfg, ov);
            const Json outputs = cfg.value("outputs", Json::object());
            emit(r, out_path.empty() ? outputs.value("report", "") : out_path,
                 csv_path.empty() ? outputs.value("csv", "") : csv_path,
                 series_path.empty() ? outputs.value("series", "") : series_path);
            return r.exit_code;
        }
        if (*verify) {
            const auto r = uslab::verify_report(read_json(report_path), read_json(verify_series));
            emit(r, out_path, "", "");
            return r.exit_code;
        }
        if (identity_name != "falling-factorial" && identity_name != "lemma52")
            throw uslab::SchemaError("unknown identity '" + identity_name + "'");
        const auto r = uslab::identity_sweep(n_max, parse_deltas(deltas));
        emit(r, out_path, "", "");
        return r.exit_code;
    } catch (const uslab::SchemaError& e) {
        std::cerr << "uslab: schema error: " << e.what() << "\n";
        return uslab::kExitSchema;
    } catch (const std::exception& e) {
        std::cerr << "uslab: error: " << e.what() << "\n";
        return uslab::kExitFailure;
    }
}
