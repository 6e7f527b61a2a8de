// Python bindings. Configs and reports cross as JSON text; rationals cross as "p/q" strings.

#include "uslab/approx.hpp"
#include "uslab/basis.hpp"
#include "uslab/diagnostics.hpp"
#include "uslab/runner.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace uslab;

namespace {

std::vector<Rational> to_rationals(const std::vector<std::string>& xs) {
    std::vector<Rational> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(parse_rational(x));
    return out;
}

std::vector<std::string> to_strings(const std::vector<Rational>& xs) {
    std::vector<std::string> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(rational_to_string(x));
    return out;
}

py::tuple result_tuple(const RunResult& r) {
    return py::make_tuple(r.report.dump(), r.series.is_null() ? std::string() : r.series.dump(), r.exit_code);
}

std::optional<Mode> mode_arg(const std::optional<std::string>& mode) {
    if (!mode) return std::nullopt;
    return mode_from_string(*mode);
}

}  // namespace

PYBIND11_MODULE(_uslab, m) {
    m.doc() = "Exact and floating construction of universal series";

    // Translators are tried newest first, so the base class goes first.
    py::register_exception<Error>(m, "UslabError", PyExc_RuntimeError);
    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.attr("__version__") = version_string();
    m.attr("SCHEMA_VERSION") = kSchemaVersion;

    m.def(
        "run_config",
        [](const std::string& config, std::optional<std::string> mode, std::optional<std::uint64_t> seed) {
            Json cfg;
            try {
                cfg = Json::parse(config);
            } catch (const Json::exception& e) {
                throw SchemaError(std::string("config is not valid JSON: ") + e.what());
            }
            RunResult r;
            {
                py::gil_scoped_release release;
                r = run_config(cfg, RunOverrides{mode_arg(mode), seed});
            }
            return result_tuple(r);
        },
        py::arg("config"), py::arg("mode") = py::none(), py::arg("seed") = py::none());

    m.def(
        "verify_report",
        [](const std::string& report, const std::string& series) {
            Json rep, ser;
            try {
                rep = Json::parse(report);
                ser = Json::parse(series);
            } catch (const Json::exception& e) {
                throw SchemaError(std::string("report or series is not valid JSON: ") + e.what());
            }
            RunResult r;
            {
                py::gil_scoped_release release;
                r = verify_report(rep, ser);
            }
            return result_tuple(r);
        },
        py::arg("report"), py::arg("series"));

    m.def(
        "identity_sweep",
        [](std::size_t n_max, const std::vector<std::string>& deltas) {
            return result_tuple(identity_sweep(n_max, to_rationals(deltas)));
        },
        py::arg("n_max"), py::arg("deltas"));

    m.def(
        "report_csv", [](const std::string& report) { return report_csv(Json::parse(report)); }, py::arg("report"));

    m.def(
        "falling_factorial_identity",
        [](std::size_t n, const std::string& delta) {
            auto r = falling_factorial_identity(n, parse_rational(delta));
            return py::make_tuple(rational_to_string(r.lhs), rational_to_string(r.rhs), r.equal);
        },
        py::arg("n"), py::arg("delta"));

    m.def(
        "monomial_to_bernstein",
        [](const std::vector<std::string>& coeffs, std::size_t n) {
            return to_strings(monomial_to_bernstein(RatPoly(to_rationals(coeffs)), n));
        },
        py::arg("coeffs"), py::arg("n"));

    m.def(
        "bernstein_to_monomial",
        [](const std::vector<std::string>& b, std::size_t n) {
            return to_strings(bernstein_to_monomial(to_rationals(b), n).coeffs());
        },
        py::arg("b"), py::arg("n"));

    m.def(
        "hermite_two_disc",
        [](const std::vector<std::string>& coeffs, const std::string& c, std::size_t order) {
            return to_strings(hermite_two_disc(RatPoly(to_rationals(coeffs)), parse_rational(c), order).coeffs());
        },
        py::arg("coeffs"), py::arg("c"), py::arg("order"));

    m.def(
        "radius_root_test",
        [](const std::map<std::size_t, std::string>& coeffs, std::size_t horizon) {
            CoefficientSequence<Rational> a;
            for (const auto& [k, v] : coeffs) a.set(k, parse_rational(v));
            auto r = radius_root_test(a, horizon);
            return py::make_tuple(r.estimate, r.indices, r.roots);
        },
        py::arg("coeffs"), py::arg("horizon"));

    m.def("green_disc", &green_disc, py::arg("R"), py::arg("z"));

    m.def(
        "bernstein_bound_check",
        [](const std::vector<Complex>& p, const std::vector<Complex>& alpha, double r, double R) {
            auto b = bernstein_bound_check(CplxPoly(p), alpha, r, R);
            return py::make_tuple(b.lhs, b.rhs, b.holds());
        },
        py::arg("p"), py::arg("alpha"), py::arg("r"), py::arg("R"));
}
