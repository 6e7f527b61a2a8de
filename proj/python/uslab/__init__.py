"""Construction and checking of universal series with exact rational arithmetic."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, NamedTuple

from . import _uslab
from ._uslab import DomainError, SchemaError, UslabError, __version__, SCHEMA_VERSION

__all__ = [
    "DomainError",
    "RunResult",
    "SCHEMA_VERSION",
    "SchemaError",
    "UslabError",
    "__version__",
    "bernstein_bound_check",
    "bernstein_to_monomial",
    "falling_factorial_identity",
    "green_disc",
    "hermite_two_disc",
    "identity_sweep",
    "monomial_to_bernstein",
    "radius_root_test",
    "report_csv",
    "run",
    "verify",
]


class RunResult(NamedTuple):
    report: dict[str, Any]
    series: dict[str, Any] | None
    exit_code: int


def _result(raw: tuple[str, str, int]) -> RunResult:
    report, series, code = raw
    return RunResult(json.loads(report), json.loads(series) if series else None, code)


def _q(x: Any) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def run(config: dict[str, Any] | str, mode: str | None = None, seed: int | None = None) -> RunResult:
    """Run a config dict or JSON string. Malformed configs raise SchemaError."""
    text = config if isinstance(config, str) else json.dumps(config)
    return _result(_uslab.run_config(text, mode, seed))


def verify(report: dict[str, Any], series: dict[str, Any]) -> RunResult:
    return _result(_uslab.verify_report(json.dumps(report), json.dumps(series)))


def identity_sweep(n_max: int, deltas: list[Any]) -> RunResult:
    return _result(_uslab.identity_sweep(n_max, [_q(d) for d in deltas]))


def report_csv(report: dict[str, Any]) -> str:
    return _uslab.report_csv(json.dumps(report))


def falling_factorial_identity(n: int, delta: Any) -> tuple[Fraction, Fraction, bool]:
    lhs, rhs, equal = _uslab.falling_factorial_identity(n, _q(delta))
    return Fraction(lhs), Fraction(rhs), equal


def monomial_to_bernstein(coeffs: list[Any], n: int) -> list[Fraction]:
    return [Fraction(b) for b in _uslab.monomial_to_bernstein([_q(c) for c in coeffs], n)]


def bernstein_to_monomial(b: list[Any], n: int) -> list[Fraction]:
    return [Fraction(c) for c in _uslab.bernstein_to_monomial([_q(x) for x in b], n)]


def hermite_two_disc(coeffs: list[Any], c: Any, order: int) -> list[Fraction]:
    """Coefficients about 0 of the polynomial vanishing to `order` at 0 and matching h to `order` at c."""
    return [Fraction(x) for x in _uslab.hermite_two_disc([_q(x) for x in coeffs], _q(c), order)]


def radius_root_test(coeffs: dict[int, Any], horizon: int) -> tuple[float, list[int], list[float]]:
    return _uslab.radius_root_test({k: _q(v) for k, v in coeffs.items()}, horizon)


def green_disc(R: float, z: complex) -> float:
    return _uslab.green_disc(R, complex(z))


def bernstein_bound_check(p: list[complex], alpha: list[complex], r: float, R: float) -> tuple[float, float, bool]:
    return _uslab.bernstein_bound_check([complex(x) for x in p], [complex(a) for a in alpha], r, R)
