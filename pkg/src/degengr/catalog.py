"""Built-in metrics.

Each entry carries a parameter schema with admissible ranges and a list of
known singular loci. The loci are informational only; evaluating on them
fails with the usual expression domain errors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .dsl import ZERO, Expr, MetricSpec, mul, parse_expression, simplify
from .errors import CatalogError


@dataclass(frozen=True)
class ParamSchema:
    name: str
    default: float
    low: float = -math.inf
    high: float = math.inf
    low_open: bool = True
    description: str = ""

    def check(self, value: float):
        if not math.isfinite(value):
            raise CatalogError(f"parameter {self.name} must be finite")
        below = value <= self.low if self.low_open else value < self.low
        if below or value > self.high:
            bracket = "(" if self.low_open else "["
            raise CatalogError(
                f"parameter {self.name}={value} outside admissible range {bracket}{self.low}, {self.high}]"
            )


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    params: tuple[ParamSchema, ...]
    factory: Callable[[Mapping[str, float]], MetricSpec] = field(repr=False)
    singular_loci: tuple[str, ...] = ()

    def defaults(self) -> dict[str, float]:
        return {p.name: p.default for p in self.params}

    def schema_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "params": [
                {"name": p.name, "default": p.default, "description": p.description,
                 # unbounded ends are null
                 "low": p.low if math.isfinite(p.low) else None, "low_open": p.low_open,
                 "high": p.high if math.isfinite(p.high) else None}
                for p in self.params
            ],
            "singular_loci": list(self.singular_loci),
        }


def _diag(coords, entries, params, name):
    n = len(coords)
    rows = [[ZERO] * n for _ in range(n)]
    for i, e in enumerate(entries):
        rows[i][i] = e
    return MetricSpec.build(coords, rows, params, name)


def _minkowski(p):
    return _diag(("t", "x", "y", "z"), ["-1", "1", "1", "1"], p, "minkowski")


def _sphere2(p):
    return _diag(("theta", "phi"), ["1", "sin(theta)^2"], p, "sphere2")


def _schwarzschild(p):
    f = "(1 - 2*m/r)"
    return _diag(
        ("t", "r", "theta", "phi"),
        [f"-{f}", f"1/{f}", "r^2", "r^2*sin(theta)^2"],
        p,
        "schwarzschild",
    )


def _reissner_nordstrom(p):
    f = "(1 - 2*m/r + e^2/r^2)"
    return _diag(
        ("t", "r", "theta", "phi"),
        [f"-{f}", f"1/{f}", "r^2", "r^2*sin(theta)^2"],
        p,
        "reissner_nordstrom",
    )


_SIGMA = "(r^2 + a^2*cos(theta)^2)"
_DELTA = "(r^2 + a^2 + e^2 - 2*m*r)"

# Boyer-Lindquist components as (numerator, denominator) with the
# denominator one of Sigma, Delta or none; index pairs are (t, r, theta, phi).
_KN_PARTS = {
    (0, 0): (f"-({_DELTA} - a^2*sin(theta)^2)", "sigma"),
    (0, 3): (f"-a*sin(theta)^2*(r^2 + a^2 - {_DELTA})", "sigma"),
    (3, 3): (f"((r^2 + a^2)^2 - {_DELTA}*a^2*sin(theta)^2)*sin(theta)^2", "sigma"),
    (1, 1): (_SIGMA, "delta"),
    (2, 2): (_SIGMA, None),
}
_KN_PARAMS = ("a", "e", "m")


def _kn_rows(regularized: bool) -> list[list[Expr]]:
    parse = lambda s: parse_expression(s, _KN_PARAMS)  # noqa: E731
    sigma, delta = parse(_SIGMA), parse(_DELTA)
    rows = [[ZERO] * 4 for _ in range(4)]
    for (i, j), (num, den) in _KN_PARTS.items():
        numer = parse(num)
        if regularized:
            # multiplying by Sigma*Delta cancels the denominator exactly
            extra = {"sigma": delta, "delta": sigma, None: mul(sigma, delta)}[den]
            e = mul(numer, extra)
        else:
            e = numer if den is None else numer / {"sigma": sigma, "delta": delta}[den]
        e = simplify(e)
        rows[i][j] = e
        rows[j][i] = e
    return rows


def _kerr_newman(p):
    return MetricSpec.build(("t", "r", "theta", "phi"), _kn_rows(False), p, "kerr_newman")


def _kerr_newman_regularized(p):
    return MetricSpec.build(("t", "r", "theta", "phi"), _kn_rows(True), p, "kerr_newman_regularized")


def _diag_semiregular(p):
    return _diag(("t", "x", "y", "z"), ["-1", "t^4", "1", "1"], p, "diag_semiregular")


def _diag_nonregular(p):
    return _diag(("t", "x", "y", "z"), ["-1", "t", "1", "1"], p, "diag_nonregular")


_M = ParamSchema("m", 1.0, 0.0, description="mass")
_E = ParamSchema("e", 0.5, description="electric charge")
_A = ParamSchema("a", 0.5, description="angular momentum per unit mass")

CATALOG: dict[str, CatalogEntry] = {
    e.name: e
    for e in [
        CatalogEntry("minkowski", "flat spacetime, -dt^2 + dx^2 + dy^2 + dz^2", (), _minkowski),
        CatalogEntry("sphere2", "unit 2-sphere, dtheta^2 + sin^2(theta) dphi^2", (), _sphere2,
                     ("theta = 0", "theta = pi")),
        CatalogEntry("schwarzschild", "Schwarzschild in Schwarzschild coordinates", (_M,), _schwarzschild,
                     ("r = 0", "r = 2m (chart)", "sin(theta) = 0")),
        CatalogEntry("reissner_nordstrom", "charged, non-rotating black hole", (_M, _E), _reissner_nordstrom,
                     ("r = 0", "r^2 - 2mr + e^2 = 0 (chart)", "sin(theta) = 0")),
        CatalogEntry("kerr_newman", "Kerr-Newman in Boyer-Lindquist coordinates", (_M, _A, _E), _kerr_newman,
                     ("Sigma = 0 (ring)", "Delta = 0 (chart)", "sin(theta) = 0")),
        CatalogEntry("kerr_newman_regularized", "Kerr-Newman components multiplied by Sigma*Delta",
                     (_M, _A, _E), _kerr_newman_regularized, ("degenerate where Sigma*Delta = 0",)),
        CatalogEntry("diag_semiregular", "-dt^2 + t^4 dx^2 + dy^2 + dz^2, degenerate at t = 0", (),
                     _diag_semiregular, ("t = 0 (degenerate, semi-regular)",)),
        CatalogEntry("diag_nonregular", "-dt^2 + t dx^2 + dy^2 + dz^2, degenerate at t = 0", (),
                     _diag_nonregular, ("t = 0 (degenerate, not semi-regular)",)),
    ]
}


def list_metrics() -> list[CatalogEntry]:
    return list(CATALOG.values())


def get_metric(name: str, params: Mapping[str, float] | None = None) -> MetricSpec:
    """Instantiate catalog metric ``name`` with parameters bound.

    Unspecified parameters take their defaults.
    """
    try:
        entry = CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown metric {name!r}; known: {', '.join(CATALOG)}") from None
    values = entry.defaults()
    for k, v in (params or {}).items():
        if k not in values:
            raise CatalogError(f"metric {name!r} has no parameter {k!r}")
        values[k] = float(v)
    for schema in entry.params:
        schema.check(values[schema.name])
    return entry.factory(values)
