"""Metric specifications and the line-oriented metric file format.

Example file::

    dim = 4
    coords = t, r, theta, phi
    param m = 1.0
    g[0][0] = -(1 - 2*m/r)
    g[1][1] = 1/(1 - 2*m/r)
    g[2][2] = r^2
    g[3][3] = r^2 * sin(theta)^2
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from ..errors import ExprSyntaxError, MetricFileError
from .calculus import simplify
from .expr import ZERO, Expr, as_expr, compile_exprs, free_names, to_text
from .parser import parse_expression

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


@dataclass(frozen=True)
class MetricSpec:
    """A chart, parameter bindings, and symbolic components ``g_ab``."""

    dim: int
    coords: tuple[str, ...]
    params: tuple[tuple[str, float], ...]
    components: tuple[tuple[Expr, ...], ...]
    name: str = ""

    def __post_init__(self):
        validate_spec(self)

    @classmethod
    def build(cls, coords: Sequence[str], components, params: Mapping[str, float] | None = None, name=""):
        """Construct from plain sequences; entries may be expressions,
        numbers or strings in the expression grammar."""
        params = dict(params or {})
        rows = []
        for row in components:
            out = []
            for entry in row:
                if isinstance(entry, str):
                    entry = parse_expression(entry, params)
                out.append(simplify(as_expr(entry)))
            rows.append(tuple(out))
        return cls(
            dim=len(coords),
            coords=tuple(coords),
            params=tuple(sorted((k, float(v)) for k, v in params.items())),
            components=tuple(rows),
            name=name,
        )

    @property
    def param_dict(self) -> dict[str, float]:
        return dict(self.params)

    @property
    def names(self) -> tuple[str, ...]:
        """Argument order used by compiled evaluators: coordinates, then parameters."""
        return self.coords + tuple(k for k, _ in self.params)

    def env(self, point: Sequence[float]) -> dict[str, float]:
        if len(point) != self.dim:
            raise ValueError(f"point has {len(point)} coordinates, chart has {self.dim}")
        env = dict(self.params)
        env.update(zip(self.coords, (float(x) for x in point)))
        return env

    def g(self, a: int, b: int) -> Expr:
        return self.components[a][b]

    def is_diagonal(self) -> bool:
        return all(
            self.components[a][b] == ZERO
            for a in range(self.dim)
            for b in range(self.dim)
            if a != b
        )

    @cached_property
    def _compiled(self):
        flat = [e for row in self.components for e in row]
        return compile_exprs(flat, self.names, (self.dim, self.dim))

    def evaluate(self, point: Sequence[float]):
        """Numerical ``g_ab`` at ``point`` (unsymmetrized)."""
        return self._compiled(self.env(point))

    def with_params(self, **values: float) -> "MetricSpec":
        params = self.param_dict
        unknown = set(values) - set(params)
        if unknown:
            raise KeyError(f"unknown parameters {sorted(unknown)}")
        params.update(values)
        return MetricSpec(self.dim, self.coords, tuple(sorted(params.items())), self.components, self.name)

    def to_text(self) -> str:
        """Serialize in the metric file format (upper triangle only)."""
        lines = [f"dim = {self.dim}", "coords = " + ", ".join(self.coords)]
        for k, v in self.params:
            lines.append(f"param {k} = {v!r}")
        for a in range(self.dim):
            for b in range(a, self.dim):
                e = self.components[a][b]
                if e != ZERO:
                    lines.append(f"g[{a}][{b}] = {to_text(e)}")
        return "\n".join(lines) + "\n"


def validate_spec(spec: MetricSpec) -> None:
    if spec.dim < 1:
        raise MetricFileError("dimension must be positive")
    if len(spec.coords) != spec.dim:
        raise MetricFileError(f"{len(spec.coords)} coordinates declared for dim = {spec.dim}")
    if len(set(spec.coords)) != spec.dim:
        raise MetricFileError("coordinate names must be distinct")
    pnames = [k for k, _ in spec.params]
    if set(pnames) & set(spec.coords):
        raise MetricFileError("a name is declared both as coordinate and parameter")
    if len(spec.components) != spec.dim or any(len(r) != spec.dim for r in spec.components):
        raise MetricFileError(f"component matrix must be {spec.dim}x{spec.dim}")
    coords, params = set(spec.coords), set(pnames)
    for a in range(spec.dim):
        for b in range(spec.dim):
            e = spec.components[a][b]
            vs, ps = free_names(e)
            if vs - coords:
                raise MetricFileError(f"g[{a}][{b}] uses undeclared coordinate(s) {sorted(vs - coords)}")
            if ps - params:
                raise MetricFileError(f"g[{a}][{b}] uses undeclared parameter(s) {sorted(ps - params)}")
            if b > a and simplify(e) != simplify(spec.components[b][a]):
                raise MetricFileError(f"asymmetric components g[{a}][{b}] != g[{b}][{a}]")


_ASSIGN = re.compile(r"^g\s*\[\s*(\d+)\s*\]\s*\[\s*(\d+)\s*\]\s*=\s*(.*)$")
_PARAM = re.compile(r"^param\s+([A-Za-z_][A-Za-z_0-9]*)\s*=\s*(.+)$")
_KEY = re.compile(r"^(dim|coords)\s*=\s*(.*)$")


def parse_metric_file(text: str, name: str = "") -> MetricSpec:
    """Parse and fully validate a metric file.

    Missing off-diagonal entries default to zero. If both ``g[a][b]`` and
    ``g[b][a]`` are given they must agree structurally after simplification.
    """
    dim = None
    coords: list[str] | None = None
    params: dict[str, float] = {}
    raw: dict[tuple[int, int], tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _ASSIGN.match(line):
            a, b = int(m.group(1)), int(m.group(2))
            if (a, b) in raw:
                raise MetricFileError(f"g[{a}][{b}] assigned twice", lineno)
            raw[(a, b)] = (m.group(3), lineno)
        elif m := _PARAM.match(line):
            try:
                params[m.group(1)] = float(m.group(2))
            except ValueError:
                raise MetricFileError(f"parameter value {m.group(2)!r} is not a real number", lineno) from None
        elif m := _KEY.match(line):
            key, value = m.groups()
            if key == "dim":
                try:
                    dim = int(value)
                except ValueError:
                    raise MetricFileError(f"dim must be an integer, got {value!r}", lineno) from None
            else:
                coords = [c.strip() for c in value.split(",")]
                bad = [c for c in coords if not _IDENT.match(c)]
                if bad:
                    raise MetricFileError(f"invalid coordinate name(s) {bad}", lineno)
        else:
            raise MetricFileError(f"cannot parse line {line!r}", lineno)
    if dim is None:
        raise MetricFileError("missing 'dim = N'")
    if coords is None:
        raise MetricFileError("missing 'coords = ...'")
    if len(coords) != dim:
        raise MetricFileError(f"dimension mismatch: dim = {dim} but {len(coords)} coordinates")

    entries: dict[tuple[int, int], Expr] = {}
    for (a, b), (src, lineno) in raw.items():
        if not (0 <= a < dim and 0 <= b < dim):
            raise MetricFileError(f"index g[{a}][{b}] out of range for dim = {dim}", lineno)
        try:
            e = simplify(parse_expression(src, params))
        except ExprSyntaxError as exc:
            raise MetricFileError(f"g[{a}][{b}]: {exc}", lineno) from None
        vs, ps = free_names(e)
        undeclared = vs - set(coords)
        if undeclared:
            raise MetricFileError(f"g[{a}][{b}] uses undeclared name(s) {sorted(undeclared)}", lineno)
        entries[(a, b)] = e
    rows = []
    for a in range(dim):
        row = []
        for b in range(dim):
            e = entries.get((a, b))
            mirror = entries.get((b, a))
            if e is None:
                e = mirror if mirror is not None else ZERO
            row.append(e)
        rows.append(tuple(row))
    return MetricSpec(dim, tuple(coords), tuple(sorted(params.items())), tuple(rows), name)


