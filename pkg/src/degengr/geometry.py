"""Koszul form, lower covariant derivative and curvature for metrics that
may be degenerate.

All tensors are expressed in the coordinate basis of the chart. The only
place where a metric inverse would normally appear, contraction of two
covariant slots, goes through the co-inner product of ``tensor.cometric``;
this is valid only for covectors that annihilate the radical, which is why
the curvature requires the metric to be radical-stationary at the point.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .dsl import (
    ONE, ZERO, Expr, MetricSpec, add, add_all, as_expr, compile_exprs, differentiate, mul, parse_expression,
    simplify, sub,
)
from .errors import AnnihilatorError, PathError, RadicalStationarityError
from .tensor import DEFAULT_TOL, cometric, eval_metric, is_radical_annihilator, signature_of


class DegeneratePointWarning(RuntimeWarning):
    """The metric is degenerate at the evaluation point; quantities that
    are only smooth where the signature is constant may be non-smooth."""


# ------------------------------------------------------------- vector fields

def _field_expr(c) -> Expr:
    # strings are read in the expression grammar
    return simplify(parse_expression(c) if isinstance(c, str) else as_expr(c))


@dataclass(frozen=True)
class VectorField:
    """Chart components ``X^a`` as expressions."""

    components: tuple[Expr, ...]

    @classmethod
    def of(cls, *components) -> "VectorField":
        return cls(tuple(_field_expr(c) for c in components))

    @classmethod
    def coordinate(cls, dim: int, a: int) -> "VectorField":
        return cls(tuple(ONE if i == a else ZERO for i in range(dim)))

    @classmethod
    def zero(cls, dim: int) -> "VectorField":
        return cls((ZERO,) * dim)

    @property
    def dim(self):
        return len(self.components)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(add(a, b) for a, b in zip(self.components, other.components)))

    def scale(self, f) -> "VectorField":
        f = as_expr(f)
        return VectorField(tuple(mul(f, c) for c in self.components))

    def apply(self, f: Expr, coords: Sequence[str]) -> Expr:
        """Directional derivative ``X(f) = X^a d_a f``."""
        return add_all(mul(xa, differentiate(f, c)) for xa, c in zip(self.components, coords))

    def bracket(self, other: "VectorField", coords: Sequence[str]) -> "VectorField":
        """Lie bracket ``[X, Y]^c = X(Y^c) - Y(X^c)``."""
        return VectorField(
            tuple(
                sub(self.apply(yc, coords), other.apply(xc, coords))
                for xc, yc in zip(self.components, other.components)
            )
        )


def metric_product(spec: MetricSpec, X: VectorField, Y: VectorField) -> Expr:
    """Symbolic ``<X, Y> = g_ab X^a Y^b``."""
    terms = []
    for a in range(spec.dim):
        if X.components[a] == ZERO:
            continue
        for b in range(spec.dim):
            gab = spec.components[a][b]
            if gab == ZERO or Y.components[b] == ZERO:
                continue
            terms.append(mul(gab, mul(X.components[a], Y.components[b])))
    return add_all(terms)


@lru_cache(maxsize=8192)
def _compiled(spec: MetricSpec, exprs: tuple[Expr, ...], shape: tuple[int, ...]):
    return compile_exprs(exprs, spec.names, shape)


def _eval(spec: MetricSpec, exprs, point, shape=None) -> np.ndarray:
    exprs = tuple(exprs)
    shape = shape or (len(exprs),)
    return _compiled(spec, exprs, tuple(shape))(spec.env(point))


# ----------------------------------------------------------------- Koszul

def koszul_expression(spec: MetricSpec, X: VectorField, Y: VectorField, Z: VectorField) -> Expr:
    """Symbolic Koszul form, all six terms, brackets computed symbolically."""
    c = spec.coords
    ip = lambda U, V: metric_product(spec, U, V)  # noqa: E731
    total = add_all(
        [
            X.apply(ip(Y, Z), c),
            Y.apply(ip(Z, X), c),
            sub(ZERO, Z.apply(ip(X, Y), c)),
            sub(ZERO, ip(X, Y.bracket(Z, c))),
            ip(Y, Z.bracket(X, c)),
            ip(Z, X.bracket(Y, c)),
        ]
    )
    return simplify(mul(as_expr(0.5), total))


def koszul_general(spec: MetricSpec, X: VectorField, Y: VectorField, Z: VectorField, point) -> float:
    return float(_eval(spec, [koszul_expression(spec, X, Y, Z)], point)[0])


def lie_derivative_metric(spec: MetricSpec, Y: VectorField, Z: VectorField, X: VectorField) -> Expr:
    """Symbolic ``(L_Y g)(Z, X) = Y<Z,X> - <[Y,Z],X> - <Z,[Y,X]>``."""
    c = spec.coords
    return simplify(
        sub(
            sub(Y.apply(metric_product(spec, Z, X), c), metric_product(spec, Y.bracket(Z, c), X)),
            metric_product(spec, Z, Y.bracket(X, c)),
        )
    )


@dataclass(frozen=True)
class ChristoffelFirst:
    """``symbols[a][b][c] = K(d_a, d_b, d_c) = (d_a g_bc + d_b g_ca - d_c g_ab)/2``."""

    spec: MetricSpec
    symbols: tuple = field(repr=False)

    def __getitem__(self, idx):
        a, b, c = idx
        return self.symbols[a][b][c]

    def flat(self) -> tuple[Expr, ...]:
        return tuple(e for plane in self.symbols for row in plane for e in row)

    def entry_at(self, a: int, b: int, c: int, point) -> float:
        return float(_eval(self.spec, [self.symbols[a][b][c]], point)[0])

    def at(self, point) -> np.ndarray:
        d = self.spec.dim
        return _eval(self.spec, self.flat(), point, (d, d, d))


@lru_cache(maxsize=256)
def christoffel_first(spec: MetricSpec) -> ChristoffelFirst:
    d = spec.dim
    dg = [[[differentiate(spec.components[b][c], spec.coords[a]) for c in range(d)] for b in range(d)] for a in range(d)]
    half = as_expr(0.5)
    symbols = tuple(
        tuple(
            tuple(
                simplify(mul(half, sub(add(dg[a][b][c], dg[b][c][a]), dg[c][a][b])))
                for c in range(d)
            )
            for b in range(d)
        )
        for a in range(d)
    )
    return ChristoffelFirst(spec, symbols)


@lru_cache(maxsize=256)
def _christoffel_derivatives(spec: MetricSpec) -> tuple[Expr, ...]:
    """Flattened ``d_a Gamma_bcd`` in index order (a, b, c, d)."""
    gam = christoffel_first(spec)
    n = spec.dim
    return tuple(
        simplify(differentiate(gam[b, c, e], spec.coords[a]))
        for a in range(n)
        for b in range(n)
        for c in range(n)
        for e in range(n)
    )


def lower_cov_derivative(spec: MetricSpec, X: VectorField, Y: VectorField, point) -> np.ndarray:
    """The covector ``Z -> K(X, Y, Z)`` at ``point`` in the coordinate cobasis."""
    exprs = [koszul_expression(spec, X, Y, VectorField.coordinate(spec.dim, c)) for c in range(spec.dim)]
    return _eval(spec, exprs, point)


# --------------------------------------------------- radical stationarity

def _stationarity_failures(gamma: np.ndarray, g: np.ndarray, tol: float):
    d = g.shape[0]
    bad = []
    for a in range(d):
        for b in range(a, d):
            if not is_radical_annihilator(gamma[a, b], g, tol):
                bad.append((a, b))
    return bad


def check_radical_stationary(spec: MetricSpec, point, tol: float = DEFAULT_TOL) -> bool:
    """Whether every covector ``K(d_a, d_b, .)`` annihilates the radical at ``point``."""
    g = eval_metric(spec, point)
    gamma = christoffel_first(spec).at(point)
    return not _stationarity_failures(gamma, g, tol)


def _require_stationary(spec, point, g, gamma, tol):
    bad = _stationarity_failures(gamma, g, tol)
    if bad:
        raise RadicalStationarityError(
            f"metric is not radical-stationary at {list(point)}: "
            f"K(d_a, d_b, .) leaves the annihilator for (a, b) in {bad}"
        )


def _warn_if_degenerate(g, tol, what):
    if signature_of(g, tol)[0] > 0:
        warnings.warn(
            f"{what} evaluated where the metric is degenerate; result may be non-smooth there",
            DegeneratePointWarning,
            stacklevel=3,
        )


def cov_derivative_oneform(spec: MetricSpec, X: VectorField, omega: Sequence, point, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Covariant derivative of a radical-annihilator 1-form along ``X``.

    ``(nabla_X omega)(d_b) = X(omega_b) - <<K(X, d_b, .), omega>>``.
    """
    omega = tuple(_field_expr(w) for w in omega)
    g = eval_metric(spec, point)
    gamma = christoffel_first(spec).at(point)
    om = _eval(spec, omega, point)
    if not is_radical_annihilator(om, g, tol):
        raise AnnihilatorError(f"1-form {om.tolist()} does not annihilate the radical at {list(point)}")
    _require_stationary(spec, point, g, gamma, tol)
    _warn_if_degenerate(g, tol, "covariant derivative of a 1-form")
    gplus = cometric(g, tol).matrix
    x = _eval(spec, X.components, point)
    deriv = _eval(spec, [X.apply(w, spec.coords) for w in omega], point)
    lowered = np.einsum("a,abc->bc", x, gamma)  # row b is K(X, d_b, .)
    return deriv - lowered @ gplus @ om


# --------------------------------------------------------------- curvature

@dataclass(frozen=True)
class CurvatureValue:
    """All-covariant ``R_abcd`` at a point, ``R(d_a, d_b, d_c, d_d)``."""

    components: np.ndarray
    point: tuple
    tol: float

    def nonzero(self, atol: float = 0.0):
        d = self.components.shape[0]
        out = []
        for idx in np.ndindex(d, d, d, d):
            v = self.components[idx]
            if abs(v) > atol:
                out.append((idx, float(v)))
        return out


@lru_cache(maxsize=256)
def _curvature_compiled(spec: MetricSpec):
    d = spec.dim
    gam = christoffel_first(spec)
    return (
        _compiled(spec, gam.flat(), (d, d, d)),
        _compiled(spec, _christoffel_derivatives(spec), (d, d, d, d)),
    )


def koszul_products(gamma: np.ndarray, gplus: np.ndarray) -> np.ndarray:
    """``P[a,b,c,d] = <<K(d_a, d_b, .), K(d_c, d_d, .)>>``."""
    return np.einsum("abs,st,cdt->abcd", gamma, gplus, gamma)


def riemann_at(spec: MetricSpec, point, tol: float = DEFAULT_TOL) -> CurvatureValue:
    """Covariant Riemann tensor, well defined where the metric is
    radical-stationary, including degenerate points.

    ``R_abcd = d_a G_bcd - d_b G_acd + <<G_ac., G_bd.>> - <<G_bc., G_ad.>>``
    with ``G`` the Christoffel symbols of the first kind.
    """
    gam_fn, dgam_fn = _curvature_compiled(spec)
    env = spec.env(point)
    g = eval_metric(spec, point)
    gamma = gam_fn(env)
    _require_stationary(spec, point, g, gamma, tol)
    dgamma = dgam_fn(env)
    prod = koszul_products(gamma, cometric(g, tol).matrix)
    R = (
        dgamma
        - dgamma.transpose(1, 0, 2, 3)
        + prod.transpose(0, 2, 1, 3)
        - prod.transpose(2, 0, 1, 3)
    )
    return CurvatureValue(R, tuple(float(x) for x in point), tol)


# ----------------------------------------------------------- semi-regularity

@dataclass
class SemiregularReport:
    """Sampled evidence for semi-regularity along a path into a degenerate point.

    ``products`` has shape ``(n_points, d, d, d, d)``; ``converged`` flags
    each index combination by a Cauchy test on the last five samples.
    ``ratios`` maps ``(a, b, c)`` to samples of ``d_a alpha_b^2 / alpha_c``
    for diagonal metrics, where ``alpha_b = sqrt|g_bb|``.
    """

    path: np.ndarray
    products: np.ndarray
    converged: np.ndarray
    verdict: bool
    ratios: dict = field(default_factory=dict)
    ratio_bounded: dict = field(default_factory=dict)
    diagonal_for_all_c: bool | None = None
    diagonal_for_some_c: bool | None = None
    limit_radical_stationary: bool | None = None

    @property
    def diverged(self):
        return [tuple(int(i) for i in idx) for idx in np.argwhere(~self.converged)]

    def to_dict(self) -> dict:
        return {
            "verdict": "converged" if self.verdict else "diverged",
            "diverged_products": [list(ix) for ix in self.diverged],
            "last_products": {
                ",".join(map(str, idx)): float(self.products[-1][idx])
                for idx in np.ndindex(*self.products.shape[1:])
                if self.products[-1][idx] != 0.0 or not self.converged[idx]
            },
            "diagonal_for_all_c": self.diagonal_for_all_c,
            "diagonal_for_some_c": self.diagonal_for_some_c,
            "unbounded_ratios": [list(k) for k, ok in self.ratio_bounded.items() if not ok],
            "limit_radical_stationary": self.limit_radical_stationary,
        }


def cauchy_converged(values: np.ndarray, rtol: float, window: int = 5, contraction: float = 0.75) -> np.ndarray:
    """Cauchy test on the last ``window`` samples.

    A sample sequence passes if its spread is within ``rtol * (1 + |tail|)``,
    or if its increments shrink geometrically (each at most ``contraction``
    times the previous one). The second clause accepts smooth quantities on
    paths whose last steps are still too long for the spread to settle;
    divergent ones such as ``1/t`` or ``log t`` have non-shrinking increments.
    """
    tail = values[-window:]
    spread = tail.max(axis=0) - tail.min(axis=0)
    scale = 1.0 + np.abs(tail).max(axis=0)
    inc = np.abs(np.diff(tail, axis=0))
    negligible = inc[1:] <= 1e-12 * scale
    shrinking = np.all((inc[1:] <= contraction * inc[:-1]) | negligible, axis=0)
    return np.isfinite(spread) & ((spread <= rtol * scale) | shrinking)


def _bounded(values: np.ndarray, growth: float = 10.0, window: int = 5) -> bool:
    head = np.abs(values[:3]).max()
    tail = np.abs(values[-window:]).max()
    return bool(np.isfinite(tail) and tail <= growth * (1.0 + head))


def check_semiregular(
    spec: MetricSpec,
    path: Sequence[Sequence[float]],
    tol: float = DEFAULT_TOL,
    cauchy_tol: float = 1e-3,
    limit: Sequence[float] | None = None,
) -> SemiregularReport:
    """Sample the co-contracted Koszul products along ``path``.

    A necessary-condition test: smooth products must converge as the path
    approaches its degenerate limit. Every path point must be non-degenerate.
    """
    path = np.asarray(path, dtype=float)
    if path.ndim != 2 or path.shape[0] < 8:
        raise PathError(f"path needs at least 8 points, got {0 if path.ndim != 2 else path.shape[0]}")
    if path.shape[1] != spec.dim:
        raise PathError(f"path points have {path.shape[1]} coordinates, chart has {spec.dim}")
    gam_fn, _ = _curvature_compiled(spec)
    products = []
    for p in path:
        g = eval_metric(spec, p)
        # near the limit g may be tiny but it is invertible; a rank cut-off would
        # misclassify exactly the points the test is about
        try:
            ginv = np.linalg.inv(g)
        except np.linalg.LinAlgError:
            raise PathError(f"path point {p.tolist()} is degenerate") from None
        if not np.all(np.isfinite(ginv)):
            raise PathError(f"path point {p.tolist()} is degenerate")
        products.append(koszul_products(gam_fn(spec.env(p)), ginv))
    products = np.array(products)
    converged = cauchy_converged(products, cauchy_tol)
    report = SemiregularReport(path, products, converged, bool(converged.all()))

    if spec.is_diagonal():
        d = spec.dim
        ratios, bounded = {}, {}
        dg = {
            (a, b): differentiate(spec.components[b][b], spec.coords[a])
            for a in range(d)
            for b in range(d)
        }
        for a in range(d):
            for b in range(d):
                for c in sorted({a, b}):
                    samples = []
                    for p in path:
                        gd = eval_metric(spec, p).diagonal()
                        dval = _eval(spec, [dg[a, b]], p)[0]
                        samples.append(np.sign(gd[b]) * dval / np.sqrt(abs(gd[c])))
                    samples = np.array(samples)
                    ratios[(a, b, c)] = samples
                    bounded[(a, b, c)] = _bounded(samples)
        report.ratios = ratios
        report.ratio_bounded = bounded
        report.diagonal_for_all_c = all(bounded.values())
        report.diagonal_for_some_c = all(
            any(bounded[(a, b, c)] for c in {a, b}) for a in range(d) for b in range(d)
        )
    if limit is not None:
        report.limit_radical_stationary = check_radical_stationary(spec, limit, tol)
    return report


__all__ = [
    "ChristoffelFirst", "CurvatureValue", "DegeneratePointWarning", "SemiregularReport",
    "VectorField", "cauchy_converged", "check_radical_stationary", "check_semiregular",
    "christoffel_first", "cov_derivative_oneform", "koszul_expression", "koszul_general",
    "koszul_products", "lie_derivative_metric", "lower_cov_derivative", "metric_product",
    "riemann_at",
]
