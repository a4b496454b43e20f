"""Ricci and scalar curvature, the Einstein tensor, and its density form.

Contractions use the co-metric ``g+``. At non-degenerate points this is the
ordinary inverse and everything below is classical; at degenerate points
the Ricci tensor and scalar obtained this way are labelled
``extended convention`` in reports.

``einstein_density_at`` evaluates ``g_kl eps^{akst} eps^{blpq} R_stpq``
verbatim with the Levi-Civita symbol. That contraction equals
``LEVI_CIVITA_NORMALIZATION * G^{ab} det g``; the factor was measured
against the classical Einstein tensor and is pinned in
``tests/fixtures/normalization.json``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dsl import MetricSpec
from .errors import DegenerateMetricError, DimensionError, NonLorentzianError
from .geometry import riemann_at
from .tensor import DEFAULT_TOL, cometric, eval_metric, signature_of

# raw Levi-Civita contraction / (G^{ab} det g)
LEVI_CIVITA_NORMALIZATION = 4.0
# g^{st} (*R*)_asbt / G_ab with the volume form built from the symbol
HODGE_NORMALIZATION = -4.0


def levi_civita_symbol(n: int = 4) -> np.ndarray:
    """Totally antisymmetric symbol with ``eps[0, 1, ..., n-1] = +1``."""
    eps = np.zeros((n,) * n)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        eps[perm] = -1.0 if inversions % 2 else 1.0
    return eps


_EPS4 = levi_civita_symbol(4)


@dataclass(frozen=True)
class RicciValue:
    matrix: np.ndarray
    point: tuple
    degenerate: bool

    @property
    def convention(self) -> str:
        return "extended convention" if self.degenerate else "classical"


@dataclass(frozen=True)
class EinsteinDensityValue:
    """``G^{ab} det g`` and ``G_{ab} det g`` at a point.

    ``raw`` is the Levi-Civita contraction exactly as written; ``upper`` is
    ``raw / LEVI_CIVITA_NORMALIZATION``; ``lower`` lowers both indices of
    ``upper`` with ``g``.
    """

    upper: np.ndarray
    lower: np.ndarray
    raw: np.ndarray
    point: tuple
    normalization: float = LEVI_CIVITA_NORMALIZATION


@dataclass(frozen=True)
class HodgeResult:
    double_dual: np.ndarray  # (*R*)_abcd
    einstein_candidate: np.ndarray  # g^{st} (*R*)_asbt
    ratio: float  # candidate / einstein_at, NaN when G vanishes
    ratio_spread: float


def _point(point):
    return tuple(float(x) for x in point)


def _contract_ricci(R: np.ndarray, gplus: np.ndarray) -> np.ndarray:
    # Ric(Y, Z) = trace of X -> R(X, Y, Z, .): Ric_bc = g+^{ad} R_abcd
    return np.einsum("ad,abcd->bc", gplus, R)


def ricci_at(spec: MetricSpec, point, tol: float = DEFAULT_TOL) -> RicciValue:
    g = eval_metric(spec, point)
    R = riemann_at(spec, point, tol).components
    gplus = cometric(g, tol)
    ric = _contract_ricci(R, gplus.matrix)
    return RicciValue(ric, _point(point), gplus.rank < spec.dim)


def scalar_at(spec: MetricSpec, point, tol: float = DEFAULT_TOL) -> float:
    g = eval_metric(spec, point)
    ric = ricci_at(spec, point, tol).matrix
    return float(np.einsum("bc,bc->", cometric(g, tol).matrix, ric))


def _require_nondegenerate(g, tol, what):
    nz = signature_of(g, tol)[0]
    if nz:
        raise DegenerateMetricError(f"{what} needs a non-degenerate metric; {nz} null direction(s) at this point")


def einstein_at(spec: MetricSpec, point, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``G = Ric - s g / 2``; undefined where the metric degenerates."""
    g = eval_metric(spec, point)
    _require_nondegenerate(g, tol, "the Einstein tensor")
    R = riemann_at(spec, point, tol).components
    ginv = cometric(g, tol).matrix
    ric = _contract_ricci(R, ginv)
    s = float(np.einsum("bc,bc->", ginv, ric))
    return ric - 0.5 * s * g


def einstein_density_at(spec: MetricSpec, point, tol: float = DEFAULT_TOL) -> EinsteinDensityValue:
    """Einstein density from the Levi-Civita symbol; finite wherever the
    covariant Riemann tensor is, including degenerate semi-regular points."""
    if spec.dim != 4:
        raise DimensionError(f"the Einstein density is defined for dim = 4, got {spec.dim}")
    g = eval_metric(spec, point)
    R = riemann_at(spec, point, tol).components
    raw = kernels.levi_civita_density(np.ascontiguousarray(g), np.ascontiguousarray(R), _EPS4)
    upper = raw / LEVI_CIVITA_NORMALIZATION
    lower = g @ upper @ g
    return EinsteinDensityValue(upper, lower, raw, _point(point))


def hodge_double_dual_at(spec: MetricSpec, point, tol: float = DEFAULT_TOL) -> HodgeResult:
    """Double Hodge dual of ``R_abcd`` via the volume form
    ``eps_abcd = [abcd] sqrt(-det g)`` and the Einstein tensor candidate
    ``g^{st} (*R*)_asbt``, with its measured ratio to ``einstein_at``."""
    if spec.dim != 4:
        raise DimensionError(f"the Hodge double dual is implemented for dim = 4, got {spec.dim}")
    g = eval_metric(spec, point)
    _require_nondegenerate(g, tol, "the Hodge dual")
    det = float(np.linalg.det(g))
    if -det <= 0.0:
        raise NonLorentzianError(f"-det g = {-det} is not positive")
    ginv = np.linalg.inv(g)
    vol = _EPS4 * np.sqrt(-det)
    vol_mixed = np.einsum("abuv,us,vt->abst", vol, ginv, ginv)
    R = riemann_at(spec, point, tol).components
    star = np.einsum("abst,cdpq,stpq->abcd", vol_mixed, vol_mixed, R)
    cand = np.einsum("st,asbt->ab", ginv, star)
    G = einstein_at(spec, point, tol)
    mask = np.abs(G) > 1e-8 * max(1.0, np.abs(G).max())
    if mask.any():
        q = cand[mask] / G[mask]
        ratio, spread = float(np.median(q)), float(np.ptp(q))
    else:
        ratio, spread = float("nan"), float("nan")
    return HodgeResult(star, cand, ratio, spread)


def densitized_residual(spec: MetricSpec, point, lam: float = 0.0, T=None, kappa: float = 1.0,
                        tol: float = DEFAULT_TOL) -> np.ndarray:
    """``G_ab det g + lam g_ab det g - kappa T_ab det g``."""
    dens = einstein_density_at(spec, point, tol)
    g = eval_metric(spec, point)
    det = float(np.linalg.det(g))
    T = np.zeros_like(g) if T is None else np.asarray(T, dtype=float)
    if T.shape != g.shape:
        raise DimensionError(f"stress-energy must be {g.shape}, got {T.shape}")
    return dens.lower + lam * g * det - kappa * T * det


def kerr_newman_regularize(m: float, a: float, e: float) -> MetricSpec:
    """Boyer-Lindquist Kerr-Newman with every component multiplied by
    ``Sigma * Delta``; all components are then polynomial in ``r`` and
    trigonometric in ``theta``."""
    from .catalog import get_metric

    return get_metric("kerr_newman_regularized", {"m": m, "a": a, "e": e})
