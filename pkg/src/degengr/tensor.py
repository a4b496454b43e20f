"""Pointwise linear algebra on an evaluated, possibly degenerate metric.

Rank decisions use a threshold relative to the largest eigenvalue
magnitude, ``tol * max|lambda|``, so they do not depend on the overall
scale of ``g``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dsl import MetricSpec
from .errors import AnnihilatorError

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class RadicalBasis:
    vectors: np.ndarray  # shape (k, dim), rows orthonormal
    tol: float

    def __len__(self):
        return self.vectors.shape[0]


@dataclass(frozen=True)
class CoMetric:
    """Moore-Penrose inverse of ``g``; realizes the inner product on
    covectors of the form ``g X``."""

    matrix: np.ndarray
    rank: int
    tol: float
    metric: np.ndarray

    @property
    def dim(self):
        return self.matrix.shape[0]


def eval_metric(spec: MetricSpec, point: Sequence[float]) -> np.ndarray:
    """Evaluate ``g_ab`` at ``point`` and symmetrize as ``(M + M^T)/2``."""
    m = spec.evaluate(point)
    return 0.5 * (m + m.T)


def _eig(g):
    g = np.asarray(g, dtype=float)
    lam, vecs = np.linalg.eigh(0.5 * (g + g.T))
    return lam, vecs


def _threshold(lam, tol):
    scale = np.max(np.abs(lam)) if lam.size else 0.0
    return tol * scale


def signature_of(g, tol: float = DEFAULT_TOL) -> tuple[int, int, int]:
    """Return ``(n_zero, n_plus, n_minus)``.

    >>> signature_of(np.diag([-1.0, 1, 1, 1]))
    (0, 3, 1)
    """
    lam, _ = _eig(g)
    cut = _threshold(lam, tol)
    if cut == 0.0:
        return (lam.size, 0, 0)
    n_zero = int(np.sum(np.abs(lam) < cut))
    n_plus = int(np.sum(lam >= cut))
    n_minus = int(np.sum(lam <= -cut))
    return (n_zero, n_plus, n_minus)


def radical_basis(g, tol: float = DEFAULT_TOL) -> RadicalBasis:
    lam, vecs = _eig(g)
    cut = _threshold(lam, tol)
    mask = np.abs(lam) < cut if cut > 0.0 else np.ones(lam.shape, dtype=bool)
    basis = vecs[:, mask].T.copy()
    return RadicalBasis(basis, tol)


def is_radical_annihilator(omega, g, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``omega = g X`` for some vector ``X``.

    Decided by the least-squares residual ``|g x - omega| <= tol (1 + |omega|)``
    with the same relative rank cut-off as the rest of this module.
    """
    omega = np.asarray(omega, dtype=float)
    g = np.asarray(g, dtype=float)
    x, *_ = np.linalg.lstsq(g, omega, rcond=tol)
    resid = np.linalg.norm(g @ x - omega)
    return bool(resid <= tol * (1.0 + np.linalg.norm(omega)))


def cometric(g, tol: float = DEFAULT_TOL) -> CoMetric:
    lam, vecs = _eig(g)
    cut = _threshold(lam, tol)
    keep = np.abs(lam) >= cut if cut > 0.0 else np.zeros(lam.shape, dtype=bool)
    inv = np.zeros_like(lam)
    inv[keep] = 1.0 / lam[keep]
    gplus = (vecs * inv) @ vecs.T
    gplus = 0.5 * (gplus + gplus.T)
    return CoMetric(gplus, int(keep.sum()), tol, np.asarray(g, dtype=float))


def cocontract(omega, tau, gplus: CoMetric, validate: bool = False) -> float:
    """Co-inner product ``omega^T g+ tau`` of two radical-annihilator covectors."""
    omega = np.asarray(omega, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if validate:
        for name, cov in (("first", omega), ("second", tau)):
            if not is_radical_annihilator(cov, gplus.metric, gplus.tol):
                raise AnnihilatorError(
                    f"{name} covector {cov.tolist()} does not annihilate the radical"
                )
    return float(omega @ gplus.matrix @ tau)
