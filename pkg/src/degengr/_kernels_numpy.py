"""Pure-numpy kernels. Reference path, and the fallback when numba is
disabled or missing. Must agree with ``_kernels_numba`` to rounding."""
from __future__ import annotations

import math

import numpy as np

from ._gk15 import GAUSS_WEIGHTS, KRONROD_NODES, KRONROD_WEIGHTS

HALF_PI = 0.5 * math.pi

# sinh(w)/w Taylor coefficients in w^2, enough for |w| < 0.1 to 1e-18
_SINHC = np.array([1.0, 1.0 / 6.0, 1.0 / 120.0, 1.0 / 5040.0, 1.0 / 362880.0])


def log_sinh(u, side):
    """Continuous logarithm of ``sinh(u)`` on the closed half-strips.

    ``side`` is +1 where ``Im u`` ranges over ``[0, pi/2]`` (lower
    prevertices) and -1 for ``[-pi/2, 0]`` (upper prevertices); it picks
    the value of the argument on the negative real axis.
    """
    u = np.asarray(u, dtype=complex)
    flip = u.real < 0.0
    w = np.where(flip, -u, u)
    small = np.abs(w) < 0.1
    out = np.empty_like(w)
    ws = w[small]
    if ws.size:
        w2 = ws * ws
        series = _SINHC[4]
        for c in _SINHC[3::-1]:
            series = series * w2 + c
        out[small] = np.log(ws) + np.log(series)
    wl = w[~small]
    if wl.size:
        out[~small] = wl + np.log(0.5 * (1.0 - np.exp(-2.0 * wl)))
    side = np.broadcast_to(side, u.shape)
    out = out + np.where(flip, 1j * math.pi * side, 0.0)
    return out


def sc_log_integrand(base, offsets, prev, expo, side, end_coef):
    """``log`` of the strip-map integrand at ``base + offsets``.

    Differences to the prevertices are formed as ``(base - z_k) + offset``
    so that an offset measured from a prevertex keeps full precision.
    """
    offsets = np.asarray(offsets, dtype=complex)
    zeta = base + offsets
    out = end_coef * zeta
    for k in range(prev.shape[0]):
        u = HALF_PI * ((base - prev[k]) + offsets)
        out = out + (expo[k] - 1.0) * log_sinh(u, side[k])
    return out


def _gk15(base, span, p, a, b, prev, expo, side, end_coef):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = np.concatenate((center - half * KRONROD_NODES[:-1], center + half * KRONROD_NODES[::-1]))
    w = np.concatenate((KRONROD_WEIGHTS[:-1], KRONROD_WEIGHTS[::-1]))
    if p == 1.0:
        offsets = span * x
        logjac = np.zeros_like(x)
    else:
        offsets = span * x**p
        logjac = math.log(p) + (p - 1.0) * np.log(x)
    vals = np.exp(sc_log_integrand(base, offsets, prev, expo, side, end_coef) + logjac) * span
    kron = half * np.dot(w, vals)
    # Gauss points are the odd-indexed Kronrod nodes
    g_idx = np.array([1, 3, 5, 7, 9, 11, 13])
    gw = np.concatenate((GAUSS_WEIGHTS[:-1], GAUSS_WEIGHTS[::-1]))
    gauss = half * np.dot(gw, vals[g_idx])
    return kron, abs(kron - gauss)


def integrate_segment(v, w, prev, expo, side, end_coef, alpha_v, tol, max_depth=40, max_evals=20000):
    """Integrate the strip-map integrand along the straight segment v -> w.

    If ``alpha_v > 0`` then ``v`` is a prevertex with that angle and the
    endpoint singularity is removed by ``zeta = v + (w - v) s**(1/alpha_v)``.
    Subdivision stops at ``max_depth`` or after ``max_evals`` panels; the
    result is then flagged as not converged.
    Returns ``(value, error_estimate, converged)``.
    """
    span = complex(w - v)
    p = 1.0 / alpha_v if alpha_v > 0.0 else 1.0
    total = 0j
    err = 0.0
    ok = True
    stack = [(0.0, 1.0, 0)]
    evals = 0
    while stack:
        a, b, depth = stack.pop()
        val, e = _gk15(complex(v), span, p, a, b, prev, expo, side, end_coef)
        evals += 1
        if not np.isfinite(val):
            return val, math.inf, False
        exhausted = depth >= max_depth or evals >= max_evals
        if e <= tol * (b - a) or exhausted:
            if e > tol * (b - a):
                ok = False
            total += val
            err += e
        else:
            mid = 0.5 * (a + b)
            stack.append((mid, b, depth + 1))
            stack.append((a, mid, depth + 1))
    return total, err, ok


def levi_civita_density(g, R, eps):
    """``g_kl eps^{akst} eps^{blpq} R_stpq`` for a 4x4 metric and 4^4 Riemann array."""
    return np.einsum("kl,akst,blpq,stpq->ab", g, eps, eps, R, optimize=True)
