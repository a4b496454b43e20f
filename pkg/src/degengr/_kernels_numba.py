"""numba-compiled kernels; same contracts as ``_kernels_numpy``."""
from __future__ import annotations

import cmath
import math

import numpy as np
from numba import njit

from ._gk15 import GAUSS_WEIGHTS, KRONROD_NODES, KRONROD_WEIGHTS

HALF_PI = 0.5 * math.pi
_JIT = dict(cache=True, nogil=True)

_KN = KRONROD_NODES.copy()
_KW = KRONROD_WEIGHTS.copy()
_GW = GAUSS_WEIGHTS.copy()


@njit(**_JIT)
def _log_sinh1(u, side):
    flip = u.real < 0.0
    w = -u if flip else u
    if abs(w) < 0.1:
        w2 = w * w
        series = (((w2 / 362880.0 + 1.0 / 5040.0) * w2 + 1.0 / 120.0) * w2 + 1.0 / 6.0) * w2 + 1.0
        out = cmath.log(w) + cmath.log(series)
    else:
        out = w + cmath.log(0.5 * (1.0 - cmath.exp(-2.0 * w)))
    if flip:
        out += 1j * math.pi * side
    return out


@njit(**_JIT)
def log_sinh(u, side):
    out = np.empty(u.shape[0], dtype=np.complex128)
    for i in range(u.shape[0]):
        out[i] = _log_sinh1(u[i], side)
    return out


@njit(**_JIT)
def _log_integrand1(base, offset, prev, expo, side, end_coef):
    acc = end_coef * (base + offset)
    for k in range(prev.shape[0]):
        u = HALF_PI * ((base - prev[k]) + offset)
        acc += (expo[k] - 1.0) * _log_sinh1(u, side[k])
    return acc


@njit(**_JIT)
def sc_log_integrand(base, offsets, prev, expo, side, end_coef):
    out = np.empty(offsets.shape[0], dtype=np.complex128)
    for i in range(offsets.shape[0]):
        out[i] = _log_integrand1(base, offsets[i], prev, expo, side, end_coef)
    return out


@njit(**_JIT)
def _gk15(base, span, p, a, b, prev, expo, side, end_coef):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    kron = 0j
    gauss = 0j
    for j in range(15):
        if j < 7:
            x = center - half * _KN[j]
            wk = _KW[j]
        else:
            x = center + half * _KN[14 - j]
            wk = _KW[14 - j]
        if p == 1.0:
            off = span * x
            logjac = 0.0
        else:
            off = span * x**p
            logjac = math.log(p) + (p - 1.0) * math.log(x)
        val = cmath.exp(_log_integrand1(base, off, prev, expo, side, end_coef) + logjac) * span
        kron += wk * val
        if j % 2 == 1:
            gi = j // 2 if j < 7 else (14 - j) // 2
            gauss += _GW[gi] * val
    kron *= half
    gauss *= half
    return kron, abs(kron - gauss)


@njit(**_JIT)
def integrate_segment(v, w, prev, expo, side, end_coef, alpha_v, tol, max_depth=40, max_evals=20000):
    span = w - v
    p = 1.0 / alpha_v if alpha_v > 0.0 else 1.0
    total = 0j
    err = 0.0
    ok = True
    sa = np.empty(4 * max_depth + 8)
    sb = np.empty(4 * max_depth + 8)
    sd = np.empty(4 * max_depth + 8, dtype=np.int64)
    top = 0
    sa[0] = 0.0
    sb[0] = 1.0
    sd[0] = 0
    top = 1
    evals = 0
    while top > 0:
        top -= 1
        a = sa[top]
        b = sb[top]
        depth = sd[top]
        val, e = _gk15(v, span, p, a, b, prev, expo, side, end_coef)
        evals += 1
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            return val, math.inf, False
        exhausted = depth >= max_depth or evals >= max_evals
        if e <= tol * (b - a) or exhausted:
            if e > tol * (b - a):
                ok = False
            total += val
            err += e
        else:
            mid = 0.5 * (a + b)
            sa[top] = mid
            sb[top] = b
            sd[top] = depth + 1
            top += 1
            sa[top] = a
            sb[top] = mid
            sd[top] = depth + 1
            top += 1
    return total, err, ok


@njit(**_JIT)
def levi_civita_density(g, R, eps):
    n = g.shape[0]
    out = np.zeros((n, n))
    # only the 24 non-zero symbol entries contribute
    perms = []
    for a in range(n):
        for k in range(n):
            for s in range(n):
                for t in range(n):
                    if eps[a, k, s, t] != 0.0:
                        perms.append((a, k, s, t))
    for i in range(len(perms)):
        a, k, s, t = perms[i]
        e1 = eps[a, k, s, t]
        for j in range(len(perms)):
            b, l, p, q = perms[j]
            out[a, b] += g[k, l] * e1 * eps[b, l, p, q] * R[s, t, p, q]
    return out
