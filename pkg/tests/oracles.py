"""Independent reference implementations used by the tests.

Nothing here imports the package's geometry or quadrature code; metrics
are typed in directly as sympy matrices and the strip map is integrated
with mpmath.
"""
from __future__ import annotations

from functools import lru_cache

import mpmath as mp
import numpy as np
import sympy as sp

t, r, x, y, z, th, ph = sp.symbols("t r x y z theta phi", real=True)
m_, e_, a_ = sp.symbols("m e a", real=True)


def _textbook(name):
    if name == "minkowski":
        return (t, x, y, z), sp.diag(-1, 1, 1, 1)
    if name == "sphere2":
        return (th, ph), sp.diag(1, sp.sin(th) ** 2)
    if name == "schwarzschild":
        f = 1 - 2 * m_ / r
        return (t, r, th, ph), sp.diag(-f, 1 / f, r**2, r**2 * sp.sin(th) ** 2)
    if name == "reissner_nordstrom":
        f = 1 - 2 * m_ / r + e_**2 / r**2
        return (t, r, th, ph), sp.diag(-f, 1 / f, r**2, r**2 * sp.sin(th) ** 2)
    if name in ("kerr_newman", "kerr_newman_regularized"):
        sig = r**2 + a_**2 * sp.cos(th) ** 2
        dl = r**2 - 2 * m_ * r + a_**2 + e_**2
        s2 = sp.sin(th) ** 2
        g = sp.zeros(4, 4)
        g[0, 0] = -(dl - a_**2 * s2) / sig
        g[0, 3] = g[3, 0] = -a_ * s2 * (r**2 + a_**2 - dl) / sig
        g[3, 3] = ((r**2 + a_**2) ** 2 - dl * a_**2 * s2) * s2 / sig
        g[1, 1] = sig / dl
        g[2, 2] = sig
        if name == "kerr_newman_regularized":
            g = (g * sig * dl).applyfunc(sp.cancel)
        return (t, r, th, ph), g
    if name == "diag_semiregular":
        return (t, x, y, z), sp.diag(-1, t**4, 1, 1)
    if name == "diag_nonregular":
        return (t, x, y, z), sp.diag(-1, t, 1, 1)
    raise KeyError(name)


PARAM_SYMBOLS = {"m": m_, "e": e_, "a": a_}


def textbook_metric(name):
    return _textbook(name)


@lru_cache(maxsize=None)
def symbolic_riemann(name):
    """``(coords, g, R_lower)`` with ``R_lower[a][b][c][d] = g_de R^e_cab``
    and ``R^a_bcd = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb``."""
    coords, g = _textbook(name)
    n = len(coords)
    ginv = sp.diag(*[1 / g[i, i] for i in range(n)])
    if n == 4 and g[0, 3] != 0:
        # only the t-phi block is off-diagonal
        det = g[0, 0] * g[3, 3] - g[0, 3] ** 2
        ginv[0, 0], ginv[3, 3] = g[3, 3] / det, g[0, 0] / det
        ginv[0, 3] = ginv[3, 0] = -g[0, 3] / det
    gam = [[[sum(ginv[a, s] * (sp.diff(g[s, b], coords[c]) + sp.diff(g[s, c], coords[b])
                                 - sp.diff(g[b, c], coords[s])) for s in range(n)) / 2
             for c in range(n)] for b in range(n)] for a in range(n)]
    riem = [[[[sp.diff(gam[a][d][b], coords[c]) - sp.diff(gam[a][c][b], coords[d])
               + sum(gam[a][c][k] * gam[k][d][b] - gam[a][d][k] * gam[k][c][b] for k in range(n))
               for d in range(n)] for c in range(n)] for b in range(n)] for a in range(n)]
    lower = [[[[sum(g[d, k] * riem[k][c][a][b] for k in range(n))
                for d in range(n)] for c in range(n)] for b in range(n)] for a in range(n)]
    return coords, g, lower


@lru_cache(maxsize=None)
def classical_curvature(name):
    """Lambdified ``(metric, R_lower)``."""
    coords, g, lower = symbolic_riemann(name)
    args = list(coords) + [m_, e_, a_]
    gfun = sp.lambdify(args, g, "numpy")
    rfun = sp.lambdify(args, lower, "numpy")
    return gfun, rfun


def classical_riemann(name, point, params):
    _, rfun = classical_curvature(name)
    vals = list(point) + [params.get("m", 1.0), params.get("e", 0.0), params.get("a", 0.0)]
    return np.array(rfun(*vals), dtype=float)


def riemann_limit(name, point, params=None):
    """``lim R_lower`` as the first coordinate tends to ``point[0]``, taken
    symbolically with the remaining coordinates fixed."""
    coords, _, lower = symbolic_riemann(name)
    params = params or {}
    subs = {c: sp.nsimplify(v) for c, v in zip(coords[1:], point[1:])}
    subs.update({PARAM_SYMBOLS[k]: sp.nsimplify(v) for k, v in params.items()})
    out = np.zeros((len(coords),) * 4)
    for idx in np.ndindex(out.shape):
        expr = lower[idx[0]][idx[1]][idx[2]][idx[3]]
        if expr != 0:
            out[idx] = float(sp.limit(sp.cancel(expr.subs(subs)), coords[0], sp.nsimplify(point[0])))
    return out


@lru_cache(maxsize=None)
def _metric_fn(name):
    coords, g = _textbook(name)
    return sp.lambdify(list(coords) + [m_, e_, a_], g, "numpy")


def classical_metric(name, point, params):
    gfun = _metric_fn(name)
    vals = list(point) + [params.get("m", 1.0), params.get("e", 0.0), params.get("a", 0.0)]
    return np.array(gfun(*vals), dtype=float)


def classical_einstein(name, point, params):
    g = classical_metric(name, point, params)
    R = classical_riemann(name, point, params)
    ginv = np.linalg.inv(g)
    ric = np.einsum("ad,abcd->bc", ginv, R)
    s = np.einsum("bc,bc->", ginv, ric)
    return ric - 0.5 * s * g


# ------------------------------------------------------------- strip map

def mp_integrand(zeta, lower, upper, angles, am, ap):
    """Integrand at an interior point. There every sinh factor lies in a
    fixed open half-plane (upper for lower prevertices, lower for upper
    ones), so the principal logarithm is continuous."""
    zeta = mp.mpc(zeta)
    out = (mp.pi / 2) * (mp.mpf(am) - mp.mpf(ap)) * zeta
    pv = [mp.mpc(v, 0) for v in lower] + [mp.mpc(v, 1) for v in upper]
    for p, al in zip(pv, angles):
        out += (mp.mpf(al) - 1) * mp.log(mp.sinh(mp.pi / 2 * (zeta - p)))
    return mp.exp(out)


def mp_strip_map(zpt, lower, upper, angles, am, ap, via=0.5, dps=30):
    """``int_{i/2}^{z}`` along i/2 -> i*via -> Re z + i*via -> z, by
    tanh-sinh quadrature (which tolerates the algebraic endpoint singularity)."""
    with mp.workdps(dps):
        zpt = mp.mpc(zpt.real, zpt.imag)
        pts = [mp.mpc(0, 0.5), mp.mpc(0, via), mp.mpc(zpt.real, via), zpt]
        f = lambda s: mp_integrand(s, lower, upper, angles, am, ap)  # noqa: E731
        total = mp.mpc(0)
        for v, w in zip(pts, pts[1:]):
            if v != w:
                total += mp.quad(lambda s: f(v + (w - v) * s) * (w - v), [0, 1])
        return complex(total)
