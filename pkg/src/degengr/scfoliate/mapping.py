"""Numerical strip map ``f(z) = A + C * int_{z0}^{z} F(zeta) d zeta`` with

    F(zeta) = exp[pi/2 (alpha_- - alpha_+) zeta] * prod_k sinh(pi/2 (zeta - z_k))^(alpha_k - 1).

Integration runs along axis-parallel polylines through the strip interior.
The logarithm of each sinh factor uses a closed-form branch that is
continuous on the whole closed strip (see ``kernels.log_sinh``), so no
branch tracking along the path is needed. Segments that start or end on
a prevertex use the substitution ``zeta = z_k + (w - z_k) s^(1/alpha_k)``,
which turns the algebraic endpoint singularity into a smooth integrand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .. import kernels
from ..errors import ConvergenceError, PathError, PoleError
from .config import DELTA, StripConfig

TOL = 1e-9
NEAR = 0.25  # radius within which paths are routed through the prevertex
END_STEP_TOL = 1e-7
END_MAX_X = 400.0


def _check_point(z: complex):
    if not (-1e-12 <= z.imag <= 1.0 + 1e-12) or not math.isfinite(z.real):
        raise PathError(f"{z} is outside the closed strip 0 <= Im z <= 1")


def _vertex_alpha(cfg: StripConfig, z: complex) -> tuple[float, int]:
    """Angle and index of the prevertex equal to ``z``, or ``(0, -1)``."""
    for k, (p, a) in enumerate(zip(cfg.prevertices, cfg.angles)):
        if z == p:
            return (float(a) if a != 1 else 0.0), k
    return 0.0, -1


def sc_integrand(zeta, cfg: StripConfig) -> complex:
    zeta = complex(zeta)
    _check_point(zeta)
    for p, a in zip(cfg.prevertices, cfg.angles):
        if zeta == p:
            if a < 1:
                raise PoleError(f"integrand has a pole at prevertex {p} (angle {a} pi)")
            if a > 1:
                return 0j
    prev, expo, side, end_coef = cfg.kernel_arrays
    logv = kernels.sc_log_integrand(zeta, np.zeros(1, dtype=np.complex128), prev, expo, side, end_coef)
    return complex(np.exp(logv[0]))


def _integrate(cfg: StripConfig, v: complex, w: complex, tol: float) -> complex:
    """``int_v^w F``; either endpoint may be a prevertex."""
    if v == w:
        return 0j
    av, _ = _vertex_alpha(cfg, v)
    aw, _ = _vertex_alpha(cfg, w)
    if av > 0 and aw > 0:
        mid = 0.5 * (v + w)
        return _integrate(cfg, v, mid, 0.5 * tol) + _integrate(cfg, mid, w, 0.5 * tol)
    prev, expo, side, end_coef = cfg.kernel_arrays
    if aw > 0:
        val, err, ok = kernels.integrate_segment(w, v, prev, expo, side, end_coef, aw, tol)
        val = -val
    else:
        val, err, ok = kernels.integrate_segment(v, w, prev, expo, side, end_coef, av, tol)
    if not ok:
        raise ConvergenceError(f"quadrature from {v} to {w} did not reach {tol:g} (estimate {err:.3g})")
    return complex(val)


def _near_radius(cfg: StripConfig) -> float:
    r = NEAR
    for xs in (sorted(cfg.lower), sorted(cfg.upper)):
        for a, b in zip(xs, xs[1:]):
            r = min(r, 0.5 * (b - a))
    return max(r, DELTA)


def integration_path(z, cfg: StripConfig, via: float = 0.5) -> list[complex]:
    """Polyline from ``z0`` to ``z``: up or down to height ``via``, across,
    then to ``z``. Near a prevertex the path passes through it, so no
    segment grazes a singularity."""
    z = complex(z)
    _check_point(z)
    if not 0.0 < via < 1.0:
        raise PathError(f"path height {via} must lie strictly inside the strip")
    r = _near_radius(cfg)
    target = None
    for p in cfg.prevertices:
        if abs(z - p) < r:
            target = p
            break
    x_turn = z.real if target is None else target.real
    pts = [cfg.z0, complex(cfg.z0.real, via), complex(x_turn, via)]
    if target is not None:
        pts.append(target)
    pts.append(z)
    out = [pts[0]]
    for p in pts[1:]:
        if p != out[-1]:
            out.append(p)
    return out


def sc_map(z, cfg: StripConfig, via: float = 0.5, tol: float = TOL) -> complex:
    """Image of ``z`` under the strip map, to absolute accuracy ``tol``."""
    path = integration_path(z, cfg, via)
    nseg = max(1, len(path) - 1)
    total = 0j
    for v, w in zip(path, path[1:]):
        total += _integrate(cfg, v, w, tol / nseg)
    return cfg.A + cfg.C * total


def sc_map_along(points, cfg: StripConfig, tol: float = TOL) -> np.ndarray:
    """Images of consecutive points, integrating segment to segment.

    Consecutive points must be joined by segments inside the strip that
    only meet prevertices at their ends.
    """
    points = [complex(p) for p in points]
    out = np.empty(len(points), dtype=np.complex128)
    if not points:
        return out
    cur = sc_map(points[0], cfg, tol=tol)
    out[0] = cur
    for i in range(1, len(points)):
        cur = cur + cfg.C * _integrate(cfg, points[i - 1], points[i], tol)
        out[i] = cur
    return out


@dataclass(frozen=True)
class PolygonVertex:
    label: str
    alpha: Fraction
    image: complex | None  # None when an end limit does not converge
    converged: bool = True


def end_limit(cfg: StripConfig, sign: int, tol: float = TOL) -> tuple[complex, bool]:
    """``lim f(sign * X + i/2)`` as ``X`` grows in unit steps."""
    x = 1.0 + max((abs(p.real) for p in cfg.prevertices), default=0.0)
    cur = sc_map(complex(sign * x, 0.5), cfg, tol=tol)
    while x < END_MAX_X:
        step = cfg.C * _integrate(cfg, complex(sign * x, 0.5), complex(sign * (x + 1.0), 0.5), tol)
        cur += step
        x += 1.0
        if abs(step) < END_STEP_TOL:
            return cur, True
    return cur, False


def polygon_vertices(cfg: StripConfig, tol: float = TOL) -> list[PolygonVertex]:
    """Vertex images in boundary order: left end, lower prevertices, right
    end, upper prevertices. Traversal is counter-clockwise."""
    nl = len(cfg.lower)
    pv = cfg.prevertices
    out = []

    def end(sign, label, alpha):
        img, ok = end_limit(cfg, sign, tol)
        out.append(PolygonVertex(label, alpha, img if ok else None, ok))

    listing = cfg.listing()
    end(-1, listing[0][0], cfg.alpha_minus)
    for k in range(nl):
        out.append(PolygonVertex(listing[1 + k][0], cfg.angles[k], sc_map(pv[k], cfg, tol=tol)))
    end(1, listing[nl + 1][0], cfg.alpha_plus)
    for k in range(nl, len(pv)):
        out.append(PolygonVertex(listing[k + 2][0], cfg.angles[k], sc_map(pv[k], cfg, tol=tol)))
    return out


def interior_angles(vertices: list[PolygonVertex]) -> list[float | None]:
    """Interior angles in units of pi measured from the vertex images of a
    counter-clockwise polygon; None where a neighbour is missing."""
    n = len(vertices)
    out = []
    for i, v in enumerate(vertices):
        prv, nxt = vertices[i - 1].image, vertices[(i + 1) % n].image
        if v.image is None or prv is None or nxt is None:
            out.append(None)
            continue
        ang = np.angle((prv - v.image) / (nxt - v.image))
        if ang <= 0:
            ang += 2 * math.pi
        out.append(float(ang / math.pi))
    return out


# ------------------------------------------------------------------ foliation

@dataclass(frozen=True)
class Polyline:
    kind: str  # "leaf", "boundary" or "vertex"
    label: str
    points: np.ndarray
    level: float | None = None


@dataclass
class PolylineSet:
    polylines: list[Polyline] = field(default_factory=list)

    def of_kind(self, kind: str) -> list[Polyline]:
        return [p for p in self.polylines if p.kind == kind]

    @property
    def leaves(self) -> list[Polyline]:
        return self.of_kind("leaf")

    def all_points(self) -> np.ndarray:
        if not self.polylines:
            return np.zeros(0, dtype=np.complex128)
        return np.concatenate([p.points for p in self.polylines])


def _boundary_pieces(xs, x_lo, x_hi, samples):
    cuts = [x_lo] + sorted(x for x in xs if x_lo < x < x_hi) + [x_hi]
    span = x_hi - x_lo
    for a, b in zip(cuts, cuts[1:]):
        n = max(16, int(round(samples * (b - a) / span)))
        yield np.linspace(a, b, n)


def foliation(cfg: StripConfig, leaves: int, x_range=(-10.0, 10.0), samples: int = 241,
              tol: float = TOL) -> PolylineSet:
    """Images of ``Im z = c`` for ``c = j / (leaves + 1)``, the boundary
    images split at the prevertices, and the polygon vertices."""
    if leaves < 2:
        raise ValueError(f"need at least 2 leaves, got {leaves}")
    if samples < 16:
        raise ValueError(f"need at least 16 samples per leaf, got {samples}")
    x_lo, x_hi = (float(v) for v in x_range)
    if not x_lo < x_hi:
        raise ValueError(f"empty x range {x_range}")
    xs = np.linspace(x_lo, x_hi, samples)
    out = PolylineSet()
    for j in range(1, leaves + 1):
        c = j / (leaves + 1)
        pts = sc_map_along(xs + 1j * c, cfg, tol)
        out.polylines.append(Polyline("leaf", f"leaf c={c:.6g}", pts, c))
    for name, height, prevs in (("lower", 0.0, cfg.lower), ("upper", 1.0, cfg.upper)):
        for i, piece in enumerate(_boundary_pieces(prevs, x_lo, x_hi, samples)):
            pts = sc_map_along(piece + 1j * height, cfg, tol)
            out.polylines.append(Polyline("boundary", f"{name} {i}", pts))
    for v in polygon_vertices(cfg, tol):
        if v.image is not None:
            out.polylines.append(Polyline("vertex", f"vertex {v.label}", np.array([v.image])))
    pts = out.all_points()
    if not np.all(np.isfinite(pts)):
        raise ConvergenceError("foliation produced non-finite points")
    return out
