"""Strip-map configurations and the built-in presets.

Prevertices are stored by real part. Lower ones sit on ``Im z = 0`` and
are listed left to right; upper ones sit on ``Im z = 1`` and are listed
right to left, so that the full listing
``(-inf, lower..., +inf, upper...)`` walks the strip boundary with the
interior on the left. Angles are multiples of pi and follow that listing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from ..errors import PresetError

DELTA = 1e-3  # closest approach of an integration path to a foreign prevertex


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class StripConfig:
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    angles: tuple[Fraction, ...]
    alpha_minus: Fraction
    alpha_plus: Fraction
    A: complex = 0j
    C: complex = 1 + 0j
    z0: complex = 0.5j
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(float(x) for x in self.lower))
        object.__setattr__(self, "upper", tuple(float(x) for x in self.upper))
        object.__setattr__(self, "angles", tuple(_frac(a) for a in self.angles))
        object.__setattr__(self, "alpha_minus", _frac(self.alpha_minus))
        object.__setattr__(self, "alpha_plus", _frac(self.alpha_plus))
        object.__setattr__(self, "A", complex(self.A))
        object.__setattr__(self, "C", complex(self.C))
        object.__setattr__(self, "z0", complex(self.z0))

    @property
    def prevertices(self) -> tuple[complex, ...]:
        """Finite prevertices in listing order."""
        return tuple(complex(x, 0.0) for x in self.lower) + tuple(complex(x, 1.0) for x in self.upper)

    @property
    def n_total(self) -> int:
        return len(self.lower) + len(self.upper) + 2

    def listing(self) -> list[tuple[str, Fraction]]:
        """``(label, angle)`` for every vertex in boundary order, ends included."""
        fmt = lambda x: f"{x:g}"  # noqa: E731
        nl = len(self.lower)
        out = [("-inf", self.alpha_minus)]
        out += [(fmt(x), a) for x, a in zip(self.lower, self.angles[:nl])]
        out.append(("+inf", self.alpha_plus))
        out += [(f"{fmt(x)}+i", a) for x, a in zip(self.upper, self.angles[nl:])]
        return out

    @cached_property
    def kernel_arrays(self):
        """``(prev, expo, side, end_coef)`` for the kernels; factors with
        angle exactly 1 are identically one and are dropped."""
        keep = [k for k, a in enumerate(self.angles) if a != 1]
        nl = len(self.lower)
        pv = self.prevertices
        prev = np.array([pv[k] for k in keep], dtype=np.complex128)
        expo = np.array([float(self.angles[k]) for k in keep], dtype=np.float64)
        side = np.array([1.0 if k < nl else -1.0 for k in keep], dtype=np.float64)
        end_coef = 0.5 * math.pi * float(self.alpha_minus - self.alpha_plus)
        return prev, expo, side, end_coef

    def mirror(self) -> "StripConfig":
        """Reflection ``z -> -conj(z)`` of the parameter strip."""
        nl = len(self.lower)
        low_a, up_a = self.angles[:nl], self.angles[nl:]
        return StripConfig(
            tuple(-x for x in reversed(self.lower)),
            tuple(-x for x in reversed(self.upper)),
            tuple(reversed(low_a)) + tuple(reversed(up_a)),
            self.alpha_plus,
            self.alpha_minus,
            -self.A.conjugate(),
            self.C.conjugate(),
            -self.z0.conjugate(),
            f"{self.name} mirrored".strip(),
        )


def validate_config(cfg: StripConfig) -> list[str]:
    """Return a list of problems; empty means the configuration is usable."""
    findings = []
    n = len(cfg.lower) + len(cfg.upper)
    if len(cfg.angles) != n:
        findings.append(f"{len(cfg.angles)} angles for {n} finite prevertices")
    if any(a <= 0 for a in cfg.angles):
        findings.append("prevertex angles must be positive")
    if cfg.alpha_minus < 0 or cfg.alpha_plus < 0:
        findings.append("end angles must be non-negative")
    if len(cfg.angles) == n:
        total = sum(cfg.angles, Fraction(0)) + cfg.alpha_minus + cfg.alpha_plus
        if total != cfg.n_total - 2:
            findings.append(f"angle sum {total} differs from n_total - 2 = {cfg.n_total - 2}")
    for label, xs, step in (("lower", cfg.lower, 1), ("upper", cfg.upper, -1)):
        if len(set(xs)) < len(xs):
            findings.append(f"coincident prevertices on the {label} boundary")
        elif any((b - a) * step <= 0 for a, b in zip(xs, xs[1:])):
            order = "increasing" if step > 0 else "decreasing"
            findings.append(f"{label} prevertices must be listed in {order} order")
        elif any(abs(b - a) < 2 * DELTA for a, b in zip(xs, xs[1:])):
            findings.append(f"{label} prevertices closer than {2 * DELTA:g}")
        if any(not math.isfinite(x) for x in xs):
            findings.append(f"non-finite {label} prevertex")
    if not 0.0 < cfg.z0.imag < 1.0:
        findings.append(f"base point {cfg.z0} is not interior to the strip")
    if cfg.C == 0:
        findings.append("scale constant C is zero")
    return findings


def trivial_config() -> StripConfig:
    """No prevertices and zero end angles. With ``A = z0`` the map is the
    identity; with ``A = 0`` it would be the translation ``z - z0``."""
    return StripConfig((), (), (), 0, 0, A=0.5j, name="trivial")


H, Q3, T2 = Fraction(1, 2), Fraction(3, 4), Fraction(3, 2)

PRESETS = ("hexagon", "threeoo3s", "diamond", "rn_kerr", "superman")


def preset(name: str, a: float = 1.0, b: float = 0.5) -> StripConfig:
    """Built-in configurations.

    The angle tuples are read positionally against the prevertex tuples,
    the infinite entries being the strip ends. ``a`` and ``b`` are free
    shape parameters; the defaults only give pleasant pictures.

    hexagon    (-inf, -a, a, +inf, a+i, -a+i)      angles (1/2, 3/4, 3/4, 1/2, 3/4, 3/4)
    threeoo3s  (-inf, -a, 0, a, +inf, b+i, -b+i)   angles (1/2, 1/2, 3/2, 1/2, 1/2, 3/4, 3/4), 0 < b < a
    diamond    (-inf, 0, +inf, i)                  angles (1/2, 1/2, 1/2, 1/2)
    rn_kerr    (-inf, -a, 0, a, +inf, i)           angles (1/2, 1/2, 3/2, 1/2, 1/2, 1/2)
    superman   (-inf, 0, +inf, a+i, -a+i)          angles (1/2, 1/2, 1/2, 3/4, 3/4)

    diamond also serves the time-like singularity diagrams, which share
    its prevertices and angles.
    """
    a, b = float(a), float(b)
    if not (math.isfinite(a) and a > 0):
        raise PresetError(f"preset parameter a must be positive, got {a}")
    if name == "hexagon":
        return StripConfig((-a, a), (a, -a), (Q3, Q3, Q3, Q3), H, H, name=name)
    if name == "threeoo3s":
        if not (math.isfinite(b) and 0 < b < a):
            raise PresetError(f"threeoo3s needs 0 < b < a, got a={a}, b={b}")
        return StripConfig((-a, 0.0, a), (b, -b), (H, T2, H, Q3, Q3), H, H, name=name)
    if name == "diamond":
        return StripConfig((0.0,), (0.0,), (H, H), H, H, name=name)
    if name == "rn_kerr":
        return StripConfig((-a, 0.0, a), (0.0,), (H, T2, H, H), H, H, name=name)
    if name == "superman":
        return StripConfig((0.0,), (a, -a), (H, Q3, Q3), H, H, name=name)
    raise PresetError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")

