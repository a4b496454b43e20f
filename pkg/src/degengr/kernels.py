"""Backend selection for the numeric hot loops.

numba is used when importable unless ``DEGENGR_NUMBA=0`` is set in the
environment, in which case (or if numba is missing) the pure-numpy
implementations run instead. ``BACKEND`` names the active one.
"""
from __future__ import annotations

import os
import warnings

from . import _kernels_numpy

_want_numba = os.environ.get("DEGENGR_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

if _want_numba:
    try:
        from . import _kernels_numba as _active
        BACKEND = "numba"
    except ImportError:
        warnings.warn("numba is not installed; using the numpy kernels", RuntimeWarning)
        _active = _kernels_numpy
        BACKEND = "numpy"
else:
    _active = _kernels_numpy
    BACKEND = "numpy"

log_sinh = _active.log_sinh
sc_log_integrand = _active.sc_log_integrand
integrate_segment = _active.integrate_segment
levi_civita_density = _active.levi_civita_density


def backend(name: str):
    """Return the kernel module for ``"numba"`` or ``"numpy"`` explicitly."""
    if name == "numpy":
        return _kernels_numpy
    if name == "numba":
        from . import _kernels_numba
        return _kernels_numba
    raise ValueError(f"unknown backend {name!r}")
