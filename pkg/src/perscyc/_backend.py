"""Kernel backend selection.

Hot numeric kernels (max-flow, boundary-matrix reduction) are written as
plain array code and compiled with numba when available.  Set
``PERSCYC_BACKEND=python`` to force the interpreted fallback (same source,
no compilation), or ``PERSCYC_BACKEND=numba`` to require numba.
"""
from __future__ import annotations

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a default dependency
    numba = None
    HAVE_NUMBA = False

_requested = os.environ.get("PERSCYC_BACKEND", "").strip().lower()
if _requested == "numba" and not HAVE_NUMBA:
    raise ImportError("PERSCYC_BACKEND=numba but numba is not installed")

if _requested in ("numba", "python"):
    BACKEND = _requested
else:
    BACKEND = "numba" if HAVE_NUMBA else "python"

USE_NUMBA = BACKEND == "numba"


def njit(func=None, **kwargs):
    """``numba.njit`` under the numba backend, identity otherwise."""
    if USE_NUMBA:
        kwargs.setdefault("cache", True)
        if func is None:
            return numba.njit(**kwargs)
        return numba.njit(**kwargs)(func)
    if func is None:
        return lambda f: f
    return func
