"""Numba switch.

Set ``GREEDYRELAY_PURE_NUMPY=1`` to route every kernel through the
vectorized numpy implementations instead of the jitted loops.  The flag is
read once, at import time.
"""
import os

try:
    import numba
    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAS_NUMBA = False

PURE_NUMPY = os.environ.get("GREEDYRELAY_PURE_NUMPY", "").strip().lower() not in ("", "0", "false", "no")
USE_NUMBA = HAS_NUMBA and not PURE_NUMPY


def njit(fn):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if not HAS_NUMBA:
        return fn
    return numba.njit(cache=True)(fn)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
