"""Backend selection for the hot kernels.

STRIPLAB_NUMBA=0 switches every kernel to plain Python/numpy before the
kernels module is imported; any other value (or an unset variable) keeps
the numba path. The flag is read once at import time.
"""

import os

_USE_NUMBA = os.environ.get("STRIPLAB_NUMBA", "1") != "0"

if _USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a hard dep, belt and braces
        numba = None
        _USE_NUMBA = False


def maybe_jit(fn):
    """Compile fn with numba.njit when the accelerated backend is active."""
    if _USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


def backend_name():
    """Name of the active kernel backend, 'numba' or 'numpy'."""
    return "numba" if _USE_NUMBA else "numpy"
