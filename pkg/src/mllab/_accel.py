"""Numba switch.

Set ``MLLAB_DISABLE_NUMBA=1`` to force the pure numpy kernels. Numba is also
skipped silently when it is not importable.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_DISABLED = os.environ.get("MLLAB_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")
HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED


def njit(func):
    """``numba.njit(cache=True, nogil=True)`` when numba is importable, else identity.

    Compiles lazily, so merely decorating costs nothing when the numpy path is
    selected.
    """
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)
