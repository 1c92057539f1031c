"""Optional numba compilation.

Set ``DCOMPLEX_DISABLE_NUMBA=1`` to run the kernels as plain Python over
numpy arrays.  The same source is used on both paths.
"""

from __future__ import annotations

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

DISABLED = os.environ.get("DCOMPLEX_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
NUMBA_ENABLED = numba is not None and not DISABLED


def njit(func):
    """Compile ``func`` with numba in nopython mode when enabled, else return it unchanged."""
    if NUMBA_ENABLED:
        return numba.njit(cache=True, nogil=True)(func)
    return func
