"""Kernel acceleration switch.

Hot numeric kernels ship in two variants: a numba @njit build and a plain
numpy/python build.  Set SHADOWLAB_NO_NUMBA=1 to force the fallback (or it
engages automatically when numba is unavailable).  The flag is read once at
import time so a process uses one path consistently.
"""

import os

_flag = os.environ.get("SHADOWLAB_NO_NUMBA", "").strip()
NUMBA_DISABLED = _flag not in ("", "0")

try:
    if NUMBA_DISABLED:
        numba = None
    else:
        import numba
except ImportError:  # pragma: no cover
    numba = None

USING_NUMBA = numba is not None


def njit(*args, **kwargs):
    """@njit when numba is active, identity decorator otherwise."""
    if USING_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(fn):
        return fn

    return wrap
