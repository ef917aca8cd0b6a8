"""Optional numba acceleration.

Set GFERMAT_DISABLE_NUMBA=1 to force the pure-numpy code paths (useful for
debugging and for the benchmark that compares both).
"""

from __future__ import annotations

import os

DISABLE_ENV = "GFERMAT_DISABLE_NUMBA"


def _disabled():
    return os.environ.get(DISABLE_ENV, "").strip().lower() in ("1", "true", "yes", "on")


try:
    if _disabled():
        raise ImportError("numba disabled by environment")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        # decorator no-op, usable both bare and with arguments
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


def numba_active():
    return HAVE_NUMBA and not _disabled()
