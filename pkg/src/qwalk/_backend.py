"""Kernel backend selection.

Numba is used when importable unless ``QWALK_DISABLE_NUMBA`` is set to a
truthy value, in which case every kernel runs its pure-numpy path.  The
choice is made once at import time.
"""
from __future__ import annotations

import os

_FLAG = os.environ.get("QWALK_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by QWALK_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def identity(fn):
            return fn

        return identity


BACKEND = "numba" if HAS_NUMBA else "numpy"
