"""Hot loops of the 1D walk, each in a numba and a pure-numpy flavour.

All kernels work on dense ``complex128`` arrays indexed by lattice offset.
Callers pad the arrays so the light cone of ``steps`` steps fits; amplitude
pushed past either end is dropped, never wrapped.

The public names (``walk_1d``, ``recurse_coupled``, ``recurse_decoupled``)
dispatch to numba when it is available and enabled, see ``qwalk._backend``.
The ``*_numpy`` and ``*_numba`` variants stay importable so tests and the
benchmark can compare them directly.
"""
from __future__ import annotations

import numpy as np

from ._backend import HAS_NUMBA, njit

__all__ = [
    "walk_1d",
    "recurse_coupled",
    "recurse_decoupled",
    "walk_1d_numpy",
    "recurse_coupled_numpy",
    "recurse_decoupled_numpy",
    "walk_1d_numba",
    "recurse_coupled_numba",
    "recurse_decoupled_numba",
]


# -- numpy -----------------------------------------------------------------


def walk_1d_numpy(down, up, c, s, steps):
    """Apply ``steps`` full-lattice steps: coin on every site, then shift.

    Returns new ``(down, up)`` arrays; the inputs are not modified.
    """
    down = down.copy()
    up = up.copy()
    for _ in range(steps):
        coin_down = c * down + s * up
        coin_up = s * down - c * up
        down[:-1] = coin_down[1:]
        down[-1] = 0.0
        up[1:] = coin_up[:-1]
        up[0] = 0.0
    return down, up


def _active_range(down, up):
    nz = np.flatnonzero((down != 0) | (up != 0))
    if nz.size == 0:
        return 0, -1
    return int(nz[0]), int(nz[-1])


def recurse_coupled_numpy(down, up, c, s, steps):
    """Coupled amplitude recursion restricted to the growing light cone.

    ``A[j] <- c A[j+1] + s B[j+1]`` and ``B[j] <- s A[j-1] - c B[j-1]``.
    """
    n = down.shape[0]
    a = down.copy()
    b = up.copy()
    lo, hi = _active_range(a, b)
    if hi < lo:
        return a, b
    for _ in range(steps):
        new_lo = max(lo - 1, 0)
        new_hi = min(hi + 1, n - 1)
        na = np.zeros(new_hi - new_lo + 1, dtype=np.complex128)
        nb = np.zeros_like(na)
        # A at j draws on j+1, B at j on j-1
        j = np.arange(new_lo, new_hi + 1)
        src = j + 1
        ok = (src >= lo) & (src <= hi)
        na[ok] = c * a[src[ok]] + s * b[src[ok]]
        src = j - 1
        ok = (src >= lo) & (src <= hi)
        nb[ok] = s * a[src[ok]] - c * b[src[ok]]
        a[lo:hi + 1] = 0.0
        b[lo:hi + 1] = 0.0
        a[new_lo:new_hi + 1] = na
        b[new_lo:new_hi + 1] = nb
        lo, hi = new_lo, new_hi
    return a, b


def recurse_decoupled_numpy(a0, a1, b0, b1, c, steps):
    """Three-term recursion carrying ``A`` and ``B`` separately.

    ``X_t[j] = c (X_{t-1}[j+1] - X_{t-1}[j-1]) + X_{t-2}[j]`` for X in {A, B},
    seeded by the slices at t=0 (``a0``, ``b0``) and t=1 (``a1``, ``b1``).
    Returns the slices after ``steps`` further time steps.
    """
    prev_a, cur_a = a0.copy(), a1.copy()
    prev_b, cur_b = b0.copy(), b1.copy()
    for _ in range(steps):
        nxt_a = prev_a.copy()
        nxt_a[:-1] += c * cur_a[1:]
        nxt_a[1:] -= c * cur_a[:-1]
        nxt_b = prev_b.copy()
        nxt_b[:-1] += c * cur_b[1:]
        nxt_b[1:] -= c * cur_b[:-1]
        prev_a, cur_a = cur_a, nxt_a
        prev_b, cur_b = cur_b, nxt_b
    return cur_a, cur_b


# -- numba -----------------------------------------------------------------


@njit(cache=True, nogil=True)
def _walk_1d_loop(down, up, c, s, steps):
    n = down.shape[0]
    a = down.copy()
    b = up.copy()
    ca = np.empty_like(a)
    cb = np.empty_like(b)
    for _ in range(steps):
        for i in range(n):
            ca[i] = c * a[i] + s * b[i]
            cb[i] = s * a[i] - c * b[i]
        for i in range(n - 1):
            a[i] = ca[i + 1]
        a[n - 1] = 0.0
        for i in range(n - 1, 0, -1):
            b[i] = cb[i - 1]
        b[0] = 0.0
    return a, b


@njit(cache=True, nogil=True)
def _recurse_coupled_loop(down, up, c, s, steps):
    n = down.shape[0]
    a = down.copy()
    b = up.copy()
    lo = n
    hi = -1
    for i in range(n):
        if a[i] != 0 or b[i] != 0:
            if i < lo:
                lo = i
            hi = i
    if hi < lo:
        return a, b
    na = np.zeros_like(a)
    nb = np.zeros_like(b)
    for _ in range(steps):
        new_lo = max(lo - 1, 0)
        new_hi = min(hi + 1, n - 1)
        for j in range(new_lo, new_hi + 1):
            if lo <= j + 1 <= hi:
                na[j] = c * a[j + 1] + s * b[j + 1]
            else:
                na[j] = 0.0
            if lo <= j - 1 <= hi:
                nb[j] = s * a[j - 1] - c * b[j - 1]
            else:
                nb[j] = 0.0
        for j in range(new_lo, new_hi + 1):
            a[j] = na[j]
            b[j] = nb[j]
        lo, hi = new_lo, new_hi
    return a, b


@njit(cache=True, nogil=True)
def _recurse_decoupled_loop(a0, a1, b0, b1, c, steps):
    n = a0.shape[0]
    prev_a = a0.copy()
    cur_a = a1.copy()
    prev_b = b0.copy()
    cur_b = b1.copy()
    nxt_a = np.empty_like(cur_a)
    nxt_b = np.empty_like(cur_b)
    for _ in range(steps):
        for j in range(n):
            ra = prev_a[j]
            rb = prev_b[j]
            if j + 1 < n:
                ra += c * cur_a[j + 1]
                rb += c * cur_b[j + 1]
            if j >= 1:
                ra -= c * cur_a[j - 1]
                rb -= c * cur_b[j - 1]
            nxt_a[j] = ra
            nxt_b[j] = rb
        prev_a, cur_a, nxt_a = cur_a, nxt_a, prev_a
        prev_b, cur_b, nxt_b = cur_b, nxt_b, prev_b
    return cur_a.copy(), cur_b.copy()


def walk_1d_numba(down, up, c, s, steps):
    return _walk_1d_loop(down, up, float(c), float(s), int(steps))


def recurse_coupled_numba(down, up, c, s, steps):
    return _recurse_coupled_loop(down, up, float(c), float(s), int(steps))


def recurse_decoupled_numba(a0, a1, b0, b1, c, steps):
    return _recurse_decoupled_loop(a0, a1, b0, b1, float(c), int(steps))


if HAS_NUMBA:
    walk_1d = walk_1d_numba
    recurse_coupled = recurse_coupled_numba
    recurse_decoupled = recurse_decoupled_numba
else:
    walk_1d = walk_1d_numpy
    recurse_coupled = recurse_coupled_numpy
    recurse_decoupled = recurse_decoupled_numpy
    walk_1d_numba = recurse_coupled_numba = recurse_decoupled_numba = None
