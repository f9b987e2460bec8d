"""Single-particle discrete-time walk on the infinite line.

The walker carries a two-level internal state: spin-down ``A`` moves one
site left per step, spin-up ``B`` one site right.  Each step applies the
real coin ``[[cos t, sin t], [sin t, -cos t]]`` at every site and then the
spin-conditioned shift.

Three evolution routes are provided and must agree to round-off:

- :func:`evolve` applies the step operator to the whole lattice,
- :func:`recursion_evolve` runs the coupled two-amplitude recursion over the
  light cone only,
- :func:`recursion_evolve_decoupled` runs the three-term recursion that
  carries ``A`` and ``B`` independently, seeded by two coupled steps.

States are dense arrays over a contiguous window of sites.  Nothing is ever
renormalized: any drift in the norm is a kernel bug and tests look for it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, Tuple

import numpy as np

from . import kernels

__all__ = [
    "CoinSpec",
    "SpinorField1D",
    "LineDistribution",
    "SpinResolvedDistribution",
    "coin_matrix",
    "initial_state",
    "step",
    "evolve",
    "recursion_evolve",
    "recursion_evolve_decoupled",
    "position_distribution",
    "spin_resolved_distribution",
    "total_spin_probabilities",
    "bit_flip",
    "max_deviation",
    "spin_trace",
    "SYMMETRIC",
    "DOWN",
    "UP",
]


_SNAP = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class CoinSpec:
    """Coin angle and the initial spin ``cos(d/2)|down> + e^{i e} sin(d/2)|up>``."""

    theta: float = np.pi / 4
    delta: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi / 2 + 1e-15:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta!r}")

    @property
    def spinor(self) -> Tuple[complex, complex]:
        a = np.cos(self.delta / 2)
        b = np.sin(self.delta / 2)
        phase = np.exp(1j * self.eta)
        # trig round-off at multiples of pi/2 would leave ~1e-17 residues
        a, b = (0.0 if abs(v) < _SNAP else v for v in (a, b))
        phase = complex(0.0 if abs(phase.real) < _SNAP else phase.real,
                        0.0 if abs(phase.imag) < _SNAP else phase.imag)
        return complex(a), complex(phase * b)


DOWN = CoinSpec(delta=0.0, eta=0.0)
UP = CoinSpec(delta=np.pi, eta=0.0)
SYMMETRIC = CoinSpec(delta=np.pi / 2, eta=np.pi / 2)


def coin_matrix(theta: float) -> np.ndarray:
    """Return the 2x2 coin ``[[cos t, sin t], [sin t, -cos t]]`` as complex128."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [s, -c]], dtype=np.complex128)


def _cs(theta: float) -> Tuple[float, float]:
    if not 0.0 <= theta <= np.pi / 2 + 1e-15:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta!r}")
    return float(np.cos(theta)), float(np.sin(theta))


@dataclass(frozen=True, eq=False)
class SpinorField1D:
    """Walker amplitudes on the window ``offset .. offset + len(down) - 1``.

    ``down[i]`` and ``up[i]`` are the spin-down and spin-up amplitudes at
    site ``offset + i``; ``steps`` counts the walk steps taken so far.
    """

    down: np.ndarray
    up: np.ndarray
    offset: int = 0
    steps: int = 0

    def __post_init__(self):
        down = np.asarray(self.down, dtype=np.complex128)
        up = np.asarray(self.up, dtype=np.complex128)
        if down.ndim != 1 or down.shape != up.shape:
            raise ValueError("down and up must be 1D arrays of equal length")
        object.__setattr__(self, "down", down)
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "offset", int(self.offset))
        object.__setattr__(self, "steps", int(self.steps))

    @classmethod
    def from_dict(cls, amplitudes: Dict[int, Tuple[complex, complex]], steps: int = 0):
        """Build a field from ``{site: (A, B)}``."""
        if not amplitudes:
            return cls(np.zeros(1), np.zeros(1), 0, steps)
        lo, hi = min(amplitudes), max(amplitudes)
        down = np.zeros(hi - lo + 1, dtype=np.complex128)
        up = np.zeros_like(down)
        for site, (a, b) in amplitudes.items():
            down[site - lo] = a
            up[site - lo] = b
        return cls(down, up, lo, steps)

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.down.shape[0])

    def __len__(self) -> int:
        return self.down.shape[0]

    def __getitem__(self, site: int) -> Tuple[complex, complex]:
        i = site - self.offset
        if 0 <= i < self.down.shape[0]:
            return complex(self.down[i]), complex(self.up[i])
        return 0j, 0j

    def items(self) -> Iterator[Tuple[int, Tuple[complex, complex]]]:
        """Yield ``(site, (A, B))`` for every site with a nonzero amplitude."""
        for i in np.flatnonzero((self.down != 0) | (self.up != 0)):
            yield int(self.offset + i), (complex(self.down[i]), complex(self.up[i]))

    def as_dict(self) -> Dict[int, Tuple[complex, complex]]:
        return dict(self.items())

    def norm(self) -> float:
        """Total probability; stays at 1 up to round-off."""
        return float(np.sum(np.abs(self.down) ** 2) + np.sum(np.abs(self.up) ** 2))

    def support(self) -> Tuple[int, int]:
        """``(first, last)`` occupied site; ``(0, -1)`` for an empty field."""
        nz = np.flatnonzero((self.down != 0) | (self.up != 0))
        if nz.size == 0:
            return 0, -1
        return self.offset + int(nz[0]), self.offset + int(nz[-1])

    def padded(self, left: int, right: int | None = None) -> "SpinorField1D":
        """Return a copy with ``left`` (and ``right``) zero sites added."""
        right = left if right is None else right
        return SpinorField1D(
            np.pad(self.down, (left, right)),
            np.pad(self.up, (left, right)),
            self.offset - left,
            self.steps,
        )

    def trimmed(self) -> "SpinorField1D":
        """Drop the all-zero margins of the window."""
        lo, hi = self.support()
        if hi < lo:
            return SpinorField1D(np.zeros(1), np.zeros(1), 0, self.steps)
        a, b = lo - self.offset, hi - self.offset + 1
        return SpinorField1D(self.down[a:b].copy(), self.up[a:b].copy(), lo, self.steps)

    def allclose(self, other: "SpinorField1D", atol: float = 1e-12) -> bool:
        return max_deviation(self, other) <= atol


def max_deviation(first: SpinorField1D, second: SpinorField1D) -> float:
    """Largest absolute amplitude difference over the union of both windows."""
    lo = min(first.offset, second.offset)
    hi = max(first.offset + len(first), second.offset + len(second))
    a = first.padded(first.offset - lo, hi - first.offset - len(first))
    b = second.padded(second.offset - lo, hi - second.offset - len(second))
    if a.down.size == 0:
        return 0.0
    return float(max(np.max(np.abs(a.down - b.down)), np.max(np.abs(a.up - b.up))))


def initial_state(site: int = 0, coin: CoinSpec = SYMMETRIC) -> SpinorField1D:
    """Walker localized at ``site`` with the spin set by ``coin.delta``/``coin.eta``."""
    a, b = coin.spinor
    return SpinorField1D(np.array([a]), np.array([b]), site, 0)


def step(state: SpinorField1D, theta: float) -> SpinorField1D:
    """One coin-then-shift step."""
    return evolve(state, theta, 1)


def evolve(state: SpinorField1D, theta: float, t: int) -> SpinorField1D:
    """Apply the step operator ``t`` times to the whole window."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t == 0:
        return state
    c, s = _cs(theta)
    grown = state.padded(t)
    down, up = kernels.walk_1d(grown.down, grown.up, c, s, t)
    return SpinorField1D(down, up, grown.offset, state.steps + t)


def recursion_evolve(initial: SpinorField1D, theta: float, t: int) -> SpinorField1D:
    """Evolve with the coupled recursion

    ``A[j, t] = cos A[j+1, t-1] + sin B[j+1, t-1]``,
    ``B[j, t] = -cos B[j-1, t-1] + sin A[j-1, t-1]``,

    updating only the sites inside the light cone of the initial support.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t == 0:
        return initial
    c, s = _cs(theta)
    grown = initial.padded(t)
    down, up = kernels.recurse_coupled(grown.down, grown.up, c, s, t)
    return SpinorField1D(down, up, grown.offset, initial.steps + t)


def recursion_evolve_decoupled(initial: SpinorField1D, theta: float, t: int) -> SpinorField1D:
    """Evolve with the three-term recursion that decouples ``A`` from ``B``.

    ``X[j, t] = cos (X[j+1, t-1] - X[j-1, t-1]) + X[j, t-2]`` for ``X`` in
    ``{A, B}``.  The two seed slices (the input and one coupled step) come
    from :func:`recursion_evolve`, so ``t`` must be at least 2.
    """
    if t < 2:
        raise ValueError(f"decoupled recursion needs two history slices: t >= 2, got {t}")
    c, s = _cs(theta)
    grown = initial.padded(t)
    a1, b1 = kernels.recurse_coupled(grown.down, grown.up, c, s, 1)
    down, up = kernels.recurse_decoupled(grown.down, a1, grown.up, b1, c, t - 1)
    return SpinorField1D(down, up, grown.offset, initial.steps + t)


def bit_flip(state: SpinorField1D) -> SpinorField1D:
    """Swap the spin-down and spin-up amplitudes at every site."""
    return SpinorField1D(state.up.copy(), state.down.copy(), state.offset, state.steps)


@dataclass(frozen=True, eq=False)
class LineDistribution:
    """Non-negative weights on the window ``offset .. offset + len(p) - 1``."""

    offset: int
    p: np.ndarray = field(repr=False)

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.p.shape[0])

    def __getitem__(self, site: int) -> float:
        i = site - self.offset
        if 0 <= i < self.p.shape[0]:
            return float(self.p[i])
        return 0.0

    def total(self) -> float:
        return float(np.sum(self.p))

    def as_dict(self, drop_zeros: bool = True) -> Dict[int, float]:
        return {
            int(j): float(v)
            for j, v in zip(self.sites, self.p)
            if not (drop_zeros and v == 0)
        }

    def mirrored(self, center: float = 0.0) -> "LineDistribution":
        """Reflect about ``center`` (an integer or half-integer)."""
        twice = int(round(2 * center))
        lo = twice - (self.offset + self.p.shape[0] - 1)
        return LineDistribution(lo, self.p[::-1].copy())

    def side_masses(self) -> Tuple[float, float]:
        """Mass at ``j < 0`` and at ``j > 0``; the origin counts for neither."""
        j = self.sites
        return float(np.sum(self.p[j < 0])), float(np.sum(self.p[j > 0]))


@dataclass(frozen=True, eq=False)
class SpinResolvedDistribution:
    offset: int
    p_down: np.ndarray = field(repr=False)
    p_up: np.ndarray = field(repr=False)

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.p_down.shape[0])

    def __getitem__(self, site: int) -> Tuple[float, float]:
        i = site - self.offset
        if 0 <= i < self.p_down.shape[0]:
            return float(self.p_down[i]), float(self.p_up[i])
        return 0.0, 0.0

    def marginal(self) -> LineDistribution:
        return LineDistribution(self.offset, self.p_down + self.p_up)

    def down(self) -> LineDistribution:
        return LineDistribution(self.offset, self.p_down.copy())

    def up(self) -> LineDistribution:
        return LineDistribution(self.offset, self.p_up.copy())

    def as_dict(self, drop_zeros: bool = True) -> Dict[int, Tuple[float, float]]:
        return {
            int(j): (float(d), float(u))
            for j, d, u in zip(self.sites, self.p_down, self.p_up)
            if not (drop_zeros and d == 0 and u == 0)
        }


def position_distribution(state: SpinorField1D) -> LineDistribution:
    """``P(j) = |A_j|^2 + |B_j|^2``."""
    return LineDistribution(state.offset, np.abs(state.down) ** 2 + np.abs(state.up) ** 2)


def spin_resolved_distribution(state: SpinorField1D) -> SpinResolvedDistribution:
    return SpinResolvedDistribution(state.offset, np.abs(state.down) ** 2, np.abs(state.up) ** 2)


def total_spin_probabilities(state: SpinorField1D) -> Tuple[float, float]:
    """Return ``(sum_j |A_j|^2, sum_j |B_j|^2)``."""
    return float(np.sum(np.abs(state.down) ** 2)), float(np.sum(np.abs(state.up) ** 2))


def spin_trace(state: SpinorField1D, theta: float, t: int) -> np.ndarray:
    """Total spin-down probability after each of the steps ``1 .. t``.

    Returns an array of shape ``(t, 2)`` holding ``(P_down, P_up)`` per step.
    """
    c, s = _cs(theta)
    out = np.empty((t, 2))
    grown = state.padded(t)
    down, up = grown.down, grown.up
    for k in range(t):
        down, up = kernels.walk_1d(down, up, c, s, 1)
        out[k, 0] = np.sum(np.abs(down) ** 2)
        out[k, 1] = np.sum(np.abs(up) ** 2)
    return out
