"""Two walkers on a square lattice moving towards each other.

The forward walker sends spin-down one site along +x and spin-up along +y;
the backward walker mirrors this with -x and -y.  Started at ``(0, 0)`` and
``(j, j)`` they live on the anti-diagonals ``x + y = t`` and
``x + y = 2j - t`` and meet for the first time at ``t = j``.

The walkers never interact during evolution, so each is stored as its own
field.  Exchange statistics only enter when the joint distribution is
formed from the single-walker amplitudes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Tuple

import numpy as np

from .core import coin_matrix

__all__ = [
    "FORWARD",
    "BACKWARD",
    "STATISTICS",
    "Walker2D",
    "WalkerPair",
    "JointDistribution2D",
    "UndefinedStatisticsError",
    "DisjointSupportError",
    "init_pair",
    "step_walker",
    "step_pair",
    "evolve_pair",
    "evolve_with_flip",
    "flip_walker",
    "joint_distribution",
    "walker_distribution",
    "diagonal_marginal",
]

FORWARD = "forward"
BACKWARD = "backward"
STATISTICS = ("distinguishable", "boson", "fermion")

_STAT_ALIASES = {"dist": "distinguishable", "bosons": "boson", "fermions": "fermion"}


class UndefinedStatisticsError(ValueError):
    """The boson/fermion normalizer vanishes, so the joint probabilities are undefined."""


class DisjointSupportError(UndefinedStatisticsError):
    """The walkers share no site, so indistinguishable statistics do not apply."""


def normalize_statistics(name: str) -> str:
    key = name.strip().lower()
    key = _STAT_ALIASES.get(key, key)
    if key not in STATISTICS:
        raise ValueError(f"unknown statistics {name!r}; choose from {', '.join(STATISTICS)}")
    return key


@dataclass(frozen=True, eq=False)
class Walker2D:
    """Amplitudes on the box ``origin + [0, nx) x [0, ny)``."""

    down: np.ndarray
    up: np.ndarray
    origin: Tuple[int, int]
    orientation: str = FORWARD
    steps: int = 0

    def __post_init__(self):
        if self.orientation not in (FORWARD, BACKWARD):
            raise ValueError(f"orientation must be {FORWARD!r} or {BACKWARD!r}")
        down = np.asarray(self.down, dtype=np.complex128)
        up = np.asarray(self.up, dtype=np.complex128)
        if down.ndim != 2 or down.shape != up.shape:
            raise ValueError("down and up must be 2D arrays of equal shape")
        object.__setattr__(self, "down", down)
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "origin", (int(self.origin[0]), int(self.origin[1])))

    @classmethod
    def at(cls, x: int, y: int, amplitudes=(1.0, 0.0), orientation: str = FORWARD) -> "Walker2D":
        a, b = amplitudes
        return cls(np.array([[a]]), np.array([[b]]), (x, y), orientation, 0)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.down) ** 2) + np.sum(np.abs(self.up) ** 2))

    def __getitem__(self, site: Tuple[int, int]) -> Tuple[complex, complex]:
        i, k = site[0] - self.origin[0], site[1] - self.origin[1]
        if 0 <= i < self.down.shape[0] and 0 <= k < self.down.shape[1]:
            return complex(self.down[i, k]), complex(self.up[i, k])
        return 0j, 0j

    def probability(self) -> np.ndarray:
        return np.abs(self.down) ** 2 + np.abs(self.up) ** 2

    def support(self) -> frozenset:
        """Set of sites carrying a nonzero amplitude."""
        nz = np.argwhere((self.down != 0) | (self.up != 0))
        ox, oy = self.origin
        return frozenset((int(i) + ox, int(k) + oy) for i, k in nz)

    def items(self) -> Iterator[Tuple[Tuple[int, int], Tuple[complex, complex]]]:
        ox, oy = self.origin
        for i, k in np.argwhere((self.down != 0) | (self.up != 0)):
            yield (int(i) + ox, int(k) + oy), (complex(self.down[i, k]), complex(self.up[i, k]))


class WalkerPair(NamedTuple):
    a: Walker2D
    b: Walker2D


def init_pair(lattice_size: int, flip_protocol: bool = False) -> WalkerPair:
    """Spin-down walkers at ``(0, 0)`` (forward) and ``(j, j)`` (backward)."""
    j = int(lattice_size)
    if j < 1:
        raise ValueError(f"lattice size must be positive, got {j}")
    if flip_protocol and (j < 2 or j % 2):
        raise ValueError(f"the bit-flip protocol needs an even lattice size >= 2, got {j}")
    return WalkerPair(Walker2D.at(0, 0, orientation=FORWARD), Walker2D.at(j, j, orientation=BACKWARD))


def step_walker(walker: Walker2D, theta: float) -> Walker2D:
    """Coin at every site, then the orientation's shift.  The box grows by one."""
    coin = coin_matrix(theta).real
    c, s = coin[0, 0], coin[0, 1]
    cd = c * walker.down + s * walker.up
    cu = s * walker.down - c * walker.up
    nx, ny = walker.down.shape
    down = np.zeros((nx + 1, ny + 1), dtype=np.complex128)
    up = np.zeros_like(down)
    ox, oy = walker.origin
    if walker.orientation == FORWARD:
        down[1:, :-1] = cd
        up[:-1, 1:] = cu
    else:
        ox, oy = ox - 1, oy - 1
        down[:-1, 1:] = cd
        up[1:, :-1] = cu
    return Walker2D(down, up, (ox, oy), walker.orientation, walker.steps + 1)


def flip_walker(walker: Walker2D) -> Walker2D:
    """Bit flip: exchange the spin-down and spin-up amplitudes everywhere."""
    return Walker2D(walker.up.copy(), walker.down.copy(), walker.origin, walker.orientation, walker.steps)


def step_pair(pair: WalkerPair, theta: float) -> WalkerPair:
    return WalkerPair(step_walker(pair.a, theta), step_walker(pair.b, theta))


def evolve_pair(pair: WalkerPair, theta: float, t: int) -> WalkerPair:
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    for _ in range(t):
        pair = step_pair(pair, theta)
    return pair


def evolve_with_flip(pair: WalkerPair, theta: float, lattice_size: int) -> WalkerPair:
    """Evolve ``j/2`` steps, bit-flip both walkers, evolve ``j/2`` more."""
    j = int(lattice_size)
    if j % 2 or j < 2:
        raise ValueError(f"the bit-flip protocol needs an even lattice size >= 2, got {j}")
    half = j // 2
    pair = evolve_pair(pair, theta, half)
    pair = WalkerPair(flip_walker(pair.a), flip_walker(pair.b))
    return evolve_pair(pair, theta, half)


def _common_box(pair: WalkerPair) -> Tuple[int, int, int, int]:
    xs, ys = [], []
    for w in pair:
        ox, oy = w.origin
        nx, ny = w.down.shape
        xs += [ox, ox + nx]
        ys += [oy, oy + ny]
    return min(xs), min(ys), max(xs), max(ys)


def _embed(w: Walker2D, box) -> Tuple[np.ndarray, np.ndarray]:
    x0, y0, x1, y1 = box
    down = np.zeros((x1 - x0, y1 - y0), dtype=np.complex128)
    up = np.zeros_like(down)
    i, k = w.origin[0] - x0, w.origin[1] - y0
    nx, ny = w.down.shape
    down[i:i + nx, k:k + ny] = w.down
    up[i:i + nx, k:k + ny] = w.up
    return down, up


@dataclass(frozen=True, eq=False)
class JointDistribution2D:
    """Per-site channel probabilities on the box ``origin + [0, nx) x [0, ny)``.

    For boson and fermion statistics ``p_dd``, ``p_uu`` and ``p_du`` are the
    probabilities of finding both particles at the site in the spin states
    down-down, up-up and down-up.  For distinguishable particles there is no
    joint spin channel; ``p_dd`` carries the summed spin-down weight of both
    walkers, ``p_uu`` the summed spin-up weight and ``p_du`` is zero, so the
    per-site total is ``P_a + P_b``.
    """

    statistics: str
    origin: Tuple[int, int]
    p_dd: np.ndarray
    p_uu: np.ndarray
    p_du: np.ndarray
    lattice_size: int | None = None

    def total(self) -> np.ndarray:
        return self.p_dd + self.p_uu + self.p_du

    def __getitem__(self, site: Tuple[int, int]) -> Tuple[float, float, float]:
        i, k = site[0] - self.origin[0], site[1] - self.origin[1]
        if 0 <= i < self.p_dd.shape[0] and 0 <= k < self.p_dd.shape[1]:
            return float(self.p_dd[i, k]), float(self.p_uu[i, k]), float(self.p_du[i, k])
        return 0.0, 0.0, 0.0

    def rows(self, drop_zeros: bool = True) -> Iterator[Tuple[int, int, float, float, float]]:
        """``(x, y, p_dd, p_uu, p_du)`` in row-major ``(x, y)`` order."""
        ox, oy = self.origin
        nx, ny = self.p_dd.shape
        for i in range(nx):
            for k in range(ny):
                dd, uu, du = self.p_dd[i, k], self.p_uu[i, k], self.p_du[i, k]
                if drop_zeros and dd == 0 and uu == 0 and du == 0:
                    continue
                yield ox + i, oy + k, float(dd), float(uu), float(du)

    def site_total(self, x: int, y: int) -> float:
        return sum(self[x, y])

    def block_total(self, cx: int, cy: int, half_width: int = 1) -> float:
        return sum(
            self.site_total(x, y)
            for x in range(cx - half_width, cx + half_width + 1)
            for y in range(cy - half_width, cy + half_width + 1)
        )


def walker_distribution(walker: Walker2D) -> dict:
    """``{(x, y): probability}`` for the occupied sites of one walker."""
    return {site: abs(a) ** 2 + abs(b) ** 2 for site, (a, b) in walker.items()}


def diagonal_marginal(walker: Walker2D, start: Tuple[int, int]) -> dict:
    """Probability keyed by ``u = (x - y) - (x0 - y0)`` relative to ``start``."""
    x0, y0 = start
    out: dict = {}
    for (x, y), p in walker_distribution(walker).items():
        u = (x - y) - (x0 - y0)
        out[u] = out.get(u, 0.0) + p
    return out


def joint_distribution(pair: WalkerPair, statistics: str = "distinguishable",
                       lattice_size: int | None = None) -> JointDistribution2D:
    """Per-site joint probabilities of the two walkers.

    ``distinguishable``: ``P_a + P_b`` at every site, split by spin.
    ``boson``: ``|A^a|^2|A^b|^2``, ``|B^a|^2|B^b|^2`` and
    ``|A^a|^2|B^b|^2 + |A^b|^2|B^a|^2`` per site, all divided by the lattice
    sum of the three.  ``fermion``: only the last channel, divided by its
    own lattice sum.

    Raises
    ------
    DisjointSupportError
        Boson or fermion statistics requested while the walkers share no site.
    UndefinedStatisticsError
        The normalizing sum is zero (e.g. both walkers purely spin-down for
        fermions).
    """
    stats = normalize_statistics(statistics)
    a, b = pair
    if a.steps != b.steps:
        raise ValueError(f"walkers are at different times ({a.steps} vs {b.steps})")
    box = _common_box(pair)
    down_a, up_a = _embed(a, box)
    down_b, up_b = _embed(b, box)
    pda, pua = np.abs(down_a) ** 2, np.abs(up_a) ** 2
    pdb, pub = np.abs(down_b) ** 2, np.abs(up_b) ** 2
    origin = (box[0], box[1])

    if stats == "distinguishable":
        return JointDistribution2D(stats, origin, pda + pdb, pua + pub,
                                   np.zeros_like(pda), lattice_size)

    if not np.any((pda + pua > 0) & (pdb + pub > 0)):
        raise DisjointSupportError(
            f"walker supports are disjoint at t={a.steps}; "
            "indistinguishable statistics need the walkers to meet (t = j)"
        )
    dd = pda * pdb
    uu = pua * pub
    du = pda * pub + pdb * pua
    if stats == "boson":
        norm = float(np.sum(dd + uu + du))
        if norm == 0.0:
            raise UndefinedStatisticsError("boson normalizer is zero: no coincident weight")
        return JointDistribution2D(stats, origin, dd / norm, uu / norm, du / norm, lattice_size)

    norm = float(np.sum(du))
    if norm == 0.0:
        raise UndefinedStatisticsError(
            "fermion normalizer is zero: no opposite-spin coincident weight (Pauli exclusion)"
        )
    zeros = np.zeros_like(du)
    return JointDistribution2D(stats, origin, zeros, zeros.copy(), du / norm, lattice_size)
