"""Ensembles of non-interacting, distinguishable walkers on the line.

Every particle starts alone on its own site and evolves independently with
a shared coin.  Collective quantities are per-site sums over particles,
always accumulated in particle order so results do not depend on how the
per-particle work was scheduled.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import core
from .core import LineDistribution, SpinorField1D, SpinResolvedDistribution

__all__ = [
    "ORDERINGS",
    "EnsembleSpec",
    "EnsembleState",
    "SortingQuality",
    "centered_block",
    "build_ensemble",
    "evolve_ensemble",
    "collective_distribution",
    "collective_spin_resolved_distribution",
    "sorting_quality",
    "find_peaks",
    "lateral_asymmetry",
    "total_variation",
    "mirror_deviation",
    "normalize_ordering",
]

ORDERINGS = ("symmetric", "all_down", "all_up", "antiferromagnetic", "random")

_ALIASES = {
    "sym": "symmetric",
    "down": "all_down",
    "up": "all_up",
    "antiferro": "antiferromagnetic",
    "afm": "antiferromagnetic",
}

_SQRT_HALF = np.sqrt(0.5)
_SPINORS = {
    "down": (1.0 + 0j, 0j),
    "up": (0j, 1.0 + 0j),
    "symmetric": (_SQRT_HALF + 0j, 1j * _SQRT_HALF),
}


def normalize_ordering(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    key = _ALIASES.get(key, key)
    if key not in ORDERINGS:
        raise ValueError(f"unknown ordering {name!r}; choose from {', '.join(ORDERINGS)}")
    return key


def centered_block(m: int) -> List[int]:
    """Sites ``-(M-1)/2 .. (M-1)/2`` for odd M, ``-M/2 .. M/2 - 1`` for even M."""
    if m < 1:
        raise ValueError(f"particle count must be >= 1, got {m}")
    lo = -(m // 2)
    return list(range(lo, lo + m))


@dataclass(frozen=True)
class EnsembleSpec:
    particle_count: int
    ordering: str = "symmetric"
    theta: float = np.pi / 4
    start_sites: Optional[Tuple[int, ...]] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.particle_count < 1:
            raise ValueError(f"particle count must be >= 1, got {self.particle_count}")
        object.__setattr__(self, "ordering", normalize_ordering(self.ordering))
        if self.start_sites is None:
            sites = tuple(centered_block(self.particle_count))
        else:
            sites = tuple(int(s) for s in self.start_sites)
        if len(sites) != self.particle_count:
            raise ValueError(
                f"{len(sites)} start sites given for {self.particle_count} particles"
            )
        if len(set(sites)) != len(sites):
            raise ValueError("start sites must be pairwise distinct")
        object.__setattr__(self, "start_sites", sites)
        if self.ordering == "random" and self.seed is None:
            raise ValueError("random ordering needs an explicit seed")

    def spins(self) -> List[str]:
        """Initial spin label (``down``/``up``/``symmetric``) per particle, in site order."""
        m = self.particle_count
        if self.ordering == "symmetric":
            labels = ["symmetric"] * m
        elif self.ordering == "all_down":
            labels = ["down"] * m
        elif self.ordering == "all_up":
            labels = ["up"] * m
        elif self.ordering == "antiferromagnetic":
            rank = np.argsort(self.start_sites, kind="stable")
            labels = [""] * m
            for r, k in enumerate(rank):
                labels[k] = "down" if r % 2 == 0 else "up"
        else:
            draws = np.random.default_rng(self.seed).integers(0, 2, size=m)
            labels = ["down" if d == 0 else "up" for d in draws]
        return labels

    @property
    def mirror_center(self) -> float:
        """Midpoint of the start sites."""
        return (min(self.start_sites) + max(self.start_sites)) / 2


@dataclass(frozen=True, eq=False)
class EnsembleState:
    particles: Tuple[SpinorField1D, ...]
    theta: float
    steps: int = 0
    spec: Optional[EnsembleSpec] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.particles)


@dataclass(frozen=True)
class SortingQuality:
    """Fractions of each spin's total mass found on each side of the origin."""

    left_down_fraction: float
    right_up_fraction: float
    right_down_fraction: float
    left_up_fraction: float


def build_ensemble(spec: EnsembleSpec) -> EnsembleState:
    particles = []
    for site, label in zip(spec.start_sites, spec.spins()):
        a, b = _SPINORS[label]
        particles.append(SpinorField1D(np.array([a]), np.array([b]), site, 0))
    return EnsembleState(tuple(particles), spec.theta, 0, spec)


def evolve_ensemble(state: EnsembleState, t: int, workers: int = 1) -> EnsembleState:
    """Evolve every particle ``t`` steps; particle order is preserved."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t == 0:
        return state

    def run(p):
        return core.evolve(p, state.theta, t)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            evolved = tuple(pool.map(run, state.particles))
    else:
        evolved = tuple(run(p) for p in state.particles)
    return EnsembleState(evolved, state.theta, state.steps + t, state.spec)


def _window(state: EnsembleState) -> Tuple[int, int]:
    lo = min(p.offset for p in state.particles)
    hi = max(p.offset + len(p) for p in state.particles)
    return lo, hi


def collective_spin_resolved_distribution(state: EnsembleState) -> SpinResolvedDistribution:
    """Per-site sums of ``|A|^2`` and ``|B|^2`` over all particles."""
    lo, hi = _window(state)
    p_down = np.zeros(hi - lo)
    p_up = np.zeros(hi - lo)
    for p in state.particles:
        i = p.offset - lo
        p_down[i:i + len(p)] += np.abs(p.down) ** 2
        p_up[i:i + len(p)] += np.abs(p.up) ** 2
    return SpinResolvedDistribution(lo, p_down, p_up)


def collective_distribution(state: EnsembleState, normalized: bool = False) -> LineDistribution:
    """Sum of the particles' position distributions; totals M unless ``normalized``."""
    lo, hi = _window(state)
    total = np.zeros(hi - lo)
    for p in state.particles:
        i = p.offset - lo
        total[i:i + len(p)] += np.abs(p.down) ** 2 + np.abs(p.up) ** 2
    if normalized:
        total /= len(state.particles)
    return LineDistribution(lo, total)


def sorting_quality(state: EnsembleState) -> SortingQuality:
    if state.steps < 1:
        raise ValueError("sorting quality is undefined before the first step")
    dist = collective_spin_resolved_distribution(state)
    left_down, right_down = dist.down().side_masses()
    left_up, right_up = dist.up().side_masses()
    down_total = float(np.sum(dist.p_down))
    up_total = float(np.sum(dist.p_up))

    def frac(part, whole):
        return part / whole if whole > 0 else 0.0

    return SortingQuality(
        left_down_fraction=frac(left_down, down_total),
        right_up_fraction=frac(right_up, up_total),
        right_down_fraction=frac(right_down, down_total),
        left_up_fraction=frac(left_up, up_total),
    )


def find_peaks(dist: LineDistribution) -> Tuple[Optional[int], Optional[int]]:
    """Location of the maximum on ``j < 0`` and on ``j > 0``.

    Ties go to the site farther from the origin.  A side with no weight
    yields ``None``.
    """
    sites = dist.sites
    left = sites < 0
    right = sites > 0
    # argmax keeps the first hit: scan each side from its far end inward
    return _first_max(sites[left], dist.p[left]), _first_max(sites[right][::-1], dist.p[right][::-1])


def _first_max(js: np.ndarray, ps: np.ndarray) -> Optional[int]:
    if js.size == 0 or not np.any(ps > 0):
        return None
    return int(js[int(np.argmax(ps))])


def lateral_asymmetry(dist: LineDistribution) -> float:
    """``(L - R) / (L + R)`` with L, R the masses left and right of the origin."""
    left, right = dist.side_masses()
    if left + right == 0:
        return 0.0
    return (left - right) / (left + right)


def total_variation(first: LineDistribution, second: LineDistribution) -> float:
    lo = min(first.offset, second.offset)
    hi = max(first.offset + first.p.size, second.offset + second.p.size)
    a = np.zeros(hi - lo)
    b = np.zeros(hi - lo)
    a[first.offset - lo:first.offset - lo + first.p.size] = first.p
    b[second.offset - lo:second.offset - lo + second.p.size] = second.p
    return 0.5 * float(np.sum(np.abs(a - b)))


def mirror_deviation(dist: LineDistribution, center: float = 0.0) -> float:
    """Largest ``|P(j) - P(2c - j)|`` over the window."""
    twice = int(round(2 * center))
    mirrored = np.array([dist[twice - int(j)] for j in dist.sites])
    return float(np.max(np.abs(dist.p - mirrored)))
