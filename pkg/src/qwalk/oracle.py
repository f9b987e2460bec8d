"""Brute-force reference: the full step matrix on a truncated line.

Slow on purpose.  The step matrix is assembled as ``shift @ kron(I, coin)``
on sites ``-L .. L`` and applied by dense matrix-vector products, so it
shares no code with the kernels it checks.

Basis ordering is site-major: index ``2 * (j + L) + spin`` with spin 0 for
down and 1 for up.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SpinorField1D, coin_matrix

__all__ = ["DenseState", "LightConeError", "build_step_matrix", "evolve_dense", "default_radius"]


class LightConeError(ValueError):
    """The truncation radius is too small for the requested evolution."""


@dataclass(frozen=True, eq=False)
class DenseState:
    vector: np.ndarray
    radius: int
    steps: int = 0

    @classmethod
    def from_field(cls, state: SpinorField1D, radius: int) -> "DenseState":
        vec = np.zeros(2 * (2 * radius + 1), dtype=np.complex128)
        for site, (a, b) in state.items():
            if abs(site) > radius:
                raise LightConeError(f"site {site} lies outside radius {radius}")
            vec[2 * (site + radius)] = a
            vec[2 * (site + radius) + 1] = b
        return cls(vec, radius, state.steps)

    def to_field(self) -> SpinorField1D:
        pairs = self.vector.reshape(-1, 2)
        return SpinorField1D(pairs[:, 0].copy(), pairs[:, 1].copy(), -self.radius, self.steps)

    def boundary_weight(self) -> float:
        """Probability on the two truncation sites ``-L`` and ``L``."""
        pairs = self.vector.reshape(-1, 2)
        return float(np.sum(np.abs(pairs[0]) ** 2) + np.sum(np.abs(pairs[-1]) ** 2))


def build_step_matrix(theta: float, radius: int) -> np.ndarray:
    """Dense one-step operator of dimension ``2 (2L + 1)``.

    Amplitude that would be shifted past ``-L`` or ``L`` is dropped, so only
    the columns of interior sites are exactly unitary.
    """
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    n_sites = 2 * radius + 1
    dim = 2 * n_sites
    coin = np.kron(np.eye(n_sites), coin_matrix(theta))
    shift = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(n_sites):
        if k - 1 >= 0:
            shift[2 * (k - 1), 2 * k] = 1.0
        if k + 1 < n_sites:
            shift[2 * (k + 1) + 1, 2 * k + 1] = 1.0
    return shift @ coin


def default_radius(initial: SpinorField1D, t: int) -> int:
    lo, hi = initial.support()
    reach = max(abs(lo), abs(hi)) if hi >= lo else 0
    return t + reach + 2


def evolve_dense(initial: SpinorField1D, theta: float, t: int, radius: int | None = None) -> DenseState:
    """``t`` dense matrix-vector products on the line truncated at ``radius``.

    Raises :class:`LightConeError` up front if the light cone would reach
    the truncation sites, and again afterwards if any weight did.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if radius is None:
        radius = default_radius(initial, t)
    lo, hi = initial.support()
    reach = max(abs(lo), abs(hi)) if hi >= lo else 0
    if radius <= t + reach:
        raise LightConeError(
            f"radius {radius} must exceed t + max|site| = {t + reach}"
        )
    state = DenseState.from_field(initial, radius)
    u = build_step_matrix(theta, radius)
    vec = state.vector
    for _ in range(t):
        vec = u @ vec
    out = DenseState(vec, radius, state.steps + t)
    if out.boundary_weight() != 0.0:
        raise LightConeError("evolution touched the truncation boundary")
    return out
