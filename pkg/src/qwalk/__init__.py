"""Discrete-time quantum walks: single walkers, distinguishable ensembles on
the line, and two-walker meetings on a square lattice."""

from ._backend import BACKEND
from .core import (
    DOWN,
    SYMMETRIC,
    UP,
    CoinSpec,
    LineDistribution,
    SpinorField1D,
    SpinResolvedDistribution,
    bit_flip,
    coin_matrix,
    evolve,
    initial_state,
    position_distribution,
    recursion_evolve,
    recursion_evolve_decoupled,
    step,
    total_spin_probabilities,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DOWN",
    "SYMMETRIC",
    "UP",
    "CoinSpec",
    "LineDistribution",
    "SpinorField1D",
    "SpinResolvedDistribution",
    "bit_flip",
    "coin_matrix",
    "evolve",
    "initial_state",
    "position_distribution",
    "recursion_evolve",
    "recursion_evolve_decoupled",
    "step",
    "total_spin_probabilities",
    "__version__",
]
