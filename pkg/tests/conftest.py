import numpy as np
import pytest

from qwalk import core, kernels

THETA_GRID = [np.pi / 12, np.pi / 6, np.pi / 4, np.pi / 3, 5 * np.pi / 12]
SPINS = {"down": core.DOWN, "up": core.UP, "sym": core.SYMMETRIC}


def _backends():
    out = [pytest.param("numpy", id="numpy")]
    if kernels.walk_1d_numba is not None:
        out.append(pytest.param("numba", id="numba"))
    return out


@pytest.fixture(params=_backends())
def backend(request, monkeypatch):
    """Route the public kernels through one backend for the duration of a test."""
    name = request.param
    for kernel in ("walk_1d", "recurse_coupled", "recurse_decoupled"):
        monkeypatch.setattr(kernels, kernel, getattr(kernels, f"{kernel}_{name}"))
    return name


@pytest.fixture(params=list(SPINS), ids=list(SPINS))
def spin(request):
    return SPINS[request.param]
