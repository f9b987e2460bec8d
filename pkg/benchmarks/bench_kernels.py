"""Compare the numba and pure-numpy kernels on representative workloads.

Usage::

    python benchmarks/bench_kernels.py [--repeat N] [--steps T]

Each row reports the best-of-N wall time per backend after one warm-up
call (which absorbs JIT compilation), plus the maximum absolute amplitude
difference between the two results.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from qwalk import kernels
from qwalk import ensemble as ens


def _best(fn, repeat):
    fn()
    best = np.inf
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def _lattice(t):
    # spin-down walker at the centre of a lattice wide enough for t steps
    n = 2 * t + 1
    down = np.zeros(n, dtype=np.complex128)
    up = np.zeros(n, dtype=np.complex128)
    down[t] = 1.0
    return down, up


def _workloads(t):
    c, s = np.cos(np.pi / 4), np.sin(np.pi / 4)
    down, up = _lattice(t)
    a1, b1 = kernels.recurse_coupled_numpy(down, up, c, s, 1)

    def make(name):
        numpy_fn = getattr(kernels, f"{name}_numpy")
        numba_fn = getattr(kernels, f"{name}_numba")
        if name == "recurse_decoupled":
            return (lambda: numpy_fn(down, a1, up, b1, c, t - 1),
                    lambda: numba_fn(down, a1, up, b1, c, t - 1))
        return lambda: numpy_fn(down, up, c, s, t), lambda: numba_fn(down, up, c, s, t)

    rows = [(f"{name} t={t}", *make(name)) for name in ("walk_1d", "recurse_coupled", "recurse_decoupled")]

    spec = ens.EnsembleSpec(51, "random", np.pi / 12, seed=7)

    def ensemble_with(walk):
        def run():
            saved = kernels.walk_1d
            kernels.walk_1d = walk
            try:
                state = ens.evolve_ensemble(ens.build_ensemble(spec), 200)
            finally:
                kernels.walk_1d = saved
            return ens.collective_distribution(state).p, np.zeros(1)
        return run

    rows.append(("ensemble M=51 t=200", ensemble_with(kernels.walk_1d_numpy),
                 ensemble_with(kernels.walk_1d_numba)))
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--steps", type=int, default=1000)
    args = parser.parse_args(argv)
    if not kernels.HAS_NUMBA:
        raise SystemExit("numba is unavailable (or QWALK_DISABLE_NUMBA is set); nothing to compare")

    print(f"{'workload':<28}{'numpy [ms]':>12}{'numba [ms]':>12}{'speed-up':>10}{'max |diff|':>12}")
    for label, numpy_fn, numba_fn in _workloads(args.steps):
        t_np, out_np = _best(numpy_fn, args.repeat)
        t_nb, out_nb = _best(numba_fn, args.repeat)
        diff = max(float(np.max(np.abs(x - y))) for x, y in zip(out_np, out_nb))
        print(f"{label:<28}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>9.1f}x{diff:>12.1e}")


if __name__ == "__main__":
    main()
