"""Command-line front end.

Subcommands::

    qwalk single        one walker on the line
    qwalk ensemble      M distinguishable walkers on the line
    qwalk two-particle  two walkers meeting on a square lattice
    qwalk oracle-check  kernel routes against the dense reference

Exit status: 0 success, 1 usage error, 2 numerical invariant failure,
3 I/O failure.
"""
from __future__ import annotations

import argparse
import math
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import numpy as np

from . import __version__, core, ensemble, oracle, twoparticle
from . import io as qio

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_IO = 3

NORM_TOL = 1e-10
ORACLE_TOL = 1e-12
ORACLE_MAX_STEPS = 12
THETA_GRID = ("pi/12", "pi/6", "pi/4", "pi/3", "5pi/12")

_INITIALS = {"down": core.DOWN, "up": core.UP, "sym": core.SYMMETRIC, "symmetric": core.SYMMETRIC}

_THETA_RE = re.compile(
    r"^\s*(?:(?P<num>\d+(?:\.\d*)?)\s*\*?\s*)?pi(?:\s*/\s*(?P<den>\d+(?:\.\d*)?))?\s*$"
)


class UsageError(Exception):
    pass


class NumericalError(Exception):
    pass


def parse_theta(text: str) -> float:
    """Parse ``pi/N``, ``Npi/M``, ``N*pi/M``, ``pi`` or a plain decimal (radians)."""
    m = _THETA_RE.match(text.lower())
    if m:
        num = float(m.group("num")) if m.group("num") else 1.0
        den = float(m.group("den")) if m.group("den") else 1.0
        if den == 0:
            raise UsageError(f"invalid theta {text!r}: zero denominator")
        value = num * math.pi / den
    else:
        try:
            value = float(text)
        except ValueError:
            raise UsageError(f"invalid theta {text!r}; use e.g. pi/4, 3pi/8 or 0.785") from None
    if not math.isfinite(value) or not 0.0 <= value <= math.pi / 2 + 1e-15:
        raise UsageError(f"theta {text!r} = {value!r} lies outside [0, pi/2]")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default="-", help="output path (default: stdout)")
    p.add_argument("--record", default=None, help="also write the full run record (JSON) here")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock duration in the run record")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qwalk", description="Discrete-time quantum walk experiments.")
    parser.add_argument("--version", action="version", version=f"qwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("single", help="single walker on the line")
    p.add_argument("--theta", default="pi/4")
    p.add_argument("--theta-grid", default=None,
                   help="comma-separated thetas; one output file per value in --output DIR")
    p.add_argument("--steps", "-t", type=_nonneg_int, default=100)
    p.add_argument("--initial", choices=sorted(_INITIALS), default="sym")
    p.add_argument("--delta", type=float, default=None, help="initial spin angle (overrides --initial)")
    p.add_argument("--eta", type=float, default=0.0, help="initial spin phase, used with --delta")
    p.add_argument("--site", type=int, default=0)
    p.add_argument("--method", choices=("operator", "recursion", "decoupled"), default="operator")
    p.add_argument("--spin-resolved", action="store_true")
    p.add_argument("--spin-trace", action="store_true",
                   help="emit total P_down, P_up after every step 1..T instead of the distribution")
    p.add_argument("--workers", type=int, default=1)
    _add_output(p)

    p = sub.add_parser("ensemble", help="M distinguishable walkers on the line")
    p.add_argument("--particles", "-M", type=int, default=51)
    p.add_argument("--ordering", default="sym",
                   help="sym | down | up | antiferro | random")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--theta", default="pi/4")
    p.add_argument("--steps", "-t", type=_nonneg_int, default=200)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--spin-resolved", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    _add_output(p)

    p = sub.add_parser("two-particle", help="two walkers on a square lattice")
    p.add_argument("--size", "-j", type=int, default=20)
    p.add_argument("--theta", default="pi/4")
    p.add_argument("--steps", "-t", type=_nonneg_int, default=None, help="default: the lattice size")
    p.add_argument("--stats", default="dist", help="dist | boson | fermion")
    p.add_argument("--flip", action="store_true", help="bit-flip both walkers at t = j/2")
    _add_output(p)

    p = sub.add_parser("oracle-check", help="compare kernel routes with the dense oracle")
    p.add_argument("--theta", default=None, help="single theta (default: the standard grid)")
    p.add_argument("--steps", "-t", type=_nonneg_int, default=ORACLE_MAX_STEPS)
    return parser


# -- helpers -------------------------------------------------------------------


def _config(args: argparse.Namespace) -> Dict[str, Any]:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("output", "record", "timing")}
    return cfg


def _emit(table: qio.Table, args, experiment: str, params: Dict[str, Any],
          summary: Dict[str, Any], started: float) -> None:
    payload = dict(table.as_payload())
    payload["summary"] = summary
    duration = round(time.perf_counter() - started, 6) if args.timing else None
    record = qio.RunRecord(experiment, params, payload, __version__, duration)
    if args.format == "json":
        qio.write_run_record(record, args.output)
    else:
        qio.write_table(table, args.output, "csv")
    if args.record:
        qio.write_run_record(record, args.record)


def _check_norm(value: float, expected: float, what: str) -> None:
    if abs(value - expected) > NORM_TOL * max(1.0, expected):
        raise NumericalError(f"{what}: total probability {value!r}, expected {expected!r}")


def _initial_coin(args) -> core.CoinSpec:
    if args.delta is not None:
        return core.CoinSpec(delta=args.delta, eta=args.eta)
    return _INITIALS[args.initial]


_METHODS = {
    "operator": core.evolve,
    "recursion": core.recursion_evolve,
    "decoupled": core.recursion_evolve_decoupled,
}


def _single_run(args, theta: float):
    coin = _initial_coin(args)
    start = core.initial_state(args.site, coin)
    summary: Dict[str, Any] = {}
    if args.spin_trace:
        trace = core.spin_trace(start, theta, args.steps)
        table = qio.Table(["t", "p_down", "p_up"],
                          [[k + 1, float(d), float(u)] for k, (d, u) in enumerate(trace)])
        for d, u in trace:
            _check_norm(d + u, 1.0, "spin trace")
        return table, summary
    if args.method == "decoupled" and args.steps < 2:
        raise UsageError("--method decoupled needs --steps >= 2")
    state = _METHODS[args.method](start, theta, args.steps)
    _check_norm(state.norm(), 1.0, "single walk")
    p_down, p_up = core.total_spin_probabilities(state)
    summary.update(p_down=p_down, p_up=p_up, norm=state.norm())
    if args.spin_resolved:
        table = qio.distribution_1d_table(core.spin_resolved_distribution(state))
    else:
        table = qio.distribution_1d_table(core.position_distribution(state))
    return table, summary


# -- subcommands -------------------------------------------------------------


def cmd_single(args) -> int:
    started = time.perf_counter()
    if args.theta_grid:
        labels = [s.strip() for s in args.theta_grid.split(",") if s.strip()]
        thetas = [parse_theta(s) for s in labels]
        if args.output == "-":
            raise UsageError("--theta-grid writes one file per theta; give --output DIR")
        outdir = Path(args.output)
        with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
            results = list(pool.map(lambda th: _single_run(args, th), thetas))
        ext = "json" if args.format == "json" else "csv"
        for k, (label, theta, (table, summary)) in enumerate(zip(labels, thetas, results)):
            params = _config(args)
            params.update(theta=label, theta_rad=theta, grid_index=k)
            sub = argparse.Namespace(**{**vars(args), "output": str(outdir / f"single_{k:02d}.{ext}"),
                                        "record": None})
            _emit(table, sub, "single", params, summary, started)
        return EXIT_OK
    theta = parse_theta(args.theta)
    table, summary = _single_run(args, theta)
    params = _config(args)
    params["theta_rad"] = theta
    if summary:
        print(f"P_down={qio.format_float(summary['p_down'])} "
              f"P_up={qio.format_float(summary['p_up'])}", file=sys.stderr)
    _emit(table, args, "single", params, summary, started)
    return EXIT_OK


def cmd_ensemble(args) -> int:
    started = time.perf_counter()
    if args.particles < 1:
        raise UsageError(f"--particles must be >= 1, got {args.particles}")
    theta = parse_theta(args.theta)
    try:
        ordering = ensemble.normalize_ordering(args.ordering)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if ordering == "random" and args.seed is None:
        raise UsageError("--ordering random requires --seed")
    spec = ensemble.EnsembleSpec(args.particles, ordering, theta, seed=args.seed)
    state = ensemble.evolve_ensemble(ensemble.build_ensemble(spec), args.steps, workers=args.workers)
    spin = ensemble.collective_spin_resolved_distribution(state)
    marginal = spin.marginal()
    _check_norm(marginal.total(), float(args.particles), "collective distribution")
    summary: Dict[str, Any] = {
        "total": marginal.total(),
        "spins": "".join("d" if s == "down" else "u" if s == "up" else "s" for s in spec.spins()),
        "lateral_asymmetry": ensemble.lateral_asymmetry(marginal),
    }
    if state.steps >= 1:
        q = ensemble.sorting_quality(state)
        summary.update(left_down_fraction=q.left_down_fraction, right_up_fraction=q.right_up_fraction)
        print(f"left_down_fraction={qio.format_float(q.left_down_fraction)} "
              f"right_up_fraction={qio.format_float(q.right_up_fraction)}", file=sys.stderr)
    if args.spin_resolved:
        if args.normalized:
            m = float(args.particles)
            spin = core.SpinResolvedDistribution(spin.offset, spin.p_down / m, spin.p_up / m)
        table = qio.distribution_1d_table(spin)
    else:
        table = qio.distribution_1d_table(ensemble.collective_distribution(state, args.normalized))
    params = _config(args)
    params.update(theta_rad=theta, ordering=ordering, start_sites=list(spec.start_sites))
    _emit(table, args, "ensemble", params, summary, started)
    return EXIT_OK


def cmd_two_particle(args) -> int:
    started = time.perf_counter()
    theta = parse_theta(args.theta)
    try:
        stats = twoparticle.normalize_statistics(args.stats)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    size = args.size
    steps = size if args.steps is None else args.steps
    try:
        pair = twoparticle.init_pair(size, flip_protocol=args.flip)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.flip:
        if steps != size:
            raise UsageError(f"--flip runs exactly t = j = {size} steps; got --steps {steps}")
        pair = twoparticle.evolve_with_flip(pair, theta, size)
    else:
        pair = twoparticle.evolve_pair(pair, theta, steps)
    for w in pair:
        _check_norm(w.norm(), 1.0, f"{w.orientation} walker")
    try:
        joint = twoparticle.joint_distribution(pair, stats, size)
    except twoparticle.DisjointSupportError as exc:
        raise UsageError(f"{exc} (requested t={steps}, j={size})") from None
    expected = 2.0 if stats == "distinguishable" else 1.0
    total = float(np.sum(joint.total()))
    _check_norm(total, expected, f"{stats} joint distribution")
    summary = {
        "total": total,
        "center": [size // 2, size // 2] if size % 2 == 0 else None,
        "center_block_total": joint.block_total(size // 2, size // 2) if size % 2 == 0 else None,
    }
    table = qio.distribution_2d_table(joint)
    params = _config(args)
    params.update(theta_rad=theta, stats=stats, steps=steps)
    _emit(table, args, "two-particle", params, summary, started)
    return EXIT_OK


def oracle_deviation(theta: float, steps: int) -> Dict[str, float]:
    """Largest pairwise amplitude deviation of the four evolution routes."""
    worst = {"operator~recursion": 0.0, "operator~decoupled": 0.0,
             "operator~dense": 0.0, "recursion~dense": 0.0, "decoupled~dense": 0.0}
    for coin in (core.DOWN, core.UP, core.SYMMETRIC):
        s = core.initial_state(0, coin)
        for t in range(steps + 1):
            op = core.evolve(s, theta, t)
            rec = core.recursion_evolve(s, theta, t)
            dense = oracle.evolve_dense(s, theta, t).to_field()
            pairs = {"operator~recursion": (op, rec), "operator~dense": (op, dense),
                     "recursion~dense": (rec, dense)}
            if t >= 2:
                dec = core.recursion_evolve_decoupled(s, theta, t)
                pairs["operator~decoupled"] = (op, dec)
                pairs["decoupled~dense"] = (dec, dense)
            for key, (x, y) in pairs.items():
                worst[key] = max(worst[key], core.max_deviation(x, y))
    return worst


def cmd_oracle_check(args) -> int:
    if args.steps > ORACLE_MAX_STEPS:
        raise UsageError(
            f"--steps {args.steps} exceeds {ORACLE_MAX_STEPS}: the dense oracle is O(L^2) per step "
            "and is only meant for short walks"
        )
    labels = [args.theta] if args.theta else list(THETA_GRID)
    overall = 0.0
    for label in labels:
        theta = parse_theta(label)
        dev = oracle_deviation(theta, args.steps)
        worst = max(dev.values())
        overall = max(overall, worst)
        detail = " ".join(f"{k}={v:.3e}" for k, v in dev.items())
        print(f"theta={label} steps<={args.steps} max_deviation={worst:.3e} [{detail}]")
    ok = overall < ORACLE_TOL
    print(f"max deviation {overall:.3e} ({'PASS' if ok else 'FAIL'} at tol {ORACLE_TOL:g})")
    return EXIT_OK if ok else EXIT_NUMERIC


_COMMANDS = {
    "single": cmd_single,
    "ensemble": cmd_ensemble,
    "two-particle": cmd_two_particle,
    "oracle-check": cmd_oracle_check,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code is None else int(exc.code)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qwalk {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, twoparticle.UndefinedStatisticsError) as exc:
        print(f"qwalk {args.command}: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except qio.OutputError as exc:
        print(f"qwalk {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
