"""Deterministic CSV/JSON serialization of distributions and run records.

Floats are written with 17 significant digits, which round-trips every
double exactly; values below 1e-300 in magnitude are written as ``0``.
CSV uses ``,`` and ``\\n`` with no locale-dependent formatting.
"""
from __future__ import annotations

import contextlib
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO, Union

import numpy as np

from .core import LineDistribution, SpinResolvedDistribution
from .twoparticle import JointDistribution2D

__all__ = [
    "SCHEMA_VERSION",
    "OutputError",
    "RunRecord",
    "Table",
    "table_from_payload",
    "format_float",
    "write_table",
    "read_table",
    "distribution_1d_table",
    "distribution_2d_table",
    "write_distribution_1d",
    "read_distribution_1d",
    "write_distribution_2d",
    "read_distribution_2d",
    "write_run_record",
    "read_run_record",
]

SCHEMA_VERSION = "v1"
FLUSH_BELOW = 1e-300

Sink = Union[str, Path, TextIO]


class OutputError(OSError):
    """Writing or reading a result file failed."""


def format_float(value: float) -> str:
    value = float(value)
    if abs(value) < FLUSH_BELOW:
        return "0"
    return format(value, ".17g")


def _clean(value: float) -> float:
    value = float(value)
    return 0.0 if abs(value) < FLUSH_BELOW else value


@contextlib.contextmanager
def _open_sink(sink: Sink, mode: str = "w"):
    if isinstance(sink, str) and sink == "-":
        sink = sys.stdout if "w" in mode else sys.stdin
    if isinstance(sink, (str, Path)):
        path = Path(sink)
        try:
            if "w" in mode:
                path.parent.mkdir(parents=True, exist_ok=True)
            fh = open(path, mode, encoding="utf-8", newline="")
        except OSError as exc:
            raise OutputError(f"cannot open {path} ({mode!r}): {exc}") from exc
        try:
            yield fh
        except OSError as exc:
            raise OutputError(f"I/O failure on {path}: {exc}") from exc
        finally:
            fh.close()
    else:
        try:
            yield sink
        except OSError as exc:
            name = getattr(sink, "name", repr(sink))
            raise OutputError(f"I/O failure on {name}: {exc}") from exc


# -- tables ------------------------------------------------------------------


@dataclass
class Table:
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)

    def as_payload(self) -> Dict[str, Any]:
        return {
            "columns": list(self.columns),
            "rows": [[_clean(v) if isinstance(v, float) else v for v in r] for r in self.rows],
        }


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_float(value)


def write_table(table: Table, sink: Sink, fmt: str = "csv") -> None:
    if fmt == "csv":
        text = ",".join(table.columns) + "\n"
        text += "".join(",".join(_cell(v) for v in row) + "\n" for row in table.rows)
    elif fmt == "json":
        text = _dumps({"schema": SCHEMA_VERSION, **table.as_payload()})
    else:
        raise ValueError(f"unknown format {fmt!r}; use 'csv' or 'json'")
    with _open_sink(sink) as fh:
        fh.write(text)


def _parse_cell(text: str) -> Union[int, float]:
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_table(source: Sink, fmt: str = "csv") -> Table:
    with _open_sink(source, "r") as fh:
        text = fh.read()
    if fmt == "json":
        data = json.loads(text)
        return Table(list(data["columns"]), [list(r) for r in data["rows"]])
    lines = text.split("\n")
    if not lines or not lines[0]:
        raise ValueError("missing CSV header")
    columns = lines[0].split(",")
    rows = [[_parse_cell(c) for c in line.split(",")] for line in lines[1:] if line]
    return Table(columns, rows)


# -- distributions -----------------------------------------------------------


def distribution_1d_table(dist) -> Table:
    """Rows for a 1D distribution, ascending site, exact zeros omitted.

    Accepts a :class:`LineDistribution`, a :class:`SpinResolvedDistribution`
    or a plain ``{site: p}`` / ``{site: (p_down, p_up)}`` mapping.
    """
    if isinstance(dist, SpinResolvedDistribution):
        dist = dist.as_dict()
    elif isinstance(dist, LineDistribution):
        dist = dist.as_dict()
    items = sorted(dist.items())
    spin_resolved = bool(items) and isinstance(items[0][1], (tuple, list))
    if spin_resolved:
        table = Table(["j", "p_down", "p_up"])
        for j, (d, u) in items:
            d, u = _clean(d), _clean(u)
            if d or u:
                table.rows.append([int(j), d, u])
    else:
        table = Table(["j", "p"])
        for j, p in items:
            p = _clean(p)
            if p:
                table.rows.append([int(j), p])
    return table


def write_distribution_1d(dist, fmt: str = "csv", sink: Sink = "-") -> None:
    write_table(distribution_1d_table(dist), sink, fmt)


def read_distribution_1d(source: Sink, fmt: str = "csv") -> Dict[int, Any]:
    """Inverse of :func:`write_distribution_1d` as a ``{site: value}`` dict."""
    table = read_table(source, fmt)
    if table.columns == ["j", "p"]:
        return {int(r[0]): float(r[1]) for r in table.rows}
    if table.columns == ["j", "p_down", "p_up"]:
        return {int(r[0]): (float(r[1]), float(r[2])) for r in table.rows}
    raise ValueError(f"unexpected columns {table.columns}")


def distribution_2d_table(dist: JointDistribution2D) -> Table:
    table = Table(["x", "y", "p_dd", "p_uu", "p_du"])
    for x, y, dd, uu, du in dist.rows():
        dd, uu, du = _clean(dd), _clean(uu), _clean(du)
        if dd or uu or du:
            table.rows.append([x, y, dd, uu, du])
    return table


def write_distribution_2d(dist: JointDistribution2D, fmt: str = "csv", sink: Sink = "-") -> None:
    write_table(distribution_2d_table(dist), sink, fmt)


def read_distribution_2d(source: Sink, fmt: str = "csv") -> Dict[tuple, tuple]:
    """``{(x, y): (p_dd, p_uu, p_du)}`` from a file written by :func:`write_distribution_2d`."""
    table = read_table(source, fmt)
    if table.columns != ["x", "y", "p_dd", "p_uu", "p_du"]:
        raise ValueError(f"unexpected columns {table.columns}")
    return {(int(r[0]), int(r[1])): tuple(float(v) for v in r[2:]) for r in table.rows}


# -- run records -------------------------------------------------------------


def _dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


@dataclass
class RunRecord:
    """Everything needed to reproduce one run, plus its result payload.

    ``duration_s`` is ``None`` unless timing was requested, which keeps
    repeated runs byte-identical by default.
    """

    experiment: str
    params: Dict[str, Any]
    payload: Dict[str, Any]
    version: str
    duration_s: Optional[float] = None
    schema: str = SCHEMA_VERSION

    def to_json(self) -> str:
        return _dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        data = json.loads(text)
        if data.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema {data.get('schema')!r}")
        return cls(**data)


def write_run_record(record: RunRecord, sink: Sink) -> None:
    with _open_sink(sink) as fh:
        fh.write(record.to_json())


def read_run_record(source: Sink) -> RunRecord:
    with _open_sink(source, "r") as fh:
        return RunRecord.from_json(fh.read())


def table_from_payload(payload: Dict[str, Any]) -> Table:
    return Table(list(payload["columns"]), [list(r) for r in payload["rows"]])

