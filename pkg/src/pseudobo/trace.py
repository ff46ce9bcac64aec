"""Run traces: per-iteration records, regret annotation and CSV round-trip.

The CSV layout is ``iter,x_0..x_{d-1},f,best,simple_regret,cum_regret,
elapsed_s``.  Floats serialize with repr (shortest round-trip form).  The
elapsed column is left empty unless explicitly requested: wall time varies
between repeats and would break the byte-identical reproducibility that
seeded runs guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import ConfigError


def _eq(a, b) -> bool:
    if a is None or b is None:
        return a is b
    return (math.isnan(a) and math.isnan(b)) or a == b


@dataclass
class IterationRecord:
    """One objective evaluation in raw coordinates and raw units."""

    index: int
    point: np.ndarray
    value: float
    best_so_far: float
    simple_regret: float | None = None
    cumulative_regret: float | None = None
    elapsed_s: float | None = None

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IterationRecord):
            return NotImplemented
        return (
            self.index == other.index
            and np.array_equal(self.point, other.point)
            and _eq(self.value, other.value)
            and _eq(self.best_so_far, other.best_so_far)
            and _eq(self.simple_regret, other.simple_regret)
            and _eq(self.cumulative_regret, other.cumulative_regret)
            and _eq(self.elapsed_s, other.elapsed_s)
        )


@dataclass
class RunTrace:
    """Ordered evaluation log of one optimization run."""

    dim: int
    direction: str = "min"
    f_star: float | None = None
    records: list[IterationRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.records])

    @property
    def best_values(self) -> np.ndarray:
        return np.array([r.best_so_far for r in self.records])

    @property
    def points(self) -> np.ndarray:
        if not self.records:
            return np.empty((0, self.dim))
        return np.array([r.point for r in self.records])

    @property
    def final_best(self) -> float:
        if not self.records:
            raise ConfigError("trace is empty")
        return self.records[-1].best_so_far

    @property
    def final_simple_regret(self) -> float | None:
        return self.records[-1].simple_regret if self.records else None


def regret_metrics(trace: RunTrace, f_star: float, direction: str | None = None) -> RunTrace:
    """Annotate a trace with simple and cumulative regret against ``f_star``.

    Simple regret is the gap of the best value so far; cumulative regret
    sums per-query gaps (non-finite queries contribute nothing).
    """
    if not math.isfinite(f_star):
        raise ConfigError("f_star must be finite")
    direction = direction or trace.direction
    cum = 0.0
    records = []
    for rec in trace.records:
        if rec.finite:
            cum += abs(rec.value - f_star)
        simple = abs(rec.best_so_far - f_star) if math.isfinite(rec.best_so_far) else math.inf
        records.append(replace(rec, simple_regret=simple, cumulative_regret=cum))
    return RunTrace(dim=trace.dim, direction=direction, f_star=f_star, records=records)


def _fmt(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def trace_header(dim: int) -> str:
    coords = ",".join(f"x_{i}" for i in range(dim))
    return f"iter,{coords},f,best,simple_regret,cum_regret,elapsed_s"


def write_trace_csv(trace: RunTrace, path, include_timing: bool = False) -> None:
    lines = [trace_header(trace.dim)]
    for r in trace.records:
        coords = ",".join(repr(float(v)) for v in r.point)
        elapsed = _fmt(r.elapsed_s) if include_timing else ""
        lines.append(
            f"{r.index},{coords},{_fmt(r.value)},{_fmt(r.best_so_far)},"
            f"{_fmt(r.simple_regret)},{_fmt(r.cumulative_regret)},{elapsed}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trace_csv(path, direction: str = "min") -> RunTrace:
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    header = lines[0].split(",")
    if header[0] != "iter" or header[-1] != "elapsed_s":
        raise ConfigError(f"{path} does not look like a trace file")
    dim = len(header) - 6
    records = []
    for ln in lines[1:]:
        cells = ln.split(",")
        point = np.array([float(c) for c in cells[1 : 1 + dim]])
        opt = [float(c) if c else None for c in cells[1 + dim :]]
        records.append(
            IterationRecord(
                index=int(cells[0]),
                point=point,
                value=opt[0],
                best_so_far=opt[1],
                simple_regret=opt[2],
                cumulative_regret=opt[3],
                elapsed_s=opt[4],
            )
        )
    f_star = None
    if records and records[-1].simple_regret is not None:
        gap = records[-1].simple_regret
        best = records[-1].best_so_far
        f_star = best - gap if direction == "min" else best + gap
    return RunTrace(dim=dim, direction=direction, f_star=f_star, records=records)
