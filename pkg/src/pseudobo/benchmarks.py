"""Synthetic minimization benchmarks with known boxes and optima.

The three 1D calibration objectives plus the classic multimodal suite.
Where the literature leaves the search domain open, the canonical
published boxes are used (Ackley on [-5, 10]^d).
"""

from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass

import numpy as np

from .domain import Box
from .exceptions import ConfigError, DomainError
from .rng import RANDOM_SEARCH, substream
from .trace import IterationRecord, RunTrace, regret_metrics


def _check_interval(x: float, lo: float, hi: float, name: str) -> float:
    x = float(x)
    if not lo <= x <= hi:
        raise DomainError(f"{name} is defined on [{lo}, {hi}], got {x}")
    return x


def _check_dim(x, dim: int, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != dim:
        raise ConfigError(f"{name} expects {dim} coordinates, got {x.shape[0]}")
    return x


def levy_1d(x) -> float:
    """(sin(pi w))^2 + (w-1)^2 (1 + sin(2 pi w)^2), w = 1 + (x-1)/4, on [-10, 10]."""
    x = _check_interval(np.asarray(x).ravel()[0], -10.0, 10.0, "levy_1d")
    w = 1.0 + (x - 1.0) / 4.0
    return math.sin(math.pi * w) ** 2 + (w - 1.0) ** 2 * (
        1.0 + math.sin(2.0 * math.pi * w) ** 2
    )


def shifted_ackley_1d(x) -> float:
    """-20 e^(-0.2|x|) - e^(cos 2 pi x) + 20 - e on [-10, 5]; minimum -2e at 0."""
    x = _check_interval(np.asarray(x).ravel()[0], -10.0, 5.0, "shifted_ackley_1d")
    return (
        -20.0 * math.exp(-0.2 * abs(x))
        - math.exp(math.cos(2.0 * math.pi * x))
        + 20.0
        - math.e
    )


def gramacy_lee(x) -> float:
    """sin(10 pi x)/(2x) + (x-1)^4 on [0.5, 2.5]."""
    x = _check_interval(np.asarray(x).ravel()[0], 0.5, 2.5, "gramacy_lee")
    return math.sin(10.0 * math.pi * x) / (2.0 * x) + (x - 1.0) ** 4


def goldstein_price(x) -> float:
    x1, x2 = _check_dim(x, 2, "goldstein_price")
    a = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1**2 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2**2
    )
    b = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1**2 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2**2
    )
    return a * b


def drop_wave(x) -> float:
    x = _check_dim(x, 2, "drop_wave")
    r2 = float(x @ x)
    return -(1.0 + math.cos(12.0 * math.sqrt(r2))) / (0.5 * r2 + 2.0)


_HARTMANN6_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_HARTMANN6_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
_HARTMANN6_P = 1e-4 * np.array(
    [
        [1312, 1696, 5569, 124, 8283, 5886],
        [2329, 4135, 8307, 3736, 1004, 9991],
        [2348, 1451, 3522, 2883, 3047, 6650],
        [4047, 8828, 8732, 5743, 1091, 381],
    ]
)
HARTMANN6_X_STAR = np.array(
    [0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573]
)


def hartmann6(x) -> float:
    x = _check_dim(x, 6, "hartmann6")
    inner = (_HARTMANN6_A * (x[None, :] - _HARTMANN6_P) ** 2).sum(axis=1)
    return -float(_HARTMANN6_ALPHA @ np.exp(-inner))


def ackley(x) -> float:
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] < 1:
        raise ConfigError("ackley expects at least one coordinate")
    d = x.shape[0]
    return (
        -20.0 * math.exp(-0.2 * math.sqrt(float(x @ x) / d))
        - math.exp(float(np.cos(2.0 * math.pi * x).sum()) / d)
        + 20.0
        + math.e
    )


# Global minimizer of gramacy_lee on [0.5, 2.5], located by a dense grid.
GRAMACY_LEE_X_STAR = 0.5485634443640486


@dataclass(frozen=True)
class Benchmark:
    """A named objective with its box and (when known) optimum."""

    name: str
    dim: int
    box: Box
    fn: object
    f_star: float | None = None
    x_star: np.ndarray | None = None

    def __call__(self, x) -> float:
        return self.fn(x)


def _make_registry() -> dict:
    entries = [
        Benchmark("f1", 1, Box([-10.0], [10.0]), levy_1d, 0.0, np.array([1.0])),
        Benchmark(
            "f2", 1, Box([-10.0], [5.0]), shifted_ackley_1d,
            -2.0 * math.e, np.array([0.0]),
        ),
        Benchmark(
            "f3", 1, Box([0.5], [2.5]), gramacy_lee,
            gramacy_lee(GRAMACY_LEE_X_STAR), np.array([GRAMACY_LEE_X_STAR]),
        ),
        Benchmark(
            "goldstein-price", 2, Box([-2.0, -2.0], [2.0, 2.0]),
            goldstein_price, 3.0, np.array([0.0, -1.0]),
        ),
        Benchmark(
            "drop-wave", 2, Box([-5.12, -5.12], [5.12, 5.12]),
            drop_wave, -1.0, np.array([0.0, 0.0]),
        ),
        Benchmark(
            "hartmann6", 6, Box(np.zeros(6), np.ones(6)), hartmann6,
            hartmann6(HARTMANN6_X_STAR), HARTMANN6_X_STAR,
        ),
    ]
    return {b.name: b for b in entries}


_REGISTRY = _make_registry()


def make_ackley(dim: int) -> Benchmark:
    if dim < 1:
        raise ConfigError("ackley needs dim >= 1")
    return Benchmark(
        f"ackley{dim}", dim,
        Box(np.full(dim, -5.0), np.full(dim, 10.0)),
        ackley, 0.0, np.zeros(dim),
    )


def benchmark_names() -> list[str]:
    return sorted(_REGISTRY) + ["ackley<d> (e.g. ackley10)"]


def get_benchmark(name: str) -> Benchmark:
    key = name.strip().lower()
    if key in _REGISTRY:
        return _REGISTRY[key]
    m = re.fullmatch(r"ackley(\d+)", key)
    if m:
        return make_ackley(int(m.group(1)))
    raise ConfigError(
        f"unknown benchmark {name!r}; available: {', '.join(benchmark_names())}"
    )


def random_search(
    objective,
    box: Box,
    budget: int,
    seed: int = 0,
    direction: str = "min",
    f_star: float | None = None,
) -> RunTrace:
    """Uniform i.i.d. baseline emitting the same trace format as the loop."""
    if budget < 1:
        raise ConfigError("budget must be >= 1")
    if direction not in ("min", "max"):
        raise ConfigError(f"direction must be 'min' or 'max', got {direction!r}")
    rng = substream(seed, RANDOM_SEARCH)
    sign = 1.0 if direction == "max" else -1.0
    best_oriented = -np.inf
    records = []
    start = time.perf_counter()
    for i in range(budget):
        point = box.denormalize(rng.random((1, box.dim)))[0]
        value = float(objective(point))
        if np.isfinite(value):
            best_oriented = max(best_oriented, sign * value)
        best = sign * best_oriented if np.isfinite(best_oriented) else np.nan
        records.append(
            IterationRecord(
                index=i,
                point=point,
                value=value,
                best_so_far=best,
                elapsed_s=time.perf_counter() - start,
            )
        )
    trace = RunTrace(dim=box.dim, direction=direction, records=records)
    if f_star is not None:
        trace = regret_metrics(trace, f_star, direction)
    return trace
