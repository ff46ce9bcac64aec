"""Experiment execution: seeded runs, trace files, summaries, calibration."""

from __future__ import annotations

import json
import os
import shlex
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .benchmarks import get_benchmark
from .calibration import CalibrationSplit, ccr_report
from .core import run
from .domain import Box
from .exceptions import ConfigError, ExternalObjectiveError
from .presets import ExperimentConfig, build_calibration_pair, build_components
from .rng import INIT, substream
from .trace import RunTrace, write_trace_csv

THREADS_ENV = "PSEUDOBO_THREADS"


def max_workers() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1, got {value}")
    return value


class ExternalObjective:
    """Line-protocol subprocess objective.

    Each evaluation writes the point as space-separated decimals on the
    child's standard input and reads one decimal value per line back.
    """

    def __init__(self, cmd: str):
        self.cmd = cmd
        try:
            self._proc = subprocess.Popen(
                shlex.split(cmd),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
            )
        except OSError as exc:
            raise ExternalObjectiveError(f"could not start {cmd!r}: {exc}") from exc

    def __call__(self, x) -> float:
        line = " ".join(repr(float(v)) for v in np.asarray(x, dtype=float).ravel())
        try:
            self._proc.stdin.write(line + "\n")
            self._proc.stdin.flush()
            reply = self._proc.stdout.readline()
        except (BrokenPipeError, OSError) as exc:
            raise ExternalObjectiveError(
                f"objective process {self.cmd!r} is not responding: {exc}"
            ) from exc
        if not reply:
            raise ExternalObjectiveError(
                f"objective process {self.cmd!r} closed its output"
            )
        try:
            return float(reply.strip())
        except ValueError as exc:
            raise ExternalObjectiveError(
                f"objective process {self.cmd!r} replied {reply.strip()!r}, "
                "expected one decimal value per line"
            ) from exc

    def close(self) -> None:
        if self._proc.poll() is None:
            self._proc.stdin.close()
            self._proc.wait(timeout=10)


def _resolve_problem(cfg: ExperimentConfig):
    """Return (objective factory, box, f_star) for a validated config."""
    if cfg.benchmark is not None:
        bench = get_benchmark(cfg.benchmark)
        f_star = cfg.f_star if cfg.f_star is not None else bench.f_star
        return (lambda: (bench.fn, lambda: None)), bench.box, f_star
    box = Box([lo for lo, _ in cfg.bounds], [hi for _, hi in cfg.bounds])

    def factory():
        proc = ExternalObjective(cfg.objective_cmd)
        return proc, proc.close

    return factory, box, cfg.f_star


def run_single(cfg: ExperimentConfig, seed: int) -> RunTrace:
    """One seeded run of a configured experiment."""
    cfg.validate()
    factory, box, f_star = _resolve_problem(cfg)
    ew, proposer = build_components(
        cfg.method, cfg.params, box.dim, seed, batch=cfg.batch
    )
    objective, close = factory()
    try:
        return run(
            objective,
            box,
            ew,
            proposer,
            budget=cfg.budget,
            n_init=cfg.n_init,
            batch=cfg.batch,
            seed=seed,
            direction=cfg.direction,
            f_star=f_star,
        )
    finally:
        close()


def trace_path(out_dir: Path, seed: int) -> Path:
    return Path(out_dir) / f"trace_seed{seed}.csv"


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> dict:
    """Run all seeds, write one trace file per seed plus a JSON summary.

    Traces of completed seeds are preserved even when a later seed fails.
    """
    cfg.validate()
    out = Path(out_dir if out_dir is not None else (cfg.out or "."))
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    workers = min(max_workers(), len(cfg.seeds))

    def one(seed: int) -> RunTrace:
        trace = run_single(cfg, seed)
        write_trace_csv(trace, trace_path(out, seed), include_timing=cfg.record_timing)
        return trace

    traces: dict[int, RunTrace] = {}
    try:
        if workers == 1:
            for seed in cfg.seeds:
                traces[seed] = one(seed)
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = {seed: pool.submit(one, seed) for seed in cfg.seeds}
                for seed, fut in futures.items():
                    traces[seed] = fut.result()
    except Exception:
        _write_summary(cfg, out, traces, started, partial=True)
        raise
    return _write_summary(cfg, out, traces, started, partial=False)


def _write_summary(cfg, out: Path, traces, started, partial: bool) -> dict:
    per_seed = []
    for seed in cfg.seeds:
        if seed not in traces:
            continue
        t = traces[seed]
        row = {"seed": seed, "final_best": t.final_best}
        if t.final_simple_regret is not None:
            row["final_simple_regret"] = t.final_simple_regret
        per_seed.append(row)
    bests = np.array([row["final_best"] for row in per_seed]) if per_seed else np.array([])
    summary = {
        "config": cfg.to_dict(),
        "partial": partial,
        "per_seed": per_seed,
        "median_final_best": float(np.median(bests)) if bests.size else None,
        "iqr_final_best": (
            [float(q) for q in np.percentile(bests, [25.0, 75.0])] if bests.size else None
        ),
        "total_wall_s": time.perf_counter() - started,
    }
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return summary


def run_calibration(
    method: str,
    function: str,
    seeds=range(10),
    eps: float = 1e-6,
    sizes=(20, 10, 150),
) -> dict:
    """Coverage study of one surrogate/uncertainty pair on a 1D benchmark.

    Per seed: sample fresh train/validation/test splits, fit on train,
    calibrate on validation, report coverage and width on test.
    """
    if function not in ("f1", "f2", "f3"):
        raise ConfigError("calibration functions are f1, f2 and f3")
    bench = get_benchmark(function)
    rows = []
    for seed in seeds:
        raw = CalibrationSplit.sample(
            bench.fn, bench.box, sizes, rng=substream(seed, INIT)
        )
        split = CalibrationSplit(
            bench.box.normalize(raw.X_train), raw.y_train,
            bench.box.normalize(raw.X_val), raw.y_val,
            bench.box.normalize(raw.X_test), raw.y_test,
        )
        sp, uq = build_calibration_pair(method, seed)
        uq.fit(split.X_train, split.y_train)   # spread views own the shared fit
        sp.fit(split.X_train, split.y_train)
        result = ccr_report(sp, uq, split, eps)
        rows.append(
            {
                "method": method,
                "function": function,
                "seed": int(seed),
                "ccr": result.ccr,
                "width": result.mean_width,
                "lambda_val": result.lambda_val,
            }
        )
    ccrs = np.array([r["ccr"] for r in rows])
    widths = np.array([r["width"] for r in rows])
    lambdas = np.array([r["lambda_val"] for r in rows])
    return {
        "method": method,
        "function": function,
        "rows": rows,
        "aggregate": {
            "ccr_mean": float(ccrs.mean()),
            "ccr_std": float(ccrs.std()),
            "width_mean": float(widths.mean()),
            "width_std": float(widths.std()),
            "lambda_mean": float(lambdas.mean()),
            "lambda_std": float(lambdas.std()),
        },
    }
