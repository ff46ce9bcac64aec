"""Command line front end.

Subcommands: ``run`` (seeded optimization runs with trace/summary files),
``calibrate`` (coverage study on the 1D benchmarks), ``bench-list``.
Exit codes: 0 ok, 2 configuration error, 3 numerical error, 4 external
objective failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .benchmarks import _REGISTRY, get_benchmark
from .exceptions import ConfigError, ExternalObjectiveError, NumericalError
from .presets import CALIBRATION_METHODS, METHODS, ExperimentConfig, preset
from .runner import run_calibration, run_experiment


def parse_seeds(raw: str) -> tuple:
    """'0,1,4' -> (0, 1, 4); '3:7' -> (3, 4, 5, 6); '5' -> (5,)."""
    raw = raw.strip()
    if ":" in raw:
        lo, hi = raw.split(":", 1)
        return tuple(range(int(lo), int(hi)))
    return tuple(int(tok) for tok in raw.split(",") if tok)


def parse_bounds(raw: str) -> tuple:
    """'0:1,-5:5' -> ((0.0, 1.0), (-5.0, 5.0))."""
    out = []
    for pair in raw.split(","):
        lo, hi = pair.split(":", 1)
        out.append((float(lo), float(hi)))
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudobo",
        description="Modular black-box optimization with pluggable surrogates, "
        "uncertainty quantifiers and acquisition rules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a preset method on a benchmark or command")
    p_run.add_argument("--method", default=None, help=f"one of {', '.join(METHODS)}")
    p_run.add_argument("--benchmark", help="benchmark name (see bench-list)")
    p_run.add_argument(
        "--objective-cmd",
        help="external objective command; reads one point per line on stdin "
        "(space-separated decimals) and prints one value per line",
    )
    p_run.add_argument("--bounds", help="per-dimension lo:hi pairs, comma separated")
    p_run.add_argument("--budget", type=int, default=None)
    p_run.add_argument("--init", type=int, default=None, dest="n_init")
    p_run.add_argument("--batch", type=int, default=None)
    p_run.add_argument("--seeds", default=None, help="'0,1,2', '0:10' or a single seed")
    p_run.add_argument("--direction", choices=("min", "max"), default=None)
    p_run.add_argument("--f-star", type=float, default=None,
                       help="true optimum for regret columns (benchmarks supply theirs)")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--config", help="JSON experiment config; flags override it")
    p_run.add_argument("--wall-time", action="store_true",
                       help="record wall time in trace files "
                       "(breaks byte-identical reproducibility)")

    p_cal = sub.add_parser("calibrate", help="coverage study on a 1D benchmark")
    p_cal.add_argument("--method", default="KR+Hybrid",
                       help=f"one of {', '.join(CALIBRATION_METHODS)}")
    p_cal.add_argument("--function", default="f3", choices=("f1", "f2", "f3"))
    p_cal.add_argument("--seeds", default="0:10")
    p_cal.add_argument("--eps", type=float, default=1e-6)
    p_cal.add_argument("--out", help="write the JSON report here")

    sub.add_parser("bench-list", help="list bundled benchmarks")
    return parser


def _config_from_args(args) -> ExperimentConfig:
    overrides = {
        "method": args.method,
        "benchmark": args.benchmark,
        "objective_cmd": args.objective_cmd,
        "bounds": parse_bounds(args.bounds) if args.bounds else None,
        "budget": args.budget,
        "n_init": args.n_init,
        "batch": args.batch,
        "seeds": parse_seeds(args.seeds) if args.seeds else None,
        "direction": args.direction,
        "f_star": args.f_star,
        "record_timing": True if args.wall_time else None,
    }
    explicit = {k: v for k, v in overrides.items() if v is not None}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = ExperimentConfig.from_dict(json.load(fh))
        for key, value in explicit.items():
            setattr(cfg, key, value)
        if "method" in explicit:
            cfg.method = preset(cfg.method, _dim_of(cfg)).method
        return cfg
    defaults = {
        "method": METHODS[1],
        "budget": 100,
        "n_init": 10,
        "batch": 1,
        "seeds": (0,),
        "direction": "min",
        "record_timing": False,
    }
    merged = {**defaults, **explicit}
    method = merged.pop("method")
    cfg = ExperimentConfig(method=method, **merged)
    return preset(method, _dim_of(cfg), **merged)


def _dim_of(cfg: ExperimentConfig) -> int:
    if cfg.benchmark:
        return get_benchmark(cfg.benchmark).dim
    if cfg.bounds:
        return len(cfg.bounds)
    raise ConfigError("either --benchmark or --objective-cmd with --bounds is required")


def cmd_run(args) -> int:
    cfg = _config_from_args(args)
    out = args.out or cfg.out or "pseudobo-out"
    cfg.out = out
    summary = run_experiment(cfg, out)
    print(f"wrote {len(summary['per_seed'])} trace file(s) to {out}")
    print(f"median final best: {summary['median_final_best']!r} "
          f"(IQR {summary['iqr_final_best']!r})")
    print(f"total wall time: {summary['total_wall_s']:.2f}s")
    return 0


def cmd_calibrate(args) -> int:
    report = run_calibration(args.method, args.function, parse_seeds(args.seeds), args.eps)
    for row in report["rows"]:
        print(f"seed {row['seed']:>3}: ccr {row['ccr']:.3f}  "
              f"width {row['width']:.3f}  lambda {row['lambda_val']:.4f}")
    agg = report["aggregate"]
    print(f"{report['method']} on {report['function']}: "
          f"ccr {agg['ccr_mean']:.2f} (+-{agg['ccr_std']:.2f})  "
          f"width {agg['width_mean']:.2f} (+-{agg['width_std']:.2f})")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.out}")
    return 0


def cmd_bench_list(args) -> int:
    print(f"{'name':<16} {'dim':>3}  {'f*':>14}  box")
    for name in sorted(_REGISTRY):
        b = get_benchmark(name)
        fs = f"{b.f_star:.6g}" if b.f_star is not None else "-"
        print(f"{name:<16} {b.dim:>3}  {fs:>14}  "
              f"[{b.box.lower[0]:g}, {b.box.upper[0]:g}]^{b.dim}")
    print(f"{'ackley<d>':<16} {'d':>3}  {0.0:>14.6g}  [-5, 10]^d")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "calibrate":
            return cmd_calibrate(args)
        return cmd_bench_list(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except ExternalObjectiveError as exc:
        print(f"external objective error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
