"""Acceptance suite: one test per release criterion, one PASS/FAIL line each.

Heavy optimization runs are shared between criteria through module-scoped
fixtures.  Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import time

import numpy as np
import pytest

from pseudobo import (
    EvaluationWorthiness,
    ExpectedImprovement,
    HybridUncertainty,
    MinDistanceUncertainty,
    ProbabilityOfImprovement,
    PureExploration,
    UpperConfidenceBound,
    expected_improvement,
    get_benchmark,
    preset,
    probability_of_improvement,
    random_search,
    run,
    upper_confidence_bound,
)
from pseudobo.acquisition import norm_cdf
from pseudobo.calibration import calibrate_lambda
from pseudobo.presets import build_components
from pseudobo.runner import run_calibration, run_experiment, trace_path

SEEDS = range(10)


def report(criterion: int, ok: bool, detail: str) -> None:
    print(f"\n[acceptance] criterion {criterion:>2} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def optimize(method: str, bench_name: str, budget: int, n_init: int, seed: int):
    bench = get_benchmark(bench_name)
    cfg = preset(method, bench.dim)
    ew, proposer = build_components(method, cfg.params, bench.dim, seed)
    return run(
        bench.fn, bench.box, ew, proposer,
        budget=budget, n_init=n_init, seed=seed, direction="min",
        f_star=bench.f_star,
    )


def seeded_runs(method: str, bench_name: str, budget: int, n_init: int):
    start = time.perf_counter()
    traces, per_run = [], []
    for seed in SEEDS:
        t0 = time.perf_counter()
        traces.append(optimize(method, bench_name, budget, n_init, seed))
        per_run.append(time.perf_counter() - t0)
    return {
        "traces": traces,
        "finals": np.array([t.final_best for t in traces]),
        "regrets": np.array([t.final_simple_regret for t in traces]),
        "per_run_s": np.array(per_run),
        "total_s": time.perf_counter() - start,
    }


@pytest.fixture(scope="module")
def hartmann6_krhyb():
    return seeded_runs("PseudoBO-KR-Hyb", "hartmann6", budget=500, n_init=10)


@pytest.fixture(scope="module")
def ackley10_krhyb():
    return seeded_runs("PseudoBO-KR-Hyb", "ackley10", budget=500, n_init=10)


@pytest.fixture(scope="module")
def ackley10_tr():
    return seeded_runs("PseudoBO-KR-Hyb-TR", "ackley10", budget=500, n_init=10)


def test_criterion_1_calibrated_coverage():
    start = time.perf_counter()
    kr = run_calibration("KR+Hybrid", "f3", SEEDS)["aggregate"]
    gp = run_calibration("GP", "f3", SEEDS)["aggregate"]
    elapsed = time.perf_counter() - start
    ok = (
        kr["ccr_mean"] >= 0.88
        and kr["width_mean"] <= 2.0
        and gp["ccr_mean"] >= 0.86
        and elapsed < 60.0
    )
    report(
        1, ok,
        f"KR+Hybrid f3 ccr {kr['ccr_mean']:.3f} (>=0.88) width {kr['width_mean']:.3f} "
        f"(<=2.0); GP ccr {gp['ccr_mean']:.3f} (>=0.86); {elapsed:.1f}s (<60s)",
    )


def test_criterion_2_bisection_matches_closed_form():
    class Table:
        def __init__(self, mapping):
            self.mapping = mapping

        def predict(self, X):
            return np.array([self.mapping[float(x[0])] for x in np.asarray(X)])

    start = time.perf_counter()
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(3, 40))
        xs = np.arange(n, dtype=float)
        preds = rng.normal(size=n)
        sigmas = rng.uniform(1e-3, 4.0, size=n)
        y = preds + rng.normal(size=n) * rng.uniform(0.05, 3.0)
        sp, uq = Table(dict(zip(xs, preds))), Table(dict(zip(xs, sigmas)))
        lam = calibrate_lambda(sp, uq, xs.reshape(-1, 1), y, eps=1e-6)
        oracle = float(np.max(np.abs(y - preds) / sigmas))
        worst = max(worst, abs(lam - oracle))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 5.0
    report(2, ok, f"max |bisection - closed form| {worst:.2e} (<=1e-6); {elapsed:.1f}s (<5s)")


def test_criterion_3_acquisition_properties():
    start = time.perf_counter()
    p, s, t = np.meshgrid(
        np.linspace(-6, 6, 100), np.linspace(0, 4, 100), np.linspace(0, 2, 100),
        indexing="ij", sparse=True,
    )
    nonneg = bool((expected_improvement(p, s, t) >= 0.0).all())

    rng = np.random.default_rng(1)
    pp = rng.uniform(-4, 4, 10_000)
    ss = rng.uniform(0.1, 3.0, 10_000)
    h = 1e-6
    fd = (expected_improvement(pp + h, ss) - expected_improvement(pp - h, ss)) / (2 * h)
    deriv_ok = bool(np.max(np.abs(fd - norm_cdf(pp / ss))) <= 1e-5)

    n = 10**6
    limits_ok = (
        abs(probability_of_improvement(-1 / n, 1 / n, tau=0.01)) <= 1e-3
        and abs(expected_improvement(-1 / n, 1 / n)) <= 1e-3
        and abs(UpperConfidenceBound(beta0=2.0)(-1 / n, 1 / n, n)) <= 1e-3
    )

    argmax_ok = True
    for _ in range(1000):
        m = int(rng.integers(2, 40))
        mu = rng.normal(size=m)
        sigma = np.abs(rng.normal(size=m))
        beta = float(np.abs(rng.normal()) + 0.05)
        tau = float(np.abs(rng.normal()))
        classic = mu + beta * sigma
        rewritten = upper_confidence_bound(mu - mu.max(), sigma, tau, beta)
        if not np.array_equal(
            np.argsort(classic, kind="stable"), np.argsort(rewritten, kind="stable")
        ):
            argmax_ok = False
            break
    elapsed = time.perf_counter() - start
    ok = nonneg and deriv_ok and limits_ok and argmax_ok and elapsed < 30.0
    report(
        3, ok,
        f"EI>=0 on 1e6 grid: {nonneg}; dEI/dp FD<=1e-5: {deriv_ok}; "
        f"limits<=1e-3 at n=1e6: {limits_ok}; UCB argmax exact x1000: {argmax_ok}; "
        f"{elapsed:.1f}s (<30s)",
    )


def test_criterion_4_gneb():
    start = time.perf_counter()
    rng = np.random.default_rng(2)
    zero_ok = positive_ok = True
    for case in range(100):
        d = int(rng.choice([1, 2, 6]))
        n = int(rng.integers(3, 25))
        X = rng.random((n, d))
        y = rng.normal(size=n)
        uq = HybridUncertainty(random_state=int(rng.integers(2**31))).fit(X, y)
        if not np.all(uq.predict(X) == 0.0):
            zero_ok = False
            break
        q = rng.random((64, d))
        dists = np.sqrt(((q[:, None] - X[None]) ** 2).sum(-1)).min(1)
        far = q[dists >= 0.1]
        if far.size and not np.all(uq.predict(far) > 0.0):
            positive_ok = False
            break
    elapsed = time.perf_counter() - start
    ok = zero_ok and positive_ok and elapsed < 30.0
    report(
        4, ok,
        f"sigma==0 exactly at stored points: {zero_ok}; sigma>0 at delta>=0.1: "
        f"{positive_ok} (100 datasets, d in {{1,2,6}}); {elapsed:.1f}s (<30s)",
    )


def test_criterion_5_rp_consistency_on_f3():
    start = time.perf_counter()
    bench = get_benchmark("f3")
    finals = np.array(
        [optimize("PseudoBO-RP", "f3", 200, 5, seed).final_best for seed in SEEDS]
    )
    hits = int(np.sum(finals <= bench.f_star + 1e-2))
    elapsed = time.perf_counter() - start
    ok = hits >= 9 and elapsed < 120.0
    report(
        5, ok,
        f"best within 1e-2 of {bench.f_star:.4f} in {hits}/10 seeds (>=9); "
        f"{elapsed:.1f}s (<2min)",
    )


def test_criterion_6_dominates_random_search(hartmann6_krhyb, ackley10_krhyb):
    start = time.perf_counter()
    details = []
    ok = True
    for name, runs in (("hartmann6", hartmann6_krhyb), ("ackley10", ackley10_krhyb)):
        bench = get_benchmark(name)
        rs = [
            random_search(bench.fn, bench.box, 500, seed=s, f_star=bench.f_star)
            for s in SEEDS
        ]
        rs_final = np.median([t.final_best for t in rs])
        rs_regret = np.median([t.final_simple_regret for t in rs])
        med_final = float(np.median(runs["finals"]))
        med_regret = float(np.median(runs["regrets"]))
        ok &= med_final < rs_final and med_regret <= 0.5 * rs_regret
        details.append(
            f"{name}: final {med_final:.3f} vs RS {rs_final:.3f}, "
            f"regret ratio {med_regret / rs_regret:.3f} (<=0.5)"
        )
    elapsed = (
        time.perf_counter() - start
        + hartmann6_krhyb["total_s"]
        + ackley10_krhyb["total_s"]
    )
    ok &= elapsed < 900.0
    report(6, ok, "; ".join(details) + f"; {elapsed:.0f}s (<15min)")


def test_criterion_7_hartmann6_absolute_target(hartmann6_krhyb):
    med = float(np.median(hartmann6_krhyb["finals"]))
    report(7, med <= -3.0, f"median final best {med:.4f} (<= -3.0, optimum -3.32237)")


def test_criterion_8_space_filling():
    ew = EvaluationWorthiness(None, MinDistanceUncertainty(), PureExploration())
    trace = run(
        lambda x: float(x.sum()),
        get_benchmark("ackley2").box,
        ew,
        budget=200,
        n_init=20,
        seed=0,
        direction="min",
    )
    bench = get_benchmark("ackley2")
    unit = bench.box.normalize(trace.points)
    g = np.linspace(0.0, 1.0, 50)
    grid = np.array(np.meshgrid(g, g)).reshape(2, -1).T

    def fill(points):
        d2 = ((grid[:, None, :] - points[None, :, :]) ** 2).sum(-1)
        return float(np.sqrt(d2.min(axis=1)).max())

    fill20, fill200 = fill(unit[:20]), fill(unit)
    ok = fill200 < 0.15 and fill200 < fill20
    report(
        8, ok,
        f"grid fill distance {fill200:.3f} at n=200 (<0.15; {fill20:.3f} at n=20)",
    )


def test_criterion_9_runtime_scaling(ackley10_krhyb):
    worst = float(ackley10_krhyb["per_run_s"].max())
    report(9, worst < 180.0, f"slowest 500-query 10D run {worst:.1f}s (<180s)")


def test_criterion_10_determinism(tmp_path):
    cfg = preset(
        "PseudoBO-KR-Hyb-TR", 2,
        benchmark="goldstein-price", budget=30, n_init=5, seeds=(0, 1),
    )
    run_experiment(cfg, tmp_path / "a")
    run_experiment(cfg, tmp_path / "b")
    same = all(
        trace_path(tmp_path / "a", s).read_bytes()
        == trace_path(tmp_path / "b", s).read_bytes()
        for s in cfg.seeds
    )
    report(10, same, "repeated experiment produced byte-identical trace files")


def test_criterion_11_trust_region_competitive(ackley10_krhyb, ackley10_tr):
    wins = int(np.sum(ackley10_tr["finals"] <= ackley10_krhyb["finals"]))
    med_tr = float(np.median(ackley10_tr["finals"]))
    med_plain = float(np.median(ackley10_krhyb["finals"]))
    report(
        11, wins >= 5,
        f"TR matched/beat plain in {wins}/10 pairings (>=5); "
        f"medians {med_tr:.3f} vs {med_plain:.3f}",
    )
