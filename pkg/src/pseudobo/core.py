"""The sequential evaluation-worthiness maximization loop.

Each step scores a batch of unit-cube candidates by worthiness (acquisition
of standardized predicted improvement and uncertainty), evaluates the top
distinct ones, and appends them to the history.  The loop is a
single-threaded state machine; candidate scoring is a pure function of the
frozen history snapshot.
"""

from __future__ import annotations

import time

import numpy as np

from .candidates import SobolPerturbProposer
from .domain import Box, Dataset
from .exceptions import ConfigError
from .numerics import standardize_labels
from .rng import check_seed
from .trace import IterationRecord, RunTrace, regret_metrics
from .validation import as_matrix, check_positive_int


def identity(p):
    return p


class EvaluationWorthiness:
    """Composition g(zeta(prediction - incumbent), uncertainty).

    ``surrogate`` may be None for purely exploratory searches (the
    improvement argument is then pinned at zero).  ``zeta`` must be an
    increasing transform with zeta(0) <= 0; the default is the identity.
    """

    def __init__(self, surrogate, uncertainty, acquisition, zeta=None):
        if uncertainty is None:
            raise ConfigError("an uncertainty quantifier is required")
        if acquisition is None:
            raise ConfigError("an acquisition rule is required")
        zeta = identity if zeta is None else zeta
        if float(zeta(0.0)) > 0.0:
            raise ConfigError("zeta must satisfy zeta(0) <= 0")
        self.surrogate = surrogate
        self.uncertainty = uncertainty
        self.acquisition = acquisition
        self.zeta = zeta

    def score(self, X_query, X_obs, y_obs) -> np.ndarray:
        """Worthiness of query points given max-oriented observations.

        Fits the surrogate and quantifier on the snapshot, then scores in
        standardized label units so the acquisition tolerances are
        scale-free.
        """
        X_query = as_matrix(X_query, name="X_query")
        X_obs = as_matrix(X_obs, dim=X_query.shape[1], name="X_obs")
        y_obs = np.asarray(y_obs, dtype=float)
        if y_obs.size == 0:
            raise ConfigError("cannot score against an empty history")
        _, _, scale = standardize_labels(y_obs)
        self.uncertainty.fit(X_obs, y_obs)
        sigma = self.uncertainty.predict(X_query) / getattr(
            self.uncertainty, "label_scale_", 1.0
        )
        if self.surrogate is None:
            p = np.zeros(X_query.shape[0])
        else:
            self.surrogate.fit(X_obs, y_obs)
            p = (self.surrogate.predict(X_query) - y_obs.max()) / scale
        return np.asarray(
            self.acquisition(self.zeta(p), sigma, len(y_obs)), dtype=float
        )

    def score_dataset(self, X_query, data: Dataset, start: int = 0) -> np.ndarray:
        """Worthiness against a dataset's finite, direction-oriented window."""
        return self.score(X_query, *data.fitting_window(start))


def select_batch(candidates: np.ndarray, scores: np.ndarray, k: int) -> list[int]:
    """Indices of the top-k distinct candidates by score.

    Ties resolve to the lowest candidate index; exact duplicate points are
    dropped with the next-ranked candidate promoted (duplicates are reused
    only if fewer than k distinct points exist).
    """
    order = np.argsort(-np.asarray(scores), kind="stable")
    chosen: list[int] = []
    seen: set[bytes] = set()
    for idx in order:
        key = candidates[idx].tobytes()
        if key in seen:
            continue
        seen.add(key)
        chosen.append(int(idx))
        if len(chosen) == k:
            return chosen
    for idx in order:                    # degenerate: not enough distinct rows
        if len(chosen) == k:
            break
        if int(idx) not in chosen:
            chosen.append(int(idx))
    return chosen


def run(
    objective,
    box: Box,
    ew: EvaluationWorthiness,
    optimizer=None,
    *,
    budget: int,
    n_init: int,
    batch: int = 1,
    seed: int = 0,
    direction: str = "min",
    f_star: float | None = None,
    init_points=None,
) -> RunTrace:
    """Optimize a black-box objective over a box; returns the evaluation trace.

    Exactly ``budget`` evaluations are recorded, the first ``n_init`` on
    scrambled-Sobol points (or ``init_points``, raw coordinates).  The run
    replays byte-identically for a fixed seed.  Non-finite objective values
    are recorded in the trace but excluded from surrogate fitting.
    """
    check_positive_int(budget, "budget")
    check_positive_int(n_init, "n_init")
    check_positive_int(batch, "batch")
    check_seed(seed)
    if budget < n_init:
        raise ConfigError(f"budget ({budget}) must be at least n_init ({n_init})")
    proposer = optimizer or SobolPerturbProposer(box.dim, seed)
    data = Dataset(box.dim, direction)
    records: list[IterationRecord] = []
    sign = 1.0 if direction == "max" else -1.0
    best_oriented = -np.inf
    start_time = time.perf_counter()

    def evaluate(unit_points: np.ndarray) -> np.ndarray:
        nonlocal best_oriented
        oriented = np.empty(unit_points.shape[0])
        for row, unit in enumerate(unit_points):
            raw_point = box.denormalize(unit[None, :])[0]
            value = float(objective(raw_point))
            data.append(unit, value)
            oriented[row] = sign * value if np.isfinite(value) else -np.inf
            best_oriented = max(best_oriented, oriented[row])
            best = sign * best_oriented if np.isfinite(best_oriented) else np.nan
            records.append(
                IterationRecord(
                    index=len(records),
                    point=raw_point,
                    value=value,
                    best_so_far=best,
                    elapsed_s=time.perf_counter() - start_time,
                )
            )
        return oriented

    if init_points is not None:
        init_unit = box.normalize(init_points)
        if init_unit.shape[0] != n_init:
            raise ConfigError("init_points must contain exactly n_init points")
    else:
        init_unit = proposer.initial_points(n_init)
    evaluate(init_unit)
    epoch_start = 0

    while len(data) < budget:
        X_window, y_window = data.fitting_window(epoch_start)
        k = min(batch, budget - len(data))
        if y_window.size == 0:
            center = np.full(box.dim, 0.5)
            cands = proposer.propose(center)
            picked = list(range(k))
            window_best = -np.inf
        else:
            incumbent = X_window[int(np.argmax(y_window))]
            cands = proposer.propose(incumbent)
            scores = ew.score(cands, X_window, y_window)
            picked = select_batch(cands, scores, k)
            window_best = float(y_window.max())
        new_oriented = evaluate(cands[picked])
        proposer.update(bool((new_oriented > window_best).any()))
        if proposer.needs_restart and len(data) < budget:
            proposer.restart()
            epoch_start = len(data)
            evaluate(proposer.initial_points(min(n_init, budget - len(data))))

    trace = RunTrace(dim=box.dim, direction=direction, records=records)
    if f_star is not None:
        trace = regret_metrics(trace, f_star, direction)
    return trace
