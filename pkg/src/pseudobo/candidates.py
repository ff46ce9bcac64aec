"""Candidate generation for the inner worthiness maximization.

Scrambled Sobol points seed the search; candidates are built by perturbing
a subset of the incumbent's coordinates toward those points, optionally
restricted to a trust region that expands on success streaks, shrinks on
failure streaks and restarts from fresh space-filling points when it
collapses.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import qmc

from .exceptions import ConfigError
from .rng import PERTURB, SOBOL, substream, substream_seed
from .validation import as_vector, check_positive_int

MAX_SOBOL_DIM = 64

# Perturbation probability by dimension; linear interpolation between knots.
_PERTURB_DIMS = np.array([2.0, 6.0, 10.0, 12.0, 14.0, 60.0])
_PERTURB_PROBS = np.array([1.0, 0.75, 0.5, 0.4, 0.35, 0.15])


def perturbation_probability(dim: int) -> float:
    return float(np.interp(float(dim), _PERTURB_DIMS, _PERTURB_PROBS))


def default_n_candidates(dim: int) -> int:
    return min(100 * dim, 5000)


class SobolStream:
    """Deterministic scrambled Sobol sequence over [0, 1)^d.

    Draws are buffered in fixed power-of-two blocks; slicing a sequence
    into chunks leaves the points (and the balance of any prefix)
    unchanged, so scipy's non-power-of-two draw warning is suppressed.
    """

    _BLOCK = 2**12

    def __init__(self, dim: int, seed: int):
        dim = check_positive_int(dim, "dim")
        if dim > MAX_SOBOL_DIM:
            raise ConfigError(f"Sobol stream supports dim <= {MAX_SOBOL_DIM}, got {dim}")
        self.dim = dim
        self.seed = seed
        self._engine = qmc.Sobol(d=dim, scramble=True, seed=seed)
        self._buffer = np.empty((0, dim))

    def take(self, count: int) -> np.ndarray:
        count = check_positive_int(count, "count")
        while self._buffer.shape[0] < count:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                block = self._engine.random(self._BLOCK)
            self._buffer = np.vstack([self._buffer, block])
        out, self._buffer = self._buffer[:count], self._buffer[count:]
        return out.copy()


@dataclass(frozen=True)
class PerturbConfig:
    """Coordinate-perturbation settings for candidate generation."""

    p_perturb: float
    n_candidates: int

    def __post_init__(self):
        if not 0.0 < self.p_perturb <= 1.0:
            raise ConfigError("p_perturb must lie in (0, 1]")
        check_positive_int(self.n_candidates, "n_candidates")

    @classmethod
    def for_dim(cls, dim: int, p_perturb=None, n_candidates=None) -> "PerturbConfig":
        return cls(
            p_perturb=perturbation_probability(dim) if p_perturb is None else p_perturb,
            n_candidates=default_n_candidates(dim) if n_candidates is None else n_candidates,
        )


def propose_candidates(
    incumbent,
    stream: SobolStream,
    config: PerturbConfig,
    rng: np.random.Generator,
    region: tuple | None = None,
) -> np.ndarray:
    """Generate candidates around the incumbent.

    Each candidate starts as the incumbent and independently replaces
    every coordinate with probability ``p_perturb`` by the next Sobol draw
    (rescaled into ``region`` when given); rows where no coordinate fired
    get one uniformly chosen coordinate forced.  The result is clipped to
    region intersected with the unit cube.
    """
    incumbent = as_vector(incumbent, n=stream.dim, name="incumbent")
    if region is None:
        lo = np.zeros(stream.dim)
        hi = np.ones(stream.dim)
    else:
        lo = np.clip(as_vector(region[0], n=stream.dim, name="region lower"), 0.0, 1.0)
        hi = np.clip(as_vector(region[1], n=stream.dim, name="region upper"), 0.0, 1.0)
        if not np.all(lo < hi):
            raise ConfigError("trust region is empty after unit-cube intersection")
    m = config.n_candidates
    draws = lo + stream.take(m) * (hi - lo)
    mask = rng.random((m, stream.dim)) < config.p_perturb
    silent = ~mask.any(axis=1)
    if silent.any():
        forced = rng.integers(0, stream.dim, size=int(silent.sum()))
        mask[np.flatnonzero(silent), forced] = True
    cands = np.broadcast_to(incumbent, (m, stream.dim)).copy()
    cands[mask] = draws[mask]
    return np.clip(cands, lo, hi)


@dataclass(frozen=True)
class TrustRegionState:
    """Side length and streak counters of the incumbent-centered region."""

    length: float = 0.8
    success_count: int = 0
    failure_count: int = 0
    restarts: int = 0
    length_init: float = 0.8
    length_min: float = 0.5**7
    length_max: float = 1.6
    success_threshold: int = 3
    failure_threshold: int = 4
    needs_restart: bool = False

    @classmethod
    def initial(cls, dim: int, batch: int = 1, **kwargs) -> "TrustRegionState":
        kwargs.setdefault("failure_threshold", max(4, math.ceil(dim / batch)))
        state = cls(**kwargs)
        return replace(state, length=state.length_init)


def tr_update(state: TrustRegionState, improved: bool) -> TrustRegionState:
    """Pure streak update: expand on 3 successes, halve on the failure streak.

    A length that falls below the minimum flags a restart; the caller is
    expected to reinitialize with fresh space-filling evaluations.
    """
    if improved:
        successes = state.success_count + 1
        if successes >= state.success_threshold:
            return replace(
                state,
                length=min(2.0 * state.length, state.length_max),
                success_count=0,
                failure_count=0,
            )
        return replace(state, success_count=successes, failure_count=0)
    failures = state.failure_count + 1
    if failures >= state.failure_threshold:
        halved = state.length / 2.0
        return replace(
            state,
            length=halved,
            success_count=0,
            failure_count=0,
            needs_restart=halved < state.length_min,
        )
    return replace(state, failure_count=failures)


class SobolPerturbProposer:
    """Default candidate optimizer: Sobol draws perturbed around the incumbent."""

    def __init__(self, dim: int, seed: int = 0, p_perturb=None, n_candidates=None):
        self.dim = dim
        self.seed = seed
        self.config = PerturbConfig.for_dim(dim, p_perturb, n_candidates)
        self._rng = substream(seed, PERTURB)
        self._epoch = -1
        self.restart()

    def restart(self) -> None:
        """Advance to a freshly scrambled stream (new epoch)."""
        self._epoch += 1
        self.stream = SobolStream(self.dim, substream_seed(self.seed, SOBOL, self._epoch))

    def initial_points(self, count: int) -> np.ndarray:
        return self.stream.take(count)

    def region(self, incumbent) -> tuple | None:
        return None

    def propose(self, incumbent) -> np.ndarray:
        return propose_candidates(
            incumbent, self.stream, self.config, self._rng, self.region(incumbent)
        )

    def update(self, improved: bool) -> None:
        pass

    @property
    def needs_restart(self) -> bool:
        return False


class TrustRegionProposer(SobolPerturbProposer):
    """Sobol-perturbation proposer confined to an adaptive trust region."""

    def __init__(self, dim: int, seed: int = 0, p_perturb=None, n_candidates=None,
                 batch: int = 1, length_init: float = 0.8,
                 length_min: float = 0.5**7, length_max: float = 1.6,
                 success_threshold: int = 3):
        self._tr_kwargs = dict(
            dim=dim,
            batch=batch,
            length_init=length_init,
            length=length_init,
            length_min=length_min,
            length_max=length_max,
            success_threshold=success_threshold,
        )
        self.state = TrustRegionState.initial(**self._tr_kwargs)
        super().__init__(dim, seed, p_perturb, n_candidates)

    def restart(self) -> None:
        super().restart()
        restarts = self.state.restarts + 1 if self._epoch > 0 else 0
        self.state = replace(
            TrustRegionState.initial(**self._tr_kwargs), restarts=restarts
        )

    def region(self, incumbent) -> tuple:
        incumbent = np.asarray(incumbent, dtype=float)
        half = 0.5 * self.state.length
        return incumbent - half, incumbent + half

    def update(self, improved: bool) -> None:
        self.state = tr_update(self.state, improved)

    @property
    def needs_restart(self) -> bool:
        return self.state.needs_restart
