"""Deterministic random-stream plumbing.

One root seed fans out into named substreams so every stochastic choice in
a run (scramblings, perturbation masks, prior fields, bootstrap draws,
restarts) replays identically for the same seed.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ConfigError

# Substream tags; values are arbitrary but frozen for reproducibility.
SOBOL = 1
PERTURB = 2
PRIOR = 3
INIT = 4
RANDOM_SEARCH = 5


def check_seed(seed) -> int:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool) or seed < 0:
        raise ConfigError(f"seed must be a nonnegative integer, got {seed!r}")
    return int(seed)


def substream(seed: int, *tags: int) -> np.random.Generator:
    """Generator for the (seed, *tags) substream of the root seed."""
    return np.random.default_rng([check_seed(seed), *map(int, tags)])


def substream_seed(seed: int, *tags: int) -> int:
    """A derived integer seed, for components that take seeds, not generators."""
    return int(substream(seed, *tags).integers(0, 2**31 - 1))


def as_generator(random_state) -> np.random.Generator:
    """Accept None, an int seed, or a Generator (used as-is, so it advances)."""
    if isinstance(random_state, np.random.Generator):
        return random_state
    return np.random.default_rng(random_state)
