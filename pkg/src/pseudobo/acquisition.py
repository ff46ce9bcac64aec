"""Acquisition rules mapping (improvement, uncertainty) to evaluation worthiness.

All rules are vectorized over ``p`` (predicted improvement over the
incumbent, in standardized label units) and ``sigma`` (predictive
uncertainty, same units).  Each satisfies the improvement property: the
score vanishes when improvement is certainly absent and uncertainty dies
out, and stays positive wherever uncertainty persists.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtr

from .exceptions import ConfigError
from .validation import check_weights

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def norm_pdf(z):
    return _INV_SQRT_2PI * np.exp(-0.5 * np.square(z))


def norm_cdf(z):
    return ndtr(z)


def _shifted(p, sigma, tau):
    p = np.asarray(p, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    return np.broadcast_arrays(p - tau, sigma)


def probability_of_improvement(p, sigma, tau: float = 0.0):
    """P(improvement > tau) under a normal model; indicator when sigma == 0."""
    gap, sigma = _shifted(p, sigma, tau)
    positive = sigma > 0.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        z = np.where(positive, gap / np.where(positive, sigma, 1.0), 0.0)
    out = np.where(positive, norm_cdf(z), (gap > 0.0).astype(float))
    return out if out.ndim else float(out)


def expected_improvement(p, sigma, tau: float = 0.0):
    """E[max(improvement - tau, 0)] under a normal model.

    Degenerates to max(p - tau, 0) at sigma == 0; never negative.
    """
    gap, sigma = _shifted(p, sigma, tau)
    positive = sigma > 0.0
    safe = np.where(positive, sigma, 1.0)
    with np.errstate(over="ignore"):
        z = gap / safe
        smooth = safe * norm_pdf(z) + gap * norm_cdf(z)
    out = np.where(positive, smooth, np.maximum(gap, 0.0))
    out = np.maximum(out, 0.0)
    return out if out.ndim else float(out)


def ucb_beta(n: int, beta0: float = 2.0) -> float:
    """Exploration weight beta0 * sqrt(log(n + 2)); increases strictly in n."""
    return beta0 * np.sqrt(np.log(n + 2.0))


def upper_confidence_bound(p, sigma, tau: float = 0.0, beta: float = 2.0):
    """Optimism score (p - tau)/beta + sigma.

    Shares its argmax over any candidate set with the familiar
    prediction + beta * sigma form for every beta > 0.
    """
    gap, sigma = _shifted(p, sigma, tau)
    out = gap / beta + sigma
    return out if out.ndim else float(out)


class ProbabilityOfImprovement:
    """PI acquisition; tau > 0 is required for the vanishing-score limit."""

    def __init__(self, tau: float = 0.01):
        if tau < 0:
            raise ConfigError("tau must be nonnegative")
        self.tau = tau

    def __call__(self, p, sigma, n: int = 1):
        return probability_of_improvement(p, sigma, self.tau)


class ExpectedImprovement:
    def __init__(self, tau: float = 0.0):
        if tau < 0:
            raise ConfigError("tau must be nonnegative")
        self.tau = tau

    def __call__(self, p, sigma, n: int = 1):
        return expected_improvement(p, sigma, self.tau)


class UpperConfidenceBound:
    """UCB with the default strictly increasing beta schedule.

    ``increasing=False`` holds beta at beta0; that constant-beta mode falls
    outside the vanishing-score guarantee and is provided for comparison
    runs only.
    """

    def __init__(self, beta0: float = 2.0, tau: float = 0.0, increasing: bool = True):
        if beta0 <= 0:
            raise ConfigError("beta0 must be positive")
        if tau < 0:
            raise ConfigError("tau must be nonnegative")
        self.beta0 = beta0
        self.tau = tau
        self.increasing = increasing

    def beta(self, n: int) -> float:
        return ucb_beta(n, self.beta0) if self.increasing else self.beta0

    def __call__(self, p, sigma, n: int = 1):
        return upper_confidence_bound(p, sigma, self.tau, self.beta(n))


class PureExploration:
    """Scores by uncertainty alone; drives space-filling searches."""

    tau = 0.0

    def __call__(self, p, sigma, n: int = 1):
        sigma = np.asarray(sigma, dtype=float)
        return sigma if sigma.ndim else float(sigma)


class HybridAcquisition:
    """Convex combination of acquisition rules (weights >= 0, sum 1)."""

    def __init__(self, components, weights):
        self.components = list(components)
        if not self.components:
            raise ConfigError("need at least one acquisition component")
        self.weights = check_weights(weights, len(self.components), nonnegative=True)

    def __call__(self, p, sigma, n: int = 1):
        total = self.weights[0] * np.asarray(self.components[0](p, sigma, n), dtype=float)
        for w, g in zip(self.weights[1:], self.components[1:]):
            total = total + w * np.asarray(g(p, sigma, n), dtype=float)
        return total if total.ndim else float(total)
