"""Randomized-prior ensemble: surrogate mean and ensemble-spread uncertainty.

Each member adds a sampled random continuous function (a small tanh network
with Glorot-uniform weights) to a kernel-regression fit of the residual
labels.  Members agree wherever the data pins them down and disagree by the
spread of their priors elsewhere, which is exactly what the uncertainty
read-out needs.  Optional bootstrap resampling adds local disagreement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .exceptions import ConfigError
from .numerics import KERNEL_SUM_FLOOR, gaussian_weights, pairwise_sq_dists, standardize_labels
from .rng import as_generator
from .surrogates import BandwidthSchedule
from .validation import as_matrix, check_fitted_data


@dataclass(frozen=True)
class PriorField:
    """A sampled random function r(x) = s * W3 tanh(W2 tanh(W1 x + b1) + b2) + b3."""

    w1: np.ndarray
    w2: np.ndarray
    w3: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    b3: np.ndarray
    output_scale: float

    def __call__(self, X) -> np.ndarray:
        X = as_matrix(X, dim=self.w1.shape[0])
        h = np.tanh(X @ self.w1 + self.b1)
        h = np.tanh(h @ self.w2 + self.b2)
        return self.output_scale * (h @ self.w3 + self.b3).ravel()


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def sample_prior_field(
    rng,
    dim: int,
    hidden_width: int = 32,
    output_scale: float = 1.0,
) -> PriorField:
    """Draw one prior field: Glorot-uniform weights, zero biases."""
    if dim < 1 or hidden_width < 1:
        raise ConfigError("dim and hidden_width must be positive")
    rng = as_generator(rng)
    return PriorField(
        w1=_glorot(rng, dim, hidden_width),
        w2=_glorot(rng, hidden_width, hidden_width),
        w3=_glorot(rng, hidden_width, 1),
        b1=np.zeros(hidden_width),
        b2=np.zeros(hidden_width),
        b3=np.zeros(1),
        output_scale=float(output_scale),
    )


class RandomizedPriorEnsemble(BaseEstimator):
    """Ensemble surrogate/uncertainty pair built on randomized priors.

    Parameters
    ----------
    n_members : int
        Ensemble size M (>= 2; the spread uses the M-1 divisor).
    h0_prior : float or array-like
        Base bandwidth of the residual kernel regression, decayed at the
        n^(-1/(2+d)) rate; a unit-cube fraction.
    hidden_width, output_scale : prior-network architecture knobs.
    bootstrap : bool
        Resample each member's training pairs with replacement.
    random_state : int, Generator or None
        A Generator is consumed across fits, so refitting refreshes the
        priors deterministically; an int replays the same priors each fit.
    """

    def __init__(self, n_members: int = 20, h0_prior=0.075, hidden_width: int = 32,
                 output_scale: float = 1.0, bootstrap: bool = False,
                 random_state=None):
        self.n_members = n_members
        self.h0_prior = h0_prior
        self.hidden_width = hidden_width
        self.output_scale = output_scale
        self.bootstrap = bootstrap
        self.random_state = random_state

    def fit(self, X, y):
        if self.n_members < 2:
            raise ConfigError("n_members must be >= 2")
        X, y = check_fitted_data(X, y)
        n, d = X.shape
        rng = as_generator(self.random_state)
        self.z_, self.label_mean_, self.label_scale_ = standardize_labels(y)
        self.priors_ = [
            sample_prior_field(rng, d, self.hidden_width, self.output_scale)
            for _ in range(self.n_members)
        ]
        # Stacked copies of the member networks for batched evaluation.
        self._w1 = np.stack([f.w1 for f in self.priors_])
        self._w2 = np.stack([f.w2 for f in self.priors_])
        self._w3 = np.stack([f.w3 for f in self.priors_])
        if self.bootstrap:
            draws = rng.integers(0, n, size=(self.n_members, n))
            counts = np.zeros((self.n_members, n))
            np.add.at(counts, (np.arange(self.n_members)[:, None], draws), 1.0)
        else:
            counts = np.ones((self.n_members, n))
        r_train = self._prior_matrix(X)                     # (M, n)
        residuals = self.z_[None, :] - r_train
        self._col_weights = (counts * residuals).T          # (n, M)
        self._col_counts = counts.T                         # (n, M)
        h = BandwidthSchedule.of(self.h0_prior, None, d).at(n, 0.0)
        self._scaled_X = X / h
        self._inv_h = 1.0 / h
        self.n_fit_ = n
        self._cache = None
        return self

    def _check_is_fitted(self):
        if not hasattr(self, "priors_"):
            raise NotFittedError("ensemble is not fitted")

    def _prior_matrix(self, X) -> np.ndarray:
        """All prior fields at the query rows, shape (M, m)."""
        m = X.shape[0]
        h = np.tanh(
            (X @ self._w1.transpose(1, 0, 2).reshape(X.shape[1], -1))
            .reshape(m, self.n_members, -1)
            .transpose(1, 0, 2)
        )                                                   # (M, m, H)
        h = np.tanh(h @ self._w2)
        return self.output_scale * (h @ self._w3)[..., 0]

    def member_predictions_standardized(self, X) -> np.ndarray:
        """Per-member predictions on standardized labels, shape (M, m).

        The last query is memoized; the surrogate and uncertainty read-outs
        of one frozen ensemble typically score the same candidate block.
        """
        self._check_is_fitted()
        X = as_matrix(X, dim=self._scaled_X.shape[1])
        key = X.tobytes()
        if self._cache is not None and self._cache[0] == key:
            return self._cache[1]
        K = gaussian_weights(pairwise_sq_dists(X * self._inv_h, self._scaled_X))
        denom = K @ self._col_counts                        # (m, M)
        zero = denom < KERNEL_SUM_FLOOR
        smooth = (K @ self._col_weights) / (denom + zero * float(self.n_fit_) ** -2.0)
        smooth[zero] = 0.0
        members = self._prior_matrix(X) + smooth.T
        self._cache = (key, members)
        return members

    def predict(self, X, return_std: bool = False):
        members = self.member_predictions_standardized(X)
        mean = self.label_mean_ + self.label_scale_ * members.mean(axis=0)
        if not return_std:
            return mean
        return mean, self.label_scale_ * members.std(axis=0, ddof=1)

    def predict_standardized(self, X) -> np.ndarray:
        return self.member_predictions_standardized(X).mean(axis=0)

    def prior_std(self, X) -> np.ndarray:
        """Ensemble spread of the raw prior fields alone (standardized units)."""
        self._check_is_fitted()
        X = as_matrix(X, dim=self._scaled_X.shape[1])
        return self._prior_matrix(X).std(axis=0, ddof=1)
