"""Locally consistent surrogate predictors with a scikit-learn estimator API.

Every surrogate fits raw labels (z-scoring them internally with the
population standard deviation) and predicts in raw units.  The fitted
attribute ``label_scale_`` is the de-standardization factor the scoring
machinery divides by to work in scale-free units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .exceptions import ConfigError
from .numerics import (
    gaussian_weights,
    kernel_smooth,
    min_distances,
    pairwise_sq_dists,
    scaled_sq_dists,
    standardize_labels,
)
from .validation import WEIGHT_SUM_TOL, as_matrix, as_vector, check_fitted_data


@dataclass(frozen=True)
class BandwidthSchedule:
    """Per-dimension kernel bandwidths shrinking at the n^(-1/(2+d)) rate.

    The effective bandwidth at a query interpolates between the lower base
    (used near observed data) and the upper base (used in unexplored
    regions), driven by the distance to the nearest observation:

        h(x) = (1 - exp(-delta * n)) * (h_u - h_l) + h_l
    """

    h0_low: np.ndarray
    h0_high: np.ndarray

    def __post_init__(self):
        low = as_vector(self.h0_low, name="h0_low")
        high = as_vector(self.h0_high, n=low.shape[0], name="h0_high")
        if not np.all(low > 0):
            raise ConfigError("h0_low must be positive")
        if not np.all(low <= high):
            raise ConfigError("h0_low must not exceed h0_high")
        object.__setattr__(self, "h0_low", low)
        object.__setattr__(self, "h0_high", high)

    @classmethod
    def of(cls, h0_low, h0_high=None, dim: int = 1) -> "BandwidthSchedule":
        """Build from scalars or vectors; a single base gives a flat schedule."""
        low = np.broadcast_to(np.asarray(h0_low, dtype=float), (dim,)).copy()
        high = low if h0_high is None else np.broadcast_to(
            np.asarray(h0_high, dtype=float), (dim,)
        ).copy()
        return cls(low, high)

    @property
    def dim(self) -> int:
        return self.h0_low.shape[0]

    def at(self, n: int, delta) -> np.ndarray:
        """Bandwidth vector(s) for step count n and nearest-data distance delta.

        ``delta`` may be a scalar or an (m,) array; the result is (d,) or
        (m, d) accordingly.
        """
        if n < 1:
            raise ConfigError("step count n must be >= 1")
        rate = float(n) ** (-1.0 / (2.0 + self.dim))
        h_low = self.h0_low * rate
        h_high = self.h0_high * rate
        delta = np.asarray(delta, dtype=float)
        mix = -np.expm1(-delta * n)             # 1 - exp(-delta * n)
        if delta.ndim == 0:
            return h_low + float(mix) * (h_high - h_low)
        return h_low + mix[:, None] * (h_high - h_low)


class KernelRegressionSurrogate(BaseEstimator, RegressorMixin):
    """Nadaraya-Watson regression with a Gaussian kernel.

    Bandwidth bases are fractions of the unit cube; pass equal bases for a
    fixed (non-adaptive) bandwidth.  Queries with no kernel support predict
    the training label mean.

    Parameters
    ----------
    h0_low, h0_high : float or array-like
        Base bandwidths before the n^(-1/(2+d)) decay; per-dimension when
        array-like.  ``h0_high=None`` reuses ``h0_low``.
    """

    def __init__(self, h0_low=0.05, h0_high=0.2):
        self.h0_low = h0_low
        self.h0_high = h0_high

    def fit(self, X, y):
        X, y = check_fitted_data(X, y)
        self.X_ = X
        self.z_, self.label_mean_, self.label_scale_ = standardize_labels(y)
        self.schedule_ = BandwidthSchedule.of(self.h0_low, self.h0_high, X.shape[1])
        return self

    def _check_is_fitted(self):
        if not hasattr(self, "X_"):
            raise NotFittedError("surrogate is not fitted")

    def predict_standardized(self, X) -> np.ndarray:
        self._check_is_fitted()
        X = as_matrix(X, dim=self.X_.shape[1])
        n = self.X_.shape[0]
        adaptive = np.any(self.schedule_.h0_low < self.schedule_.h0_high)
        delta = min_distances(X, self.X_) if adaptive else 0.0
        h = self.schedule_.at(n, delta)
        K = gaussian_weights(scaled_sq_dists(X, self.X_, h))
        return kernel_smooth(K, self.z_)

    def predict(self, X) -> np.ndarray:
        pred = self.predict_standardized(X)
        return self.label_mean_ + self.label_scale_ * pred


class NearestNeighborSurrogate(BaseEstimator, RegressorMixin):
    """Predicts the label of the closest observed point (lowest index on ties)."""

    def fit(self, X, y):
        X, y = check_fitted_data(X, y)
        self.X_ = X
        self.y_ = y
        self.z_, self.label_mean_, self.label_scale_ = standardize_labels(y)
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "X_"):
            raise NotFittedError("surrogate is not fitted")
        X = as_matrix(X, dim=self.X_.shape[1])
        nearest = np.argmin(pairwise_sq_dists(X, self.X_), axis=1)
        return self.y_[nearest]

    def predict_standardized(self, X) -> np.ndarray:
        return (self.predict(X) - self.label_mean_) / self.label_scale_


class HybridSurrogate(BaseEstimator, RegressorMixin):
    """Affine combination of surrogates; weights must sum to 1."""

    def __init__(self, components, weights):
        self.components = components
        self.weights = weights

    def _validated_weights(self) -> np.ndarray:
        w = as_vector(self.weights, name="weights")
        if w.shape[0] != len(self.components):
            raise ConfigError(
                f"expected {len(self.components)} weights, got {w.shape[0]}"
            )
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ConfigError(f"weights must sum to 1, got {w.sum()!r}")
        return w

    def fit(self, X, y):
        self.weights_ = self._validated_weights()
        for c in self.components:
            c.fit(X, y)
        _, self.label_mean_, self.label_scale_ = standardize_labels(
            check_fitted_data(X, y)[1]
        )
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "weights_"):
            raise NotFittedError("surrogate is not fitted")
        preds = [c.predict(X) for c in self.components]
        return np.tensordot(self.weights_, np.asarray(preds), axes=1)

    def predict_standardized(self, X) -> np.ndarray:
        return (self.predict(X) - self.label_mean_) / self.label_scale_


class CompositeSurrogate(BaseEstimator, RegressorMixin):
    """Surrogate for a partially known objective built from black-box parts.

    Each component surrogate models one black-box input block and carries
    its own history; ``combine(predictions, parts)`` applies the known
    outer structure to the component predictions and the raw input blocks.
    """

    def __init__(self, surrogates, combine):
        self.surrogates = surrogates
        self.combine = combine

    def _check_arity(self, parts, name: str):
        if len(parts) != len(self.surrogates):
            raise ConfigError(
                f"{name}: expected {len(self.surrogates)} input blocks, "
                f"got {len(parts)}"
            )

    def fit(self, X_parts, y_parts):
        self._check_arity(X_parts, "fit")
        if len(y_parts) != len(self.surrogates):
            raise ConfigError("fit: one label vector per component is required")
        for sp, X, y in zip(self.surrogates, X_parts, y_parts):
            sp.fit(X, y)
        self.fitted_ = True
        return self

    def predict(self, X_parts) -> np.ndarray:
        if not getattr(self, "fitted_", False):
            raise NotFittedError("surrogate is not fitted")
        self._check_arity(X_parts, "predict")
        parts = [as_matrix(X) for X in X_parts]
        preds = [sp.predict(X) for sp, X in zip(self.surrogates, parts)]
        return np.asarray(self.combine(preds, parts), dtype=float)
