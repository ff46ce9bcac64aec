"""Uncertainty quantifiers: zero exactly on evaluated points, positive away.

All quantifiers expose ``fit(X, y)`` / ``predict(X)`` and report raw-unit
uncertainties, with ``label_scale_`` giving the factor back to scale-free
units (1.0 for quantifiers that are already label-free).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .exceptions import ConfigError
from .gp import GaussianProcessUncertainty  # noqa: F401  (part of this module's API)
from .numerics import min_distances, standardize_labels
from .randomized_prior import RandomizedPriorEnsemble
from .validation import as_matrix, check_fitted_data, check_weights


def alpha_mix(delta, n: int):
    """Mixing weight exp(-delta * n): 1 on the data, fading with distance."""
    if n < 1:
        raise ConfigError("step count n must be >= 1")
    delta = np.asarray(delta, dtype=float)
    if (delta < 0).any():
        raise ConfigError("delta must be nonnegative")
    out = np.exp(-delta * n)
    return out if out.ndim else float(out)


class MinDistanceUncertainty(BaseEstimator):
    """Label spread times the distance to the nearest evaluated point."""

    def fit(self, X, y):
        X, y = check_fitted_data(X, y)
        self.X_ = X
        z, _, self.label_scale_ = standardize_labels(y)
        self.spread_ = float(z.std())           # 1 unless the labels are constant
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "X_"):
            raise NotFittedError("uncertainty quantifier is not fitted")
        X = as_matrix(X, dim=self.X_.shape[1])
        return self.label_scale_ * self.spread_ * min_distances(X, self.X_)


class HybridUncertainty(BaseEstimator):
    """Distance-gated blend of minimum-distance and randomized-prior spread.

    sigma(x) = a * sigma_dist(x) + (1 - a) * sigma_ensemble(x) with
    a = exp(-delta(x) * n).  Near the data the gate hands everything to the
    distance term (which vanishes there exactly); far away the bootstrapped
    ensemble spread takes over.
    """

    def __init__(self, h0_prior=0.005, n_members: int = 20, hidden_width: int = 32,
                 output_scale: float = 1.0, bootstrap: bool = True,
                 random_state=None):
        self.h0_prior = h0_prior
        self.n_members = n_members
        self.hidden_width = hidden_width
        self.output_scale = output_scale
        self.bootstrap = bootstrap
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_fitted_data(X, y)
        self.X_ = X
        z, _, self.label_scale_ = standardize_labels(y)
        self.spread_ = float(z.std())
        self.ensemble_ = RandomizedPriorEnsemble(
            n_members=self.n_members,
            h0_prior=self.h0_prior,
            hidden_width=self.hidden_width,
            output_scale=self.output_scale,
            bootstrap=self.bootstrap,
            random_state=self.random_state,
        ).fit(X, y)
        self.n_fit_ = X.shape[0]
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "ensemble_"):
            raise NotFittedError("uncertainty quantifier is not fitted")
        X = as_matrix(X, dim=self.X_.shape[1])
        delta = min_distances(X, self.X_)
        alpha = alpha_mix(delta, self.n_fit_)
        sigma_dist = self.spread_ * delta
        members = self.ensemble_.member_predictions_standardized(X)
        sigma_ens = members.std(axis=0, ddof=1)
        return self.label_scale_ * (alpha * sigma_dist + (1.0 - alpha) * sigma_ens)


class ConvexCombinationUncertainty(BaseEstimator):
    """Convex combination of quantifiers sharing one label space."""

    def __init__(self, components, weights):
        self.components = components
        self.weights = weights

    def fit(self, X, y):
        self.weights_ = check_weights(self.weights, len(self.components),
                                      nonnegative=True)
        for c in self.components:
            c.fit(X, y)
        self.label_scale_ = getattr(self.components[0], "label_scale_", 1.0)
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "weights_"):
            raise NotFittedError("uncertainty quantifier is not fitted")
        sigmas = np.asarray([c.predict(X) for c in self.components])
        return np.tensordot(self.weights_, sigmas, axes=1)


class CompositeMaxUncertainty(BaseEstimator):
    """Componentwise maximum across block quantifiers of a grey-box objective."""

    def __init__(self, quantifiers):
        if len(quantifiers) < 1:
            raise ConfigError("need at least one component quantifier")
        self.quantifiers = quantifiers

    def _check_arity(self, parts, name: str):
        if len(parts) != len(self.quantifiers):
            raise ConfigError(
                f"{name}: expected {len(self.quantifiers)} input blocks, "
                f"got {len(parts)}"
            )

    def fit(self, X_parts, y_parts):
        self._check_arity(X_parts, "fit")
        if len(y_parts) != len(self.quantifiers):
            raise ConfigError("fit: one label vector per component is required")
        for uq, X, y in zip(self.quantifiers, X_parts, y_parts):
            uq.fit(X, y)
        self.fitted_ = True
        return self

    def predict(self, X_parts) -> np.ndarray:
        if not getattr(self, "fitted_", False):
            raise NotFittedError("uncertainty quantifier is not fitted")
        self._check_arity(X_parts, "predict")
        sigmas = [uq.predict(X) for uq, X in zip(self.quantifiers, X_parts)]
        return np.max(np.asarray(sigmas), axis=0)
