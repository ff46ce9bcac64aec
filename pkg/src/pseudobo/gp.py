"""Small exact Gaussian process on standardized labels.

Squared-exponential kernel, zero prior mean, and a deterministic log-grid
search for the lengthscale by exact log marginal likelihood.  All solves go
through a Cholesky factorization with jitter escalation; the gram matrix is
never inverted explicitly.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .exceptions import ConfigError, NumericalError
from .numerics import scaled_sq_dists, standardize_labels
from .validation import as_matrix, check_fitted_data

# 8 grid points per decade across 3 decades of unit-cube lengthscales.
DEFAULT_LENGTHSCALE_GRID = np.logspace(-2.0, 1.0, 25)

_LOG_2PI = np.log(2.0 * np.pi)


def sq_exp_gram(A, B, lengthscale, signal_variance: float = 1.0) -> np.ndarray:
    """Squared-exponential covariance s^2 * exp(-|x-x'|^2 / (2 l^2))."""
    return signal_variance * np.exp(-0.5 * scaled_sq_dists(A, B, lengthscale))


def chol_with_escalation(K: np.ndarray, jitter: float):
    """Cholesky of K + jitter*I, escalating jitter by decades 3 times.

    Returns ``(factorization, jitter_used)`` or raises NumericalError.
    """
    if jitter <= 0:
        raise ConfigError("jitter must be positive")
    n = K.shape[0]
    eye = np.eye(n)
    for step in range(4):
        j = jitter * 10.0**step
        try:
            return cho_factor(K + j * eye, lower=True), j
        except np.linalg.LinAlgError:
            continue
    raise NumericalError(
        f"gram matrix is not positive definite even at jitter {jitter * 1e3:g}"
    )


def log_marginal_likelihood(cho, z: np.ndarray) -> float:
    """Exact Gaussian log evidence of standardized labels given a factorization."""
    alpha = cho_solve(cho, z)
    log_det = 2.0 * np.sum(np.log(np.diag(cho[0])))
    return float(-0.5 * z @ alpha - 0.5 * log_det - 0.5 * len(z) * _LOG_2PI)


def select_lengthscale(
    X: np.ndarray,
    z: np.ndarray,
    grid=None,
    jitter: float = 1e-8,
    signal_variance: float = 1.0,
) -> float:
    """Grid lengthscale maximizing the exact log marginal likelihood.

    Deterministic: ties and degenerate data resolve to the first
    (smallest) maximizing grid value; grid entries whose factorization
    fails are skipped.
    """
    grid = DEFAULT_LENGTHSCALE_GRID if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ConfigError("lengthscale grid must be nonempty")
    if X.shape[0] < 2:
        raise ConfigError("lengthscale selection needs at least 2 points")
    best_ll, best_ls = -np.inf, None
    for ls in grid:
        K = sq_exp_gram(X, X, np.full(X.shape[1], ls), signal_variance)
        try:
            cho, _ = chol_with_escalation(K, jitter)
        except NumericalError:
            continue
        ll = log_marginal_likelihood(cho, z)
        if ll > best_ll:
            best_ll, best_ls = ll, float(ls)
    if best_ls is None:
        raise NumericalError("no grid lengthscale admits a stable factorization")
    return best_ls


class _GPCore(BaseEstimator):
    """Shared fitting machinery for the GP surrogate and uncertainty views."""

    def __init__(self, lengthscale=None, signal_variance=1.0, jitter=1e-8,
                 lengthscale_grid=None):
        self.lengthscale = lengthscale
        self.signal_variance = signal_variance
        self.jitter = jitter
        self.lengthscale_grid = lengthscale_grid

    def fit(self, X, y):
        X, y = check_fitted_data(X, y)
        self.X_ = X
        self.z_, self.label_mean_, self.label_scale_ = standardize_labels(y)
        if self.lengthscale is not None:
            ls = np.broadcast_to(
                np.asarray(self.lengthscale, dtype=float), (X.shape[1],)
            ).copy()
        elif X.shape[0] >= 2:
            ls = np.full(
                X.shape[1],
                select_lengthscale(
                    X, self.z_, self.lengthscale_grid, self.jitter,
                    self.signal_variance,
                ),
            )
        else:
            ls = np.full(X.shape[1], 0.2)       # single point: any scale works
        self.lengthscale_ = ls
        K = sq_exp_gram(X, X, ls, self.signal_variance)
        self.cho_, self.jitter_ = chol_with_escalation(K, self.jitter)
        self.alpha_ = cho_solve(self.cho_, self.z_)
        return self

    def _check_is_fitted(self):
        if not hasattr(self, "cho_"):
            raise NotFittedError("Gaussian process is not fitted")

    def _cross_gram(self, X) -> np.ndarray:
        X = as_matrix(X, dim=self.X_.shape[1])
        return sq_exp_gram(X, self.X_, self.lengthscale_, self.signal_variance)

    def posterior_mean_standardized(self, X) -> np.ndarray:
        self._check_is_fitted()
        return self._cross_gram(X) @ self.alpha_

    def posterior_std(self, X) -> np.ndarray:
        """Posterior standard deviation in kernel (signal) units.

        Depends on geometry only, never on the labels; clamped at zero
        where roundoff would make the variance negative.
        """
        self._check_is_fitted()
        k = self._cross_gram(X)
        v = solve_triangular(self.cho_[0], k.T, lower=True)
        var = self.signal_variance - np.einsum("ij,ij->j", v, v)
        return np.sqrt(np.maximum(var, 0.0))


class GaussianProcessSurrogate(_GPCore, RegressorMixin):
    """GP posterior mean as a surrogate predictor.

    Parameters
    ----------
    lengthscale : float, array-like or None
        Fixed kernel lengthscale(s); None selects one on a log grid by
        marginal likelihood at fit time.
    signal_variance : float
        Kernel signal variance on standardized labels.
    jitter : float
        Diagonal regularizer; escalated by decades on factorization failure.
    lengthscale_grid : array-like or None
        Candidate lengthscales for the automatic selection.
    """

    def predict(self, X, return_std: bool = False):
        mean = self.label_mean_ + self.label_scale_ * self.posterior_mean_standardized(X)
        if return_std:
            return mean, self.posterior_std(X)
        return mean

    def predict_standardized(self, X) -> np.ndarray:
        return self.posterior_mean_standardized(X)


class GaussianProcessUncertainty(_GPCore):
    """GP posterior standard deviation as an uncertainty quantifier.

    The output is the label-free covariance formula, so it is already in
    scale-free units: ``label_scale_`` is overridden to 1.
    """

    def fit(self, X, y):
        super().fit(X, y)
        self.label_scale_ = 1.0
        return self

    def predict(self, X) -> np.ndarray:
        return self.posterior_std(X)
