"""Input validation helpers used by the estimators and the search loop."""

from __future__ import annotations

import numpy as np

from .exceptions import ConfigError

WEIGHT_SUM_TOL = 1e-12


def as_matrix(X, dim: int | None = None, name: str = "X") -> np.ndarray:
    """Coerce to a float (n, d) array; 1-d input is treated as n points in 1D."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2:
        raise ConfigError(f"{name} must be 2-dimensional, got shape {X.shape}")
    if dim is not None and X.shape[1] != dim:
        raise ConfigError(f"{name} has {X.shape[1]} columns, expected {dim}")
    return X


def as_vector(y, n: int | None = None, name: str = "y") -> np.ndarray:
    y = np.asarray(y, dtype=float).ravel()
    if n is not None and y.shape[0] != n:
        raise ConfigError(f"{name} has length {y.shape[0]}, expected {n}")
    return y


def check_fitted_data(X, y) -> tuple[np.ndarray, np.ndarray]:
    """Validate a training pair; empty data is a state error for fitting."""
    X = as_matrix(X)
    y = as_vector(y, n=X.shape[0])
    if X.shape[0] == 0:
        raise ConfigError("cannot fit on an empty dataset")
    return X, y


def check_unit_cube(X, name: str = "X", atol: float = 1e-9) -> np.ndarray:
    X = as_matrix(X, name=name)
    if X.size and (X.min() < -atol or X.max() > 1.0 + atol):
        raise ConfigError(f"{name} must lie in the unit cube [0, 1]^d")
    return X


def check_weights(weights, n: int, nonnegative: bool = False) -> np.ndarray:
    """Validate combination weights: length n, sum 1, optionally nonnegative."""
    w = as_vector(weights, name="weights")
    if w.shape[0] != n:
        raise ConfigError(f"expected {n} weights, got {w.shape[0]}")
    if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise ConfigError(f"weights must sum to 1, got {w.sum()!r}")
    if nonnegative and (w < 0).any():
        raise ConfigError("weights must be nonnegative")
    return w


def check_positive_int(value, name: str) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
