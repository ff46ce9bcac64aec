"""Interval calibration: coverage, the bisection multiplier search and CCR.

A fitted surrogate/quantifier pair defines intervals f(x) +- lambda *
sigma(x).  The smallest multiplier giving full coverage on a validation
set is found by doubling then bisection; the calibrated coverage rate
(CCR) is the coverage that multiplier achieves on a held-out test set, and
the reported width is the mean calibrated interval width there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Box
from .exceptions import CalibrationError, ConfigError
from .rng import as_generator
from .validation import as_matrix, as_vector

# Validation uncertainties below this floor cover only exact predictions;
# any residual there would need an infinite multiplier.
SIGMA_FLOOR = 1e-12

_MAX_DOUBLINGS = 128


@dataclass(frozen=True)
class CalibrationSplit:
    """Disjoint train/validation/test data in raw units."""

    X_train: np.ndarray
    y_train: np.ndarray
    X_val: np.ndarray
    y_val: np.ndarray
    X_test: np.ndarray
    y_test: np.ndarray

    @classmethod
    def sample(cls, objective, box: Box, sizes=(20, 10, 150), rng=None) -> "CalibrationSplit":
        """Uniformly sample the three splits from the box and label them."""
        rng = as_generator(rng)
        chunks = []
        for size in sizes:
            X = box.denormalize(rng.random((size, box.dim)))
            y = np.array([float(objective(x)) for x in X])
            chunks.extend([X, y])
        return cls(*chunks)


@dataclass(frozen=True)
class CalibrationResult:
    lambda_val: float
    ccr: float
    mean_width: float


def _interval_arrays(sp, uq, X, y):
    X = as_matrix(X)
    y = as_vector(y, n=X.shape[0])
    residuals = np.abs(y - np.asarray(sp.predict(X), dtype=float))
    sigmas = np.asarray(uq.predict(X), dtype=float)
    return residuals, sigmas


def coverage(sp, uq, X, y, lam: float) -> float:
    """Fraction of points whose label falls inside the lambda-interval."""
    if lam < 0:
        raise ConfigError("lambda must be nonnegative")
    residuals, sigmas = _interval_arrays(sp, uq, X, y)
    return float(np.mean(residuals <= lam * sigmas))


def _coverage_from(residuals, sigmas, lam: float) -> float:
    return float(np.mean(residuals <= lam * sigmas))


def calibrate_lambda(sp, uq, X_val, y_val, eps: float = 1e-6) -> float:
    """Smallest multiplier (within eps) with full validation coverage.

    Doubles an initial guess of 1 until the interval covers everything,
    then bisects.  The returned value always has coverage exactly 1.
    """
    if eps <= 0:
        raise ConfigError("eps must be positive")
    residuals, sigmas = _interval_arrays(sp, uq, X_val, y_val)
    tiny = sigmas < SIGMA_FLOOR
    if np.any(tiny & (residuals > 0.0)):
        i = int(np.flatnonzero(tiny & (residuals > 0.0))[0])
        raise CalibrationError(
            f"validation point {i} has uncertainty {sigmas[i]:.3g} below the "
            f"floor but residual {residuals[i]:.3g}; no finite multiplier covers it"
        )
    lam_low, lam_init = 0.0, 1.0
    lam_high = np.inf
    for _ in range(_MAX_DOUBLINGS):
        if _coverage_from(residuals, sigmas, lam_init) < 1.0:
            lam_init *= 2.0
        else:
            lam_high = lam_init
            break
    if not np.isfinite(lam_high):
        raise CalibrationError("coverage never reached 1 during doubling")
    while lam_high - lam_low > eps:
        mid = 0.5 * (lam_low + lam_high)
        if _coverage_from(residuals, sigmas, mid) < 1.0:
            lam_low = mid
        else:
            lam_high = mid
    return lam_high


def ccr_report(sp, uq, split: CalibrationSplit, eps: float = 1e-6) -> CalibrationResult:
    """Test coverage and mean interval width at the validation multiplier.

    ``sp`` and ``uq`` must already be fitted on the training split.
    """
    lam = calibrate_lambda(sp, uq, split.X_val, split.y_val, eps)
    residuals, sigmas = _interval_arrays(sp, uq, split.X_test, split.y_test)
    return CalibrationResult(
        lambda_val=lam,
        ccr=_coverage_from(residuals, sigmas, lam),
        mean_width=float(np.mean(2.0 * lam * sigmas)),
    )


def winsorize(values, k: float = 5.0) -> np.ndarray:
    """Clip the low tail at q3 - k * (q3 - q1).

    Quartiles use linear interpolation between order statistics.  Guards
    spread estimates against rare catastrophic objective values.
    """
    v = as_vector(values, name="values")
    if v.size == 0:
        raise ConfigError("winsorize needs at least one value")
    q1, q3 = np.percentile(v, [25.0, 75.0])
    threshold = q3 - k * (q3 - q1)
    return np.maximum(v, threshold)
