"""Shared numeric kernels: distances, Gaussian weights, label standardization.

Distances are computed with the BLAS-friendly quadratic expansion.  The
expansion loses the exact zero when a query coincides with a stored point
(roundoff of order d*eps), so squared distances below ``ZERO_SNAP_SQ`` are
snapped to exactly 0.0; several uncertainty quantifiers must vanish
*exactly* on stored points.
"""

from __future__ import annotations

import numpy as np

# Above the d<=64 expansion roundoff (~1e-14), far below any meaningful gap.
ZERO_SNAP_SQ = 1e-13

# Realizes the indicator branch of the kernel-regression normalizer under
# floating point: Gaussian kernels never reach exact zero.
KERNEL_SUM_FLOOR = 1e-300


def standardize_labels(y: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Return z-scores with the population standard deviation.

    Constant (or single) labels get scale 1.0 so that the transform stays
    well-defined; the z-scores are then identically zero.
    """
    y = np.asarray(y, dtype=float)
    mean = float(y.mean()) if y.size else 0.0
    scale = float(y.std()) if y.size else 1.0
    if not scale > 0.0:
        scale = 1.0
    return (y - mean) / scale, mean, scale


def pairwise_sq_dists(Q: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, shape (len(Q), len(X)), clipped at 0."""
    q2 = np.einsum("ij,ij->i", Q, Q)
    x2 = np.einsum("ij,ij->i", X, X)
    d2 = q2[:, None] + x2[None, :] - 2.0 * (Q @ X.T)
    np.maximum(d2, 0.0, out=d2)
    d2[d2 <= ZERO_SNAP_SQ] = 0.0
    return d2


def min_distances(Q: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Distance from each query row to the nearest row of X."""
    return np.sqrt(pairwise_sq_dists(Q, X).min(axis=1))


def scaled_sq_dists(Q: np.ndarray, X: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Squared distances after dividing each coordinate by a bandwidth.

    ``h`` is either a (d,) vector shared by all queries or an (m, d) array
    with one bandwidth vector per query row.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim <= 1:
        inv = 1.0 / h
        return pairwise_sq_dists(Q * inv, X * inv)
    a = 1.0 / np.square(h)                      # (m, d) per-query weights
    qa = Q * a
    d2 = np.einsum("ij,ij->i", qa, Q)[:, None] - 2.0 * (qa @ X.T) + a @ np.square(X).T
    np.maximum(d2, 0.0, out=d2)
    return d2


def gaussian_weights(sq: np.ndarray) -> np.ndarray:
    """exp(-sq/2), the Gaussian kernel on pre-scaled squared distances."""
    return np.exp(-0.5 * sq)


def kernel_smooth(weights: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Normalized kernel average of labels ``z`` under precomputed weights.

    Rows whose kernel mass underflows to zero predict exactly 0.0 (the
    standardized prior value); the n^-2 term keeps the normalizer finite.
    """
    ksum = weights.sum(axis=1)
    zero = ksum < KERNEL_SUM_FLOOR
    denom = ksum + zero * float(len(z)) ** -2.0
    pred = (weights @ z) / denom
    pred[zero] = 0.0
    return pred
