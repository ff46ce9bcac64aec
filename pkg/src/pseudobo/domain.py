"""Search domain (box) and evaluation history.

Everything downstream of the evaluator works in the normalized unit cube
and on max-oriented labels; raw coordinates and raw objective values only
appear at the evaluator and trace boundary.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ConfigError, DomainError
from .numerics import standardize_labels
from .validation import as_matrix, as_vector


class Box:
    """Axis-aligned search domain with affine maps to and from [0, 1]^d."""

    def __init__(self, lower, upper):
        self.lower = as_vector(lower, name="lower")
        self.upper = as_vector(upper, n=self.lower.shape[0], name="upper")
        if self.lower.shape[0] == 0:
            raise ConfigError("box must have at least one dimension")
        if not np.all(self.lower < self.upper):
            bad = int(np.argmin(self.upper - self.lower))
            raise ConfigError(
                f"box requires lower < upper in every coordinate; "
                f"coordinate {bad} has [{self.lower[bad]}, {self.upper[bad]}]"
            )
        self.dim = self.lower.shape[0]

    @classmethod
    def unit(cls, dim: int) -> "Box":
        return cls(np.zeros(dim), np.ones(dim))

    @property
    def range(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, points, atol: float = 0.0) -> bool:
        P = as_matrix(points, dim=self.dim, name="points")
        return bool(
            np.all(P >= self.lower - atol) and np.all(P <= self.upper + atol)
        )

    def normalize(self, points) -> np.ndarray:
        """Map raw coordinates to the unit cube; rejects out-of-box points."""
        P = as_matrix(points, dim=self.dim, name="points")
        below = P < self.lower
        above = P > self.upper
        if below.any() or above.any():
            i, j = np.argwhere(below | above)[0]
            raise DomainError(
                f"point {np.asarray(points).reshape(-1, self.dim)[i]} lies outside "
                f"the box in coordinate {j} "
                f"(allowed [{self.lower[j]}, {self.upper[j]}])"
            )
        return (P - self.lower) / self.range

    def denormalize(self, points) -> np.ndarray:
        P = as_matrix(points, dim=self.dim, name="points")
        return self.lower + P * self.range

    def __repr__(self):  # pragma: no cover
        return f"Box(lower={self.lower.tolist()}, upper={self.upper.tolist()})"


class Dataset:
    """Evaluation history: unit-cube points with raw objective values.

    The dataset knows the run direction so that the incumbent and the
    max-oriented labels used by the scoring machinery are unambiguous.
    Non-finite values are kept (for the trace) but masked out of fitting.
    """

    def __init__(self, dim: int, direction: str = "max"):
        if direction not in ("min", "max"):
            raise ConfigError(f"direction must be 'min' or 'max', got {direction!r}")
        self.dim = int(dim)
        self.direction = direction
        self._points: list[np.ndarray] = []
        self._values: list[float] = []

    def __len__(self) -> int:
        return len(self._values)

    @property
    def n(self) -> int:
        return len(self._values)

    def append(self, point, value: float) -> None:
        p = as_vector(point, n=self.dim, name="point")
        self._points.append(p)
        self._values.append(float(value))

    @property
    def points(self) -> np.ndarray:
        if not self._points:
            return np.empty((0, self.dim))
        return np.array(self._points)

    @property
    def values(self) -> np.ndarray:
        return np.array(self._values, dtype=float)

    @property
    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self.values)

    @property
    def oriented_values(self) -> np.ndarray:
        """Values flipped so that larger is always better."""
        v = self.values
        return v if self.direction == "max" else -v

    @property
    def standardized_values(self) -> np.ndarray:
        """Population z-scores of the finite raw values (others are nan)."""
        v = self.values
        out = np.full_like(v, np.nan)
        mask = self.finite_mask
        if mask.any():
            out[mask] = standardize_labels(v[mask])[0]
        return out

    @property
    def incumbent_index(self) -> int:
        """Index of the best finite value under the run direction.

        Ties resolve to the lowest index.
        """
        v = self.oriented_values
        mask = self.finite_mask
        if not mask.any():
            raise ConfigError("dataset has no finite values yet")
        v = np.where(mask, v, -np.inf)
        return int(np.argmax(v))

    @property
    def incumbent_value(self) -> float:
        return float(self._values[self.incumbent_index])

    @property
    def incumbent_point(self) -> np.ndarray:
        return self._points[self.incumbent_index].copy()

    def fitting_window(self, start: int = 0) -> tuple[np.ndarray, np.ndarray]:
        """Finite (points, max-oriented values) from index ``start`` on."""
        pts = self.points[start:]
        vals = self.oriented_values[start:]
        mask = np.isfinite(vals)
        return pts[mask], vals[mask]
