"""Compact working intervals and uniformly sampled scalar functions.

All numerics in this package run on a caller-chosen compact interval [lo, hi]
discretized by a uniform grid.  ScalarGrid is the carrier for sampled
functions (slope/curvature profiles, envelopes, reconstructed generators);
between grid points it interpolates piecewise-linearly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError

DEFAULT_GRID_POINTS = 1025


@dataclass(frozen=True)
class WorkingInterval:
    """Compact interval [lo, hi] with a uniform grid of `grid_points` samples."""

    lo: float
    hi: float
    grid_points: int = DEFAULT_GRID_POINTS

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise UsageError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise UsageError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if self.grid_points < 3:
            raise UsageError(f"need grid_points >= 3, got {self.grid_points}")

    @property
    def span(self) -> float:
        return self.hi - self.lo

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.grid_points - 1)

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.grid_points)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lo) and np.all(x <= self.hi))

    def reflected(self) -> "WorkingInterval":
        """The mirror interval [-hi, -lo] with the same resolution."""
        return WorkingInterval(-self.hi, -self.lo, self.grid_points)


@dataclass(frozen=True, eq=False)
class ScalarGrid:
    """A real function sampled on the uniform grid of `interval`.

    Values are stored read-only; evaluation between grid points is
    piecewise-linear.
    """

    interval: WorkingInterval
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.interval.grid_points,):
            raise UsageError(
                f"expected {self.interval.grid_points} values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise UsageError("grid values must all be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __call__(self, x):
        return np.interp(x, self.interval.grid(), self.values)

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())
