"""Polyline curves."""

from __future__ import annotations

import numpy as np


class Curve:
    """An ordered polyline in R^2 or R^3.

    Repeated consecutive points are tolerated (their segments carry zero
    length); integrators skip them.
    """

    __slots__ = ("points",)

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] not in (2, 3):
            raise ValueError(f"curve needs (k>=2, 2|3) points, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("curve has non-finite coordinates")
        self.points = pts.copy()

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def segment_lengths(self) -> np.ndarray:
        return np.linalg.norm(np.diff(self.points, axis=0), axis=1)

    def euclidean_length(self) -> float:
        return float(np.sum(self.segment_lengths()))

    def cumulative_lengths(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum(self.segment_lengths())])

    def reversed(self) -> "Curve":
        return Curve(self.points[::-1])
