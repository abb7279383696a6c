"""Continuous-to-lattice scaling."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class GridScale:
    """Uniform scaling between machine millimetres and voxel indices."""

    resolution_mm: float

    def __post_init__(self) -> None:
        if not (self.resolution_mm > 0 and math.isfinite(self.resolution_mm)):
            raise ValueError("resolution_mm must be positive and finite")

    @property
    def scale(self) -> float:
        return 1.0 / self.resolution_mm

    def to_voxel(self, x_mm: float) -> int:
        """Round ``x_mm / resolution`` half away from zero.

        Symmetric about the origin so mirrored workspaces discretize
        symmetrically: to_voxel(-x) == -to_voxel(x).
        """
        if not math.isfinite(x_mm):
            raise ValueError("coordinate must be finite")
        q = x_mm / self.resolution_mm
        if q >= 0:
            return int(math.floor(q + 0.5))
        return -int(math.floor(-q + 0.5))

    def to_mm(self, index: int) -> float:
        return index * self.resolution_mm

    def epsilon_voxels(self, epsilon_mm: float) -> int:
        """Safety margin in whole voxels; ceiling preserves soundness."""
        if epsilon_mm < 0:
            raise ValueError("epsilon_mm must be non-negative")
        return int(math.ceil(epsilon_mm / self.resolution_mm - 1e-12))


def s_grid(x_mm: float, grid: GridScale) -> int:
    """Functional alias for GridScale.to_voxel."""
    return grid.to_voxel(x_mm)
