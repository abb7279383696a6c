"""Continuous obstacle/stock shapes and their center-sampled voxelization."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Tuple, Union

from .errors import DiagnosticWarning, WorkspaceError
from .grid import GridScale
from .voxel import VoxelSet

Point = Tuple[float, float, float]
AXES = ("x", "y", "z")


@dataclass(frozen=True)
class Box:
    min: Point
    max: Point

    def validate(self) -> None:
        for a in range(3):
            if not (math.isfinite(self.min[a]) and math.isfinite(self.max[a])):
                raise WorkspaceError("box bounds must be finite")
            if self.min[a] > self.max[a]:
                raise WorkspaceError(f"box min > max on axis {AXES[a]}")

    def contains(self, p: Point) -> bool:
        return all(self.min[a] <= p[a] <= self.max[a] for a in range(3))

    def aabb(self) -> tuple[Point, Point]:
        return self.min, self.max

    def is_degenerate(self) -> bool:
        return any(self.min[a] == self.max[a] for a in range(3))

    def to_json(self) -> dict:
        return {"type": "box", "min": list(self.min), "max": list(self.max)}


@dataclass(frozen=True)
class Cylinder:
    """Axis-aligned cylinder; ``center`` is the centroid, extent ±height/2 along ``axis``."""

    center: Point
    axis: str
    radius: float
    height: float

    def validate(self) -> None:
        if self.axis not in AXES:
            raise WorkspaceError(f"cylinder axis must be one of {AXES}")
        if not all(math.isfinite(c) for c in self.center):
            raise WorkspaceError("cylinder center must be finite")
        if self.radius < 0 or self.height < 0:
            raise WorkspaceError("cylinder radius and height must be non-negative")

    def contains(self, p: Point) -> bool:
        ax = AXES.index(self.axis)
        radial = [a for a in range(3) if a != ax]
        if abs(p[ax] - self.center[ax]) > self.height / 2.0:
            return False
        d2 = sum((p[a] - self.center[a]) ** 2 for a in radial)
        return d2 <= self.radius**2

    def aabb(self) -> tuple[Point, Point]:
        ax = AXES.index(self.axis)
        lo = list(self.center)
        hi = list(self.center)
        for a in range(3):
            if a == ax:
                lo[a] -= self.height / 2.0
                hi[a] += self.height / 2.0
            else:
                lo[a] -= self.radius
                hi[a] += self.radius
        return tuple(lo), tuple(hi)

    def is_degenerate(self) -> bool:
        return self.radius == 0 or self.height == 0

    def to_json(self) -> dict:
        return {
            "type": "cylinder",
            "center": list(self.center),
            "axis": self.axis,
            "radius": self.radius,
            "height": self.height,
        }


@dataclass(frozen=True)
class Sphere:
    center: Point
    radius: float

    def validate(self) -> None:
        if not all(math.isfinite(c) for c in self.center):
            raise WorkspaceError("sphere center must be finite")
        if self.radius < 0:
            raise WorkspaceError("sphere radius must be non-negative")

    def contains(self, p: Point) -> bool:
        return sum((p[a] - self.center[a]) ** 2 for a in range(3)) <= self.radius**2

    def aabb(self) -> tuple[Point, Point]:
        r = self.radius
        return (
            tuple(c - r for c in self.center),
            tuple(c + r for c in self.center),
        )

    def is_degenerate(self) -> bool:
        return self.radius == 0

    def to_json(self) -> dict:
        return {"type": "sphere", "center": list(self.center), "radius": self.radius}


Shape = Union[Box, Cylinder, Sphere]


def _point3(value) -> Point:
    point = tuple(float(c) for c in value)
    if len(point) != 3:
        raise WorkspaceError(f"expected an [x, y, z] triple, got {value!r}")
    return point


def shape_from_json(doc: dict) -> Shape:
    """Build a shape from its workspace-JSON form."""
    if not isinstance(doc, dict) or "type" not in doc:
        raise WorkspaceError("shape must be an object with a 'type' field")
    kind = doc["type"]
    try:
        if kind == "box":
            shape: Shape = Box(_point3(doc["min"]), _point3(doc["max"]))
        elif kind == "cylinder":
            shape = Cylinder(
                _point3(doc["center"]),
                str(doc["axis"]).lower(),
                float(doc["radius"]),
                float(doc["height"]),
            )
        elif kind == "sphere":
            shape = Sphere(_point3(doc["center"]), float(doc["radius"]))
        else:
            raise WorkspaceError(f"unknown shape type {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise WorkspaceError(f"malformed {kind} shape: {exc}") from exc
    shape.validate()
    return shape


def discretize_shape(shape: Shape, grid: GridScale) -> VoxelSet:
    """Voxels whose centers lie inside or on the shape boundary.

    Degenerate (zero-extent) shapes get a diagnostic warning; their voxel
    set is whatever center-sampling yields (possibly empty).
    """
    shape.validate()
    if shape.is_degenerate():
        warnings.warn(
            f"degenerate {type(shape).__name__.lower()} has zero extent",
            DiagnosticWarning,
            stacklevel=2,
        )
    lo, hi = shape.aabb()
    ranges = []
    for a in range(3):
        ranges.append(range(grid.to_voxel(lo[a]) - 1, grid.to_voxel(hi[a]) + 2))
    out = set()
    for ix in ranges[0]:
        for iy in ranges[1]:
            for iz in ranges[2]:
                if shape.contains((ix * grid.resolution_mm, iy * grid.resolution_mm, iz * grid.resolution_mm)):
                    out.add((ix, iy, iz))
    return frozenset(out)
