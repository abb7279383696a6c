"""The spatial heap: a finite partial map from voxel coordinates to occupancy.

Only non-Empty voxels are stored; unmapped in-bounds coordinates read as
Empty and anything outside the machine-limit box reads as Environment, so
machine-limit violations surface as ordinary disjointness failures.  All
updates are persistent: operations return new heaps and never mutate their
inputs.  Internally one voxel set is kept per stored status, which makes
per-status domain queries constant-time; untouched sets are shared
structurally between heap versions.
"""

from __future__ import annotations

from enum import Enum
from typing import Dict, Iterable

from .errors import AllocationFault, UnionFault
from .voxel import IntBox, Voxel, VoxelSet


class Occupancy(Enum):
    TOOL = "Tool"
    ENVIRONMENT = "Environment"
    STOCK = "Stock"
    EMPTY = "Empty"

    def __str__(self) -> str:  # used in reports and debug dumps
        return self.value


_STORED = (Occupancy.TOOL, Occupancy.ENVIRONMENT, Occupancy.STOCK)

# Used when a conflict set spans several statuses: report the most severe.
SEVERITY = (Occupancy.ENVIRONMENT, Occupancy.STOCK, Occupancy.TOOL, Occupancy.EMPTY)


class SpatialHeap:
    """Immutable mapping from voxels to occupancy over a bounded machine box."""

    __slots__ = ("_sets", "bounds")

    def __init__(
        self,
        bounds: IntBox,
        sets: Dict[Occupancy, VoxelSet] | None = None,
    ):
        self.bounds = bounds
        base = {s: frozenset() for s in _STORED}
        if sets:
            base.update({s: frozenset(v) for s, v in sets.items()})
        self._sets: Dict[Occupancy, VoxelSet] = base

    # -- queries ---------------------------------------------------------

    def domain(self) -> VoxelSet:
        out: frozenset = frozenset()
        for s in _STORED:
            out |= self._sets[s]
        return out

    def domain_of(self, status: Occupancy) -> VoxelSet:
        if status is Occupancy.EMPTY:
            raise ValueError("Empty voxels are implicit; they have no stored domain")
        return self._sets[status]

    def in_bounds(self, c: Voxel) -> bool:
        (x0, x1), (y0, y1), (z0, z1) = self.bounds
        return x0 <= c[0] <= x1 and y0 <= c[1] <= y1 and z0 <= c[2] <= z1

    def status_of(self, c: Voxel) -> Occupancy:
        for s in _STORED:
            if c in self._sets[s]:
                return s
        return Occupancy.EMPTY if self.in_bounds(c) else Occupancy.ENVIRONMENT

    def partition_by_status(self, coords: VoxelSet) -> Dict[Occupancy, VoxelSet]:
        """Split ``coords`` by status_of; parts are disjoint and exhaustive."""
        parts: Dict[Occupancy, set] = {s: set() for s in Occupancy}
        for c in coords:
            parts[self.status_of(c)].add(c)
        return {s: frozenset(v) for s, v in parts.items()}

    def out_of_bounds(self, coords: VoxelSet) -> VoxelSet:
        (x0, x1), (y0, y1), (z0, z1) = self.bounds
        return frozenset(
            c
            for c in coords
            if not (x0 <= c[0] <= x1 and y0 <= c[1] <= y1 and z0 <= c[2] <= z1)
        )

    # -- algebra ---------------------------------------------------------

    def disjoint(self, other: "SpatialHeap") -> bool:
        return not any(self._sets[a] & other._sets[b] for a in _STORED for b in _STORED)

    def disjoint_union(self, other: "SpatialHeap") -> "SpatialHeap":
        if self.bounds != other.bounds:
            raise ValueError("disjoint_union requires matching machine bounds")
        inter: frozenset = frozenset()
        for a in _STORED:
            for b in _STORED:
                inter |= self._sets[a] & other._sets[b]
        if inter:
            raise UnionFault(inter)
        merged = {s: self._sets[s] | other._sets[s] for s in _STORED}
        return SpatialHeap(self.bounds, merged)

    def alloc(self, coords: Iterable[Voxel], status: Occupancy) -> "SpatialHeap":
        """Allocate every coordinate to ``status``; coordinates must be fresh.

        Allocating Empty is modelled as absence: freshness is still checked
        but nothing is stored (status_of already reads Empty there).
        """
        coords = frozenset(coords)
        overlap: frozenset = frozenset()
        for s in _STORED:
            overlap |= coords & self._sets[s]
        if overlap:
            raise AllocationFault(overlap)
        if status is Occupancy.EMPTY or not coords:
            return SpatialHeap(self.bounds, self._sets)
        sets = dict(self._sets)
        sets[status] = sets[status] | coords
        return SpatialHeap(self.bounds, sets)

    def free(self, coords: Iterable[Voxel]) -> "SpatialHeap":
        """Deallocate coordinates (they read as Empty/Environment afterwards)."""
        coords = frozenset(coords)
        sets = dict(self._sets)
        for s in _STORED:
            if sets[s] & coords:
                sets[s] = sets[s] - coords
        return SpatialHeap(self.bounds, sets)

    # -- plumbing --------------------------------------------------------

    def __len__(self) -> int:
        return sum(len(self._sets[s]) for s in _STORED)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpatialHeap):
            return NotImplemented
        return self.bounds == other.bounds and self._sets == other._sets

    def __repr__(self) -> str:
        return f"SpatialHeap(bounds={self.bounds}, cells={len(self)})"

    def dump(self) -> str:
        """Debug serialization: sorted 'x y z status' lines."""
        rows = []
        for s in _STORED:
            rows.extend((c, s) for c in self._sets[s])
        rows.sort(key=lambda r: r[0])
        return "\n".join(f"{x} {y} {z} {s}" for (x, y, z), s in rows)


def most_severe(statuses: Iterable[Occupancy]) -> Occupancy:
    """Pick the most safety-relevant status (Environment > Stock > Tool)."""
    present = set(statuses)
    for s in SEVERITY:
        if s in present:
            return s
    raise ValueError("most_severe of no statuses")
