"""Voxel set primitives: Minkowski sums, Chebyshev balls, dilation.

A voxel is an integer lattice coordinate; a voxel set is a plain frozenset
of ``(x, y, z)`` tuples so set algebra (union, intersection, difference)
comes straight from Python.
"""

from __future__ import annotations

from typing import Iterable, Tuple

Voxel = Tuple[int, int, int]
VoxelSet = frozenset  # frozenset[Voxel]

IntBox = Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]


def voxel_set(coords: Iterable[Voxel]) -> VoxelSet:
    """Freeze an iterable of coordinates into a voxel set."""
    return frozenset((int(x), int(y), int(z)) for x, y, z in coords)


def translate(v: VoxelSet, offset: Voxel) -> VoxelSet:
    """Shift every voxel by ``offset``."""
    ox, oy, oz = offset
    return frozenset((x + ox, y + oy, z + oz) for x, y, z in v)


def minkowski_sum(a: VoxelSet, b: VoxelSet) -> VoxelSet:
    """Pointwise sum set {p + q | p in a, q in b}.

    Commutative and associative; empty operand annihilates.
    """
    if not a or not b:
        return frozenset()
    # Iterate the larger set in the inner loop so tuple creation stays tight.
    if len(a) < len(b):
        a, b = b, a
    out = set()
    for bx, by, bz in b:
        for ax, ay, az in a:
            out.add((ax + bx, ay + by, az + bz))
    return frozenset(out)


def chebyshev_ball(radius: int) -> VoxelSet:
    """Discrete L-infinity ball: all voxels with max(|x|,|y|,|z|) <= radius.

    Cardinality is (2*radius + 1) ** 3.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    r = range(-radius, radius + 1)
    return frozenset((x, y, z) for x in r for y in r for z in r)


def dilate(v: VoxelSet, radius: int) -> VoxelSet:
    """Chebyshev dilation of ``v`` by ``radius``.

    Equal to minkowski_sum(v, chebyshev_ball(radius)) but computed as a
    direct neighbourhood expansion.
    """
    if radius == 0:
        return frozenset(v)
    r = range(-radius, radius + 1)
    offsets = [(dx, dy, dz) for dx in r for dy in r for dz in r]
    out = set()
    for x, y, z in v:
        for dx, dy, dz in offsets:
            out.add((x + dx, y + dy, z + dz))
    return frozenset(out)


def bounding_box(v: VoxelSet) -> IntBox:
    """Tightest axis-aligned integer box containing ``v``; ``v`` must be non-empty."""
    if not v:
        raise ValueError("bounding_box of an empty voxel set is undefined")
    xs = [c[0] for c in v]
    ys = [c[1] for c in v]
    zs = [c[2] for c in v]
    return ((min(xs), max(xs)), (min(ys), max(ys)), (min(zs), max(zs)))


def box_voxels(box: IntBox) -> VoxelSet:
    """All voxels inside an inclusive integer box."""
    (x0, x1), (y0, y1), (z0, z1) = box
    return frozenset(
        (x, y, z)
        for x in range(x0, x1 + 1)
        for y in range(y0, y1 + 1)
        for z in range(z0, z1 + 1)
    )


def dump(v: VoxelSet) -> str:
    """Debug serialization: sorted 'x y z' lines, one voxel per line."""
    return "\n".join(f"{x} {y} {z}" for x, y, z in sorted(v))
