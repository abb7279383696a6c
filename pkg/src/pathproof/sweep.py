"""Swept-volume discretization: per-command footprints on the voxel lattice.

A motion's footprint is path (+) tool (+) margin, all discrete Minkowski
sums.  Linear moves use the supercover of the segment (every cell the
segment touches, conservative by construction); rapids use the full
axis-aligned box spanned by the endpoints because rapid trajectories are
controller-dependent.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .errors import DiagnosticWarning, ProverInvariantError
from .gcode import GCodeCommand, Kind
from .grid import GridScale
from .voxel import IntBox, Voxel, VoxelSet, box_voxels
from .workspace import ToolGeometry, WorkspaceTopology


@dataclass(frozen=True)
class SweptFootprint:
    """Dilated footprint of one motion plus the tool volumes at its endpoints."""

    v_start: VoxelSet
    v_final: VoxelSet
    v_path: VoxelSet
    command: GCodeCommand
    bbox: "IntBox" = ((0, -1), (0, -1), (0, -1))  # analytic hull of v_path


def path_box(p0: Voxel, p1: Voxel) -> VoxelSet:
    """Worst-case rapid envelope: every voxel in the box spanned by p0, p1."""
    box = tuple(
        (min(p0[a], p1[a]), max(p0[a], p1[a])) for a in range(3)
    )
    return box_voxels(box)


def path_lin(p0: Voxel, p1: Voxel) -> VoxelSet:
    """Supercover of the segment between two voxel centers.

    Includes every voxel whose closed unit cell the segment intersects, so
    corner and edge touches pull in all adjacent cells.  Crossing times are
    exact rationals, which makes tie detection (and therefore symmetry)
    exact as well.
    """
    if p0 == p1:
        return frozenset({p0})
    delta = tuple(p1[a] - p0[a] for a in range(3))

    # Crossing events: t -> set of axes whose half-integer boundary is hit.
    events: Dict[Fraction, List[int]] = {}
    for a in range(3):
        d = delta[a]
        if d == 0:
            continue
        step = 1 if d > 0 else -1
        for k in range(abs(d)):
            # boundary between cell p0[a] + k*step and the next one
            boundary = Fraction(2 * (p0[a] + k * step) + step, 2)
            t = Fraction(boundary - p0[a], d)
            events.setdefault(t, []).append(a)

    current = list(p0)
    out = {p0}
    for t in sorted(events):
        axes = events[t]
        if len(axes) == 1:
            a = axes[0]
            current[a] += 1 if delta[a] > 0 else -1
            out.add(tuple(current))
        else:
            # The segment passes exactly through a cell corner or edge:
            # every cell incident to that point is touched.
            steps = [(a, 1 if delta[a] > 0 else -1) for a in axes]
            for a, s in steps:
                bumped = list(current)
                bumped[a] += s
                out.add(tuple(bumped))
            for a, s in steps:
                current[a] += s
            out.add(tuple(current))
            if len(axes) == 3:
                for a, s in steps:
                    bumped = list(current)
                    bumped[a] -= s
                    out.add(tuple(bumped))
    if tuple(current) != p1:
        raise ProverInvariantError("supercover walk did not land on the endpoint")
    return frozenset(out)


def tool_disk(radius_mm: float, grid: GridScale) -> VoxelSet:
    """2D voxel disk of the cutter cross-section (z component always 0)."""
    r_vox = radius_mm / grid.resolution_mm
    span = int(math.floor(r_vox + 1e-9))
    disk = {
        (dx, dy, 0)
        for dx in range(-span, span + 1)
        for dy in range(-span, span + 1)
        if dx * dx + dy * dy <= r_vox * r_vox + 1e-9
    }
    return frozenset(disk)


def voxelize_tool(tool: ToolGeometry, grid: GridScale) -> VoxelSet:
    """Cylinder of the tool in tool-local coordinates.

    The controlled point (tool tip) is the local origin and the body
    extends in +Z for length_mm.  Voxels are center-sampled.
    """
    disk = tool_disk(tool.radius_mm, grid)
    if disk == {(0, 0, 0)} and tool.radius_mm < grid.resolution_mm / 2:
        warnings.warn(
            f"tool radius {tool.radius_mm} mm is below half a voxel; "
            "modelling it as a single-voxel column",
            DiagnosticWarning,
            stacklevel=2,
        )
    top = int(math.floor(tool.length_mm / grid.resolution_mm + 1e-9))
    return frozenset((x, y, z) for x, y, _ in disk for z in range(0, top + 1))


def _extrude_z(xy_set: VoxelSet, z_lo: int, z_hi: int) -> VoxelSet:
    return frozenset((x, y, z + dz) for x, y, z in xy_set for dz in range(z_lo, z_hi + 1))


def _dilate_xy(v: VoxelSet, disk: VoxelSet) -> VoxelSet:
    return frozenset((x + dx, y + dy, z) for x, y, z in v for dx, dy, _ in disk)


def _chebyshev_disk(radius: int) -> VoxelSet:
    r = range(-radius, radius + 1)
    return frozenset((dx, dy, 0) for dx in r for dy in r)


def dilated_tool_volume(tool: ToolGeometry, grid: GridScale, eps: int) -> VoxelSet:
    """V_tool (+) B_eps in tool-local coordinates.

    Computed structurally: the Chebyshev ball factors into an XY square and
    a Z interval, and the tool is a disk extruded in Z, so the sum is the
    (disk (+) square) extruded over the padded Z interval.  Equal to the
    literal pairwise Minkowski sum (property-tested), far cheaper.
    """
    disk = _dilate_xy(tool_disk(tool.radius_mm, grid), _chebyshev_disk(eps))
    top = int(math.floor(tool.length_mm / grid.resolution_mm + 1e-9))
    return _extrude_z(disk, -eps, top + eps)


def footprint(
    cmd: GCodeCommand,
    start_mm: Tuple[float, float, float],
    tool: ToolGeometry,
    w: WorkspaceTopology,
) -> SweptFootprint:
    """Full dilated footprint of a motion command starting at ``start_mm``.

    Rapids exploit their product structure: the endpoint box factors into
    an XY rectangle and a Z interval, so only the rectangle needs the disk
    dilation.  Equal to the generic sum composition (property-tested).
    """
    if not cmd.is_motion or cmd.target is None:
        raise ValueError("footprint is defined for resolved motion commands only")
    grid = w.grid
    eps = w.epsilon_voxels
    p0 = tuple(grid.to_voxel(c) for c in start_mm)
    p1 = tuple(grid.to_voxel(c) for c in cmd.target)

    disk = _dilate_xy(tool_disk(tool.radius_mm, grid), _chebyshev_disk(eps))
    top = int(math.floor(tool.length_mm / grid.resolution_mm + 1e-9))
    z_lo, z_hi = -eps, top + eps

    if cmd.kind is Kind.RAPID:
        x0, x1 = sorted((p0[0], p1[0]))
        y0, y1 = sorted((p0[1], p1[1]))
        zb0, zb1 = sorted((p0[2], p1[2]))
        rect = frozenset((x, y, 0) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1))
        dil_rect = _dilate_xy(rect, disk)
        v_path = frozenset(
            (x, y, z) for x, y, _ in dil_rect for z in range(zb0 + z_lo, zb1 + z_hi + 1)
        )
    else:
        path = path_lin(p0, p1)
        v_path = _extrude_z(_dilate_xy(path, disk), z_lo, z_hi)

    tool_vol = _extrude_z(disk, z_lo, z_hi)
    v_start = frozenset((x + p0[0], y + p0[1], z + p0[2]) for x, y, z in tool_vol)
    v_final = frozenset((x + p1[0], y + p1[1], z + p1[2]) for x, y, z in tool_vol)
    span = max(abs(dx) for dx, _, _ in disk)
    bbox = (
        (min(p0[0], p1[0]) - span, max(p0[0], p1[0]) + span),
        (min(p0[1], p1[1]) - span, max(p0[1], p1[1]) + span),
        (min(p0[2], p1[2]) + z_lo, max(p0[2], p1[2]) + z_hi),
    )
    return SweptFootprint(
        v_start=v_start, v_final=v_final, v_path=v_path, command=cmd, bbox=bbox
    )
