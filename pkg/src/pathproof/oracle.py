"""Brute-force dense-grid collision and material-removal simulator.

Ground truth for the prover's soundness tests and the CLI --cross-check
flag.  Deliberately slow and simple: the continuous trajectory is sampled
at quarter-voxel steps and the tool cylinder is stamped around every
sample, so it shares no geometry code with the discretizer beyond the
domain types.  Out-of-limit space counts as Environment, mirroring the
heap's read semantics.

Two asymmetries keep disagreements one-directional (the verifier must
always be the stricter side):

* The sweep is expanded by the deviation budget net of the one-voxel
  discretization allowance (eps_voxels - 1): the verifier's margin pays
  for endpoint rounding and supercover slop first, and only the remainder
  is a physical-deviation guarantee.
* Stock bookkeeping removes a two-voxel-inflated swath, so the simulator
  never reports phantom stock that the padded heap model already consumed.
  Collision checks always use the un-inflated sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import GridTooLargeError, UnknownToolError
from .gcode import GCodeCommand, Kind, MachineState
from .heap import Occupancy
from .voxel import VoxelSet
from .workspace import WorkspaceTopology, build_initial_heap

Point = Tuple[float, float, float]

MAX_GRID_CELLS = 64**3
MAX_WORK_CELLS = 4 * MAX_GRID_CELLS

EMPTY, STOCK, ENV = 0, 1, 2


@dataclass
class DenseGrid:
    """Status array over the machine-limit voxel box."""

    origin: Tuple[int, int, int]
    cells: np.ndarray  # int8, indexed [x - ox, y - oy, z - oz]

    def stock_voxels(self) -> VoxelSet:
        ox, oy, oz = self.origin
        return frozenset(
            (int(x) + ox, int(y) + oy, int(z) + oz)
            for x, y, z in zip(*np.nonzero(self.cells == STOCK))
        )


@dataclass
class SimulationResult:
    collisions: List[Tuple[int, VoxelSet]] = field(default_factory=list)
    final_grid: Optional[DenseGrid] = None

    @property
    def clean(self) -> bool:
        return not self.collisions


def _build_grid(w: WorkspaceTopology) -> DenseGrid:
    bounds = w.voxel_bounds()
    extents = [hi - lo + 1 for lo, hi in bounds]
    total = extents[0] * extents[1] * extents[2]
    if total > MAX_GRID_CELLS:
        raise GridTooLargeError(
            f"workspace is {total} voxels; the dense oracle is capped at {MAX_GRID_CELLS}"
        )
    cells = np.zeros(extents, dtype=np.int8)
    origin = tuple(lo for lo, _ in bounds)
    heap = build_initial_heap(w)
    for (x, y, z) in heap.domain_of(Occupancy.ENVIRONMENT):
        cells[x - origin[0], y - origin[1], z - origin[2]] = ENV
    for (x, y, z) in heap.domain_of(Occupancy.STOCK):
        cells[x - origin[0], y - origin[1], z - origin[2]] = STOCK
    return DenseGrid(origin, cells)


def _inflate(mask: np.ndarray, radius: int) -> np.ndarray:
    """Chebyshev (box) dilation via sequential 1-D dilations per axis."""
    if radius == 0:
        return mask
    out = mask
    for axis in range(3):
        acc = out.copy()
        for shift in range(1, radius + 1):
            fwd = tuple(slice(shift, None) if a == axis else slice(None) for a in range(3))
            back = tuple(slice(None, -shift) if a == axis else slice(None) for a in range(3))
            acc[fwd] |= out[back]
            acc[back] |= out[fwd]
        out = acc
    return out


class _WorkBox:
    """Boolean scratch volume covering the machine box plus a sweep's reach."""

    def __init__(self, grid: DenseGrid, samples: List[Point], r_vox: float, len_vox: float, margin: int):
        gx, gy, gz = grid.origin
        nx, ny, nz = grid.cells.shape
        lo = [gx, gy, gz]
        hi = [gx + nx - 1, gy + ny - 1, gz + nz - 1]
        for s in samples:
            reach = (r_vox, r_vox, 0.0)
            for a in range(3):
                lo[a] = min(lo[a], math.floor(s[a] - reach[a]) - margin)
                top = s[a] + reach[a] + (len_vox if a == 2 else 0.0)
                hi[a] = max(hi[a], math.ceil(top) + margin)
        total = (hi[0] - lo[0] + 1) * (hi[1] - lo[1] + 1) * (hi[2] - lo[2] + 1)
        if total > MAX_WORK_CELLS:
            raise GridTooLargeError(
                f"sweep extends over {total} voxels; the dense oracle is capped at {MAX_WORK_CELLS}"
            )
        self.origin = tuple(lo)
        self.shape = tuple(hi[a] - lo[a] + 1 for a in range(3))
        self.grid = grid

    def blank(self) -> np.ndarray:
        return np.zeros(self.shape, dtype=bool)

    def stamp(self, out: np.ndarray, sample: Point, r_vox: float, len_vox: float) -> None:
        """Mark voxels whose centers lie inside the tool cylinder at ``sample``."""
        ox, oy, oz = self.origin
        sx, sy, sz = sample
        x0 = math.ceil(sx - r_vox - 1e-9)
        x1 = math.floor(sx + r_vox + 1e-9)
        y0 = math.ceil(sy - r_vox - 1e-9)
        y1 = math.floor(sy + r_vox + 1e-9)
        z0 = math.ceil(sz - 1e-9)
        z1 = math.floor(sz + len_vox + 1e-9)
        xs = np.arange(x0, x1 + 1)
        ys = np.arange(y0, y1 + 1)
        if xs.size == 0 or ys.size == 0 or z0 > z1:
            return
        disk = (xs[:, None] - sx) ** 2 + (ys[None, :] - sy) ** 2 <= r_vox**2 + 1e-9
        sub = out[np.ix_(xs - ox, ys - oy, np.arange(z0 - oz, z1 - oz + 1))]
        out[np.ix_(xs - ox, ys - oy, np.arange(z0 - oz, z1 - oz + 1))] = sub | disk[:, :, None]

    def machine_slice(self) -> Tuple[slice, slice, slice]:
        off = tuple(self.grid.origin[a] - self.origin[a] for a in range(3))
        n = self.grid.cells.shape
        return tuple(slice(off[a], off[a] + n[a]) for a in range(3))

    def in_machine_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        mask[self.machine_slice()] = True
        return mask

    def to_voxels(self, mask: np.ndarray) -> VoxelSet:
        ox, oy, oz = self.origin
        return frozenset(
            (int(x) + ox, int(y) + oy, int(z) + oz) for x, y, z in zip(*np.nonzero(mask))
        )


def _forbidden_hits(
    work: _WorkBox, swept: np.ndarray, statuses: Tuple[int, ...]
) -> np.ndarray:
    """Swept voxels that are out of machine bounds or carry a listed status."""
    hits = swept & ~work.in_machine_mask()
    grid_hits = np.zeros_like(swept)
    sl = work.machine_slice()
    inside = swept[sl]
    cells = work.grid.cells
    status_mask = np.zeros_like(cells, dtype=bool)
    for s in statuses:
        status_mask |= cells == s
    grid_hits[sl] = inside & status_mask
    return hits | grid_hits


def simulate(
    cmds: List[GCodeCommand],
    w: WorkspaceTopology,
    start: MachineState,
) -> SimulationResult:
    """Dense simulation mirroring the prover's side conditions step by step.

    G00 sweeps must avoid Environment and Stock; G01 sweeps (outside the
    start volume) must avoid Environment; traversed Stock is removed.
    Collisions are recorded per command index (-1 for the initial tool
    placement) and the simulation stops at the first one, like the prover.
    """
    grid = _build_grid(w)
    result = SimulationResult()
    res = w.grid_resolution_mm
    eps = max(w.epsilon_voxels - 1, 0)
    pos = start.position
    tool_id = start.active_tool
    if tool_id is None and len(w.tools) == 1:
        tool_id = next(iter(w.tools))

    def placement_hits(at_mm: Point, tid: str) -> VoxelSet:
        tool = w.tool(tid)
        r_vox, len_vox = tool.radius_mm / res, tool.length_mm / res
        sample = tuple(c / res for c in at_mm)
        work = _WorkBox(grid, [sample], r_vox, len_vox, eps + 3)
        mask = work.blank()
        work.stamp(mask, sample, r_vox, len_vox)
        mask = _inflate(mask, eps)
        return work.to_voxels(_forbidden_hits(work, mask, (ENV, STOCK)))

    if tool_id is not None:
        hits = placement_hits(pos, tool_id)
        if hits:
            result.collisions.append((-1, hits))
            result.final_grid = grid
            return result

    for index, cmd in enumerate(cmds):
        if cmd.kind is Kind.PASSIVE:
            continue
        if cmd.kind is Kind.TOOL_CHANGE:
            if cmd.tool not in w.tools:
                raise UnknownToolError(f"tool {cmd.tool!r} is not in the tool table")
            tool_id = cmd.tool
            hits = placement_hits(pos, tool_id)
            if hits:
                result.collisions.append((index, hits))
                break
            continue
        if tool_id is None:
            raise UnknownToolError("no active tool at a motion command")

        tool = w.tool(tool_id)
        r_vox, len_vox = tool.radius_mm / res, tool.length_mm / res
        p0 = tuple(c / res for c in pos)
        p1 = tuple(c / res for c in cmd.target)
        length = max(abs(p1[a] - p0[a]) for a in range(3))
        steps = max(1, int(math.ceil(length / 0.25)))
        samples = [
            tuple(p0[a] + (k / steps) * (p1[a] - p0[a]) for a in range(3))
            for k in range(steps + 1)
        ]
        work = _WorkBox(grid, samples, r_vox, len_vox, eps + 3)
        swept = work.blank()
        for sample in samples:
            work.stamp(swept, sample, r_vox, len_vox)
        swept = _inflate(swept, eps)

        if cmd.kind is Kind.RAPID:
            forbidden = _forbidden_hits(work, swept, (ENV, STOCK))
        else:
            start_mask = work.blank()
            work.stamp(start_mask, p0, r_vox, len_vox)
            start_mask = _inflate(start_mask, eps)
            forbidden = _forbidden_hits(work, swept & ~start_mask, (ENV,))
        if forbidden.any():
            result.collisions.append((index, work.to_voxels(forbidden)))
            break

        if cmd.kind is Kind.LINEAR:
            # Two-voxel-inflated removal: see module docstring.
            removal = _inflate(swept.copy(), 2)[work.machine_slice()]
            grid.cells[removal & (grid.cells == STOCK)] = EMPTY
        pos = cmd.target

    result.final_grid = grid
    return result
