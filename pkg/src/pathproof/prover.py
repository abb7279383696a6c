"""Symbolic execution of G-code against the spatial heap.

Each motion is checked as a disjointness side condition and, when it
holds, applied as a heap mutation: rapids relocate the tool through
provably free space, linear moves may additionally consume stock.  The
prover halts at the first failed side condition and reports the conflict
set with its minimal bounding box.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple, Union

from . import sweep
from .errors import (
    DiagnosticWarning,
    FramePreconditionError,
    ProverInvariantError,
    UnknownToolError,
)
from .gcode import GCodeCommand, Kind, MachineState
from .grid import GridScale
from .heap import Occupancy, SpatialHeap
from .voxel import VoxelSet, bounding_box
from .workspace import WorkspaceTopology, build_initial_heap

MmBounds = Tuple[Tuple[float, float], Tuple[float, float], Tuple[float, float]]
Point = Tuple[float, float, float]


@dataclass(frozen=True)
class ConflictReport:
    """Payload of a spatial data race: what collided, where, on which line."""

    source_line: int
    line_no: Optional[int]
    command_text: str
    v_conflict: VoxelSet
    conflicting_status: Occupancy
    bounds_voxel: Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]
    bounds_mm: MmBounds
    window: Tuple[str, str] = ("N000", "N005")

    @staticmethod
    def build(
        cmd: GCodeCommand,
        v_conflict: VoxelSet,
        status: Occupancy,
        grid: GridScale,
    ) -> "ConflictReport":
        if not v_conflict:
            raise ProverInvariantError("conflict report with an empty conflict set")
        box = bounding_box(v_conflict)
        mm = tuple((grid.to_mm(lo), grid.to_mm(hi)) for lo, hi in box)
        return ConflictReport(
            source_line=cmd.source_line,
            line_no=cmd.line_no,
            command_text=cmd.text,
            v_conflict=v_conflict,
            conflicting_status=status,
            bounds_voxel=box,
            bounds_mm=mm,
        )


@dataclass(frozen=True)
class ProofState:
    heap: SpatialHeap
    machine: MachineState
    step_index: int = 0


@dataclass(frozen=True)
class StepStat:
    source_line: int
    line_no: Optional[int]
    kind: str
    footprint_size: int
    stock_removed: int


@dataclass(frozen=True)
class TraceEntry:
    """One evaluated command: its volume, state transition and verdict."""

    cmd: GCodeCommand
    footprint: Optional[sweep.SweptFootprint]  # None for tool mounts/changes
    volume: VoxelSet  # v_path, or the mounted tool volume
    before: ProofState
    after: Optional[ProofState]  # None when this step faulted
    stock_removed: VoxelSet
    conflict: Optional[ConflictReport]


@dataclass(frozen=True)
class ProofOutcome:
    """Verified with a final state, or Refuted with a conflict; never both."""

    verified: bool
    steps: int
    final_state: Optional[ProofState] = None
    conflict: Optional[ConflictReport] = None
    step_stats: List[StepStat] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.verified == (self.conflict is not None):
            raise ProverInvariantError("outcome must be exactly one of Verified/Refuted")


CheckResult = Union[ProofState, ConflictReport]


def _tool_domain(heap: SpatialHeap) -> VoxelSet:
    return heap.domain_of(Occupancy.TOOL)


def _box_inside(inner, outer) -> bool:
    return all(outer[a][0] <= inner[a][0] and inner[a][1] <= outer[a][1] for a in range(3))


def _escaped(heap: SpatialHeap, coords: VoxelSet, bbox=None) -> VoxelSet:
    """Coordinates outside machine bounds (they read as Environment)."""
    if bbox is not None and _box_inside(bbox, heap.bounds):
        return frozenset()
    return heap.out_of_bounds(coords)


def check_g00(fp: sweep.SweptFootprint, state: ProofState, grid: GridScale) -> CheckResult:
    """Rapid rule: the whole footprint must avoid Environment and Stock."""
    if _tool_domain(state.heap) != fp.v_start:
        raise ProverInvariantError("tool domain does not match the rapid's start volume")
    heap = state.heap
    env_hits = (heap.domain_of(Occupancy.ENVIRONMENT) & fp.v_path) | _escaped(
        heap, fp.v_path, fp.bbox
    )
    stock_hits = heap.domain_of(Occupancy.STOCK) & fp.v_path
    if env_hits or stock_hits:
        status = Occupancy.ENVIRONMENT if env_hits else Occupancy.STOCK
        return ConflictReport.build(fp.command, env_hits | stock_hits, status, grid)
    heap = heap.free(fp.v_start).alloc(fp.v_final, Occupancy.TOOL)
    machine = replace(state.machine, position=fp.command.target)
    return ProofState(heap, machine, state.step_index + 1)


def check_g01(fp: sweep.SweptFootprint, state: ProofState, grid: GridScale) -> CheckResult:
    """Linear rule: outside its start volume the path may only touch Stock or Empty.

    On success traversed stock becomes Empty, the trailing tool volume is
    deallocated and the tool is re-allocated at the final position.
    """
    if _tool_domain(state.heap) != fp.v_start:
        raise ProverInvariantError("tool domain does not match the cut's start volume")
    heap = state.heap
    body = fp.v_path - fp.v_start
    env_hits = (heap.domain_of(Occupancy.ENVIRONMENT) & body) | _escaped(heap, body, fp.bbox)
    # Foreign Tool voxels cannot arise in single-tool programs; checked anyway.
    tool_hits = heap.domain_of(Occupancy.TOOL) & body
    if env_hits or tool_hits:
        status = Occupancy.ENVIRONMENT if env_hits else Occupancy.TOOL
        return ConflictReport.build(fp.command, env_hits | tool_hits, status, grid)
    removed = heap.domain_of(Occupancy.STOCK) & fp.v_path
    heap = heap.free(removed).free(fp.v_start).alloc(fp.v_final, Occupancy.TOOL)
    machine = replace(state.machine, position=fp.command.target)
    return ProofState(heap, machine, state.step_index + 1)


def _translated_tool_volume(
    w: WorkspaceTopology, tool_id: str, pos_mm: Point
) -> VoxelSet:
    grid = w.grid
    pos = tuple(grid.to_voxel(c) for c in pos_mm)
    local = sweep.dilated_tool_volume(w.tool(tool_id), grid, w.epsilon_voxels)
    return frozenset((x + pos[0], y + pos[1], z + pos[2]) for x, y, z in local)


def _place_tool(
    cmd: GCodeCommand, state: ProofState, volume: VoxelSet, grid: GridScale
) -> CheckResult:
    """Swap the tool volume at the current position, race-checking the new one."""
    heap = state.heap
    body = volume - _tool_domain(heap)
    env_hits = (heap.domain_of(Occupancy.ENVIRONMENT) & body) | _escaped(heap, body)
    stock_hits = heap.domain_of(Occupancy.STOCK) & body
    if env_hits or stock_hits:
        status = Occupancy.ENVIRONMENT if env_hits else Occupancy.STOCK
        return ConflictReport.build(cmd, env_hits | stock_hits, status, grid)
    heap = heap.free(_tool_domain(heap)).alloc(volume, Occupancy.TOOL)
    return ProofState(heap, state.machine, state.step_index)


def _neighbour_window(cmds: List[GCodeCommand], index: int) -> Tuple[str, str]:
    """N-number window named in the regeneration directive."""

    def label(n: int) -> str:
        return f"N{max(n, 0):03d}"

    this_n = cmds[index].line_no
    prev_n = next((c.line_no for c in reversed(cmds[:index]) if c.line_no is not None), None)
    next_n = next((c.line_no for c in cmds[index + 1 :] if c.line_no is not None), None)
    anchor = this_n if this_n is not None else 0
    lo = prev_n if prev_n is not None else max(anchor - 5, 0)
    hi = next_n if next_n is not None else anchor + 5
    return label(lo), label(hi)


def _resolve_tool(state: ProofState, w: WorkspaceTopology) -> str:
    tool_id = state.machine.active_tool
    if tool_id is not None:
        return tool_id
    if len(w.tools) == 1:
        only = next(iter(w.tools))
        warnings.warn(
            f"no tool selected before first motion; assuming {only}",
            DiagnosticWarning,
            stacklevel=3,
        )
        return only
    raise UnknownToolError(
        "no active tool at a motion command and the tool table is not a singleton"
    )


def prove_program(
    cmds: List[GCodeCommand],
    initial: ProofState,
    w: WorkspaceTopology,
    trace: Optional[List[TraceEntry]] = None,
) -> ProofOutcome:
    """Fold the proof rules over the command sequence, halting at the first fault.

    Passive commands are skipped; tool changes re-voxelize and must be
    allocatable in place.  Footprints of commands after a fault are never
    computed.  ``trace`` (when given) collects every evaluated step.
    """
    grid = w.grid
    state = initial
    stats: List[StepStat] = []

    def note(cmd, fp, volume, before, after, removed, conflict) -> None:
        if trace is not None:
            trace.append(TraceEntry(cmd, fp, volume, before, after, removed, conflict))

    def refuted(index: int, report: ConflictReport) -> ProofOutcome:
        report = replace(report, window=_neighbour_window(cmds, index))
        return ProofOutcome(
            verified=False, steps=state.step_index, conflict=report, step_stats=stats
        )

    for i, cmd in enumerate(cmds):
        if cmd.kind is Kind.PASSIVE:
            continue
        if cmd.kind is Kind.TOOL_CHANGE:
            volume = _translated_tool_volume(w, cmd.tool, state.machine.position)
            result = _place_tool(cmd, state, volume, grid)
            if isinstance(result, ConflictReport):
                note(cmd, None, volume, state, None, frozenset(), result)
                return refuted(i, result)
            new_state = ProofState(
                result.heap, replace(state.machine, active_tool=cmd.tool), result.step_index
            )
            note(cmd, None, volume, state, new_state, frozenset(), None)
            state = new_state
            continue

        # Motion command.
        tool_id = _resolve_tool(state, w)
        if state.machine.active_tool is None:
            # Mount the auto-selected tool at the current position first.
            volume = _translated_tool_volume(w, tool_id, state.machine.position)
            result = _place_tool(cmd, state, volume, grid)
            if isinstance(result, ConflictReport):
                note(cmd, None, volume, state, None, frozenset(), result)
                return refuted(i, result)
            new_state = ProofState(
                result.heap, replace(state.machine, active_tool=tool_id), result.step_index
            )
            note(cmd, None, volume, state, new_state, frozenset(), None)
            state = new_state

        fp = sweep.footprint(cmd, state.machine.position, w.tool(tool_id), w)
        before = state
        check = check_g00 if cmd.kind is Kind.RAPID else check_g01
        result = check(fp, state, grid)
        if isinstance(result, ConflictReport):
            note(cmd, fp, fp.v_path, before, None, frozenset(), result)
            return refuted(i, result)
        state = result
        removed = frozenset()
        if cmd.kind is Kind.LINEAR:
            removed = before.heap.domain_of(Occupancy.STOCK) & fp.v_path
        stats.append(
            StepStat(
                source_line=cmd.source_line,
                line_no=cmd.line_no,
                kind=cmd.kind.value,
                footprint_size=len(fp.v_path),
                stock_removed=len(removed),
            )
        )
        note(cmd, fp, fp.v_path, before, state, removed, None)

    return ProofOutcome(verified=True, steps=state.step_index, final_state=state, step_stats=stats)


def initial_proof_state(
    w: WorkspaceTopology,
    start_mm: Optional[Point] = None,
    active_tool: Optional[str] = None,
    extra_environment: VoxelSet = frozenset(),
) -> Tuple[ProofState, Optional[ConflictReport]]:
    """Build the starting proof state; the tool (if known) is allocated at start.

    Returns the state plus a conflict report when the initial placement
    itself is a data race (reported against a synthetic line 0).
    """
    if start_mm is None:
        start_mm = (0.0, 0.0, w.safe_z_mm)
    heap = build_initial_heap(w)
    if extra_environment:
        heap = heap.alloc(extra_environment, Occupancy.ENVIRONMENT)
    machine = MachineState(position=start_mm, active_tool=active_tool)
    state = ProofState(heap, machine, 0)
    if active_tool is None:
        return state, None
    volume = _translated_tool_volume(w, active_tool, start_mm)
    placement_cmd = GCodeCommand(
        kind=Kind.PASSIVE,
        source_line=0,
        text=f"(initial tool placement at X{start_mm[0]:g} Y{start_mm[1]:g} Z{start_mm[2]:g})",
    )
    result = _place_tool(placement_cmd, state, volume, w.grid)
    if isinstance(result, ConflictReport):
        return state, result
    return ProofState(result.heap, machine, 0), None


def frame_check(
    cmds: List[GCodeCommand],
    w: WorkspaceTopology,
    extra_env: VoxelSet,
    start_mm: Optional[Point] = None,
    active_tool: Optional[str] = None,
) -> ProofOutcome:
    """Executable frame rule: re-prove with a disjoint Environment frame added.

    The frame must be disjoint from every volume the program evaluates
    (footprints, tool mounts, the initial tool volume); a violation raises
    FramePreconditionError so property tests can discard the case.  The
    returned outcome must match the unframed proof exactly.
    """
    touched: set = set()
    if active_tool is not None or len(w.tools) == 1:
        tool_id = active_tool or next(iter(w.tools))
        start = start_mm if start_mm is not None else (0.0, 0.0, w.safe_z_mm)
        touched |= _translated_tool_volume(w, tool_id, start)

    state, report = initial_proof_state(w, start_mm, active_tool)
    if report is None:
        trace: List[TraceEntry] = []
        base = prove_program(cmds, state, w, trace=trace)
        for entry in trace:
            touched |= entry.volume
        if base.conflict is not None:
            touched |= base.conflict.v_conflict
    else:
        touched |= report.v_conflict

    if touched & extra_env:
        raise FramePreconditionError(
            f"frame overlaps {len(touched & extra_env)} evaluated voxel(s)"
        )

    framed_state, framed_report = initial_proof_state(
        w, start_mm, active_tool, extra_environment=extra_env
    )
    if framed_report is not None:
        return ProofOutcome(verified=False, steps=0, conflict=framed_report)
    return prove_program(cmds, framed_state, w)
