"""Workspace ingestion: continuous machine description to initial spatial heap.

The workspace document is a single JSON file (schema in the README).  All
lengths are millimetres.  Obstacles are padded by the safety margin before
discretization; the padded bounds are also what the generator context
document advertises.
"""

from __future__ import annotations

import json
import math
import re
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import DiagnosticWarning, UnknownToolError, WorkspaceError
from .grid import GridScale
from .heap import Occupancy, SpatialHeap
from .shapes import AXES, Shape, discretize_shape, shape_from_json
from .voxel import IntBox, VoxelSet, dilate

MmBox = Tuple[Tuple[float, float], Tuple[float, float], Tuple[float, float]]


@dataclass(frozen=True)
class ToolGeometry:
    """Cylindrical cutter aligned to +Z with its origin at the tool tip."""

    radius_mm: float
    length_mm: float
    kind: str = "Endmill"

    def validate(self) -> None:
        if not (self.radius_mm > 0 and math.isfinite(self.radius_mm)):
            raise WorkspaceError("tool radius_mm must be positive")
        if not (self.length_mm > 0 and math.isfinite(self.length_mm)):
            raise WorkspaceError("tool length_mm must be positive")


@dataclass(frozen=True)
class Obstacle:
    label: str
    shape: Shape


@dataclass(frozen=True)
class WorkspaceTopology:
    machine_limits: MmBox
    grid_resolution_mm: float
    epsilon_mm: float
    safe_z_mm: float
    tools: Dict[str, ToolGeometry]
    obstacles: List[Obstacle] = field(default_factory=list)
    stock: Optional[Shape] = None

    @property
    def grid(self) -> GridScale:
        return GridScale(self.grid_resolution_mm)

    @property
    def epsilon_voxels(self) -> int:
        return self.grid.epsilon_voxels(self.epsilon_mm)

    def tool(self, tool_id: str) -> ToolGeometry:
        try:
            return self.tools[tool_id]
        except KeyError:
            raise UnknownToolError(f"tool {tool_id!r} is not in the tool table") from None

    def voxel_bounds(self) -> IntBox:
        """Machine-limit box in voxels: coordinates whose centers are in-limit."""
        g = self.grid
        out = []
        for lo, hi in self.machine_limits:
            vlo = math.ceil(lo / g.resolution_mm - 1e-9)
            vhi = math.floor(hi / g.resolution_mm + 1e-9)
            out.append((int(vlo), int(vhi)))
        return tuple(out)


def normalize_tool_id(raw: str) -> str:
    """Canonical tool id: 'T' plus a two-digit (or wider) number."""
    m = re.fullmatch(r"[Tt]?0*(\d+)", raw.strip())
    if not m:
        raise WorkspaceError(f"bad tool id {raw!r}")
    return f"T{int(m.group(1)):02d}"


def _limits_from_json(doc: dict) -> MmBox:
    try:
        raw = doc["machine_limits"]
        limits = tuple((float(raw[a][0]), float(raw[a][1])) for a in AXES)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise WorkspaceError(f"malformed machine_limits: {exc}") from exc
    for a, (lo, hi) in zip(AXES, limits):
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise WorkspaceError(f"machine_limits.{a} must be finite")
        if lo >= hi:
            raise WorkspaceError(f"machine_limits.{a} must satisfy min < max")
    return limits


def _inside_limits(shape: Shape, limits: MmBox) -> bool:
    lo, hi = shape.aabb()
    return all(limits[a][0] <= lo[a] and hi[a] <= limits[a][1] for a in range(3))


def workspace_from_json(doc: dict, strict: bool = False) -> WorkspaceTopology:
    """Validate a parsed workspace document and build the topology."""
    if not isinstance(doc, dict):
        raise WorkspaceError("workspace document must be a JSON object")
    limits = _limits_from_json(doc)
    try:
        resolution = float(doc["grid_resolution_mm"])
        epsilon = float(doc["epsilon_mm"])
        safe_z = float(doc["safe_z_mm"])
    except (KeyError, TypeError, ValueError) as exc:
        raise WorkspaceError(f"missing or malformed scalar field: {exc}") from exc
    if not (resolution > 0 and math.isfinite(resolution)):
        raise WorkspaceError("grid_resolution_mm must be positive")
    if not (epsilon >= 0 and math.isfinite(epsilon)):
        raise WorkspaceError("epsilon_mm must be non-negative")
    if epsilon < resolution:
        msg = (
            f"epsilon_mm={epsilon} is below one voxel ({resolution} mm); "
            "center-sampled discretization is only sound with epsilon >= 1 voxel"
        )
        if strict:
            raise WorkspaceError(msg)
        warnings.warn(msg, DiagnosticWarning, stacklevel=2)

    tools: Dict[str, ToolGeometry] = {}
    for raw_id, spec in dict(doc.get("tools", {})).items():
        try:
            tool = ToolGeometry(
                float(spec["radius_mm"]),
                float(spec["length_mm"]),
                str(spec.get("kind", "Endmill")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise WorkspaceError(f"malformed tool {raw_id!r}: {exc}") from exc
        tool.validate()
        tools[normalize_tool_id(raw_id)] = tool

    obstacles: List[Obstacle] = []
    for i, entry in enumerate(doc.get("obstacles", [])):
        try:
            label = str(entry["label"])
            shape = shape_from_json(entry["shape"])
        except (KeyError, TypeError) as exc:
            raise WorkspaceError(f"malformed obstacle #{i}: {exc}") from exc
        if not _inside_limits(shape, limits):
            raise WorkspaceError(f"obstacle {label!r} extends beyond machine_limits")
        obstacles.append(Obstacle(label, shape))

    stock = None
    if doc.get("stock") is not None:
        stock = shape_from_json(doc["stock"])
        if not _inside_limits(stock, limits):
            raise WorkspaceError("stock extends beyond machine_limits")

    return WorkspaceTopology(
        machine_limits=limits,
        grid_resolution_mm=resolution,
        epsilon_mm=epsilon,
        safe_z_mm=safe_z,
        tools=tools,
        obstacles=obstacles,
        stock=stock,
    )


def load_workspace(path: str, strict: bool = False) -> WorkspaceTopology:
    """Load and validate a workspace JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise WorkspaceError(f"cannot read workspace file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise WorkspaceError(f"workspace file is not valid JSON: {exc}") from exc
    return workspace_from_json(doc, strict=strict)


def _clip_to_bounds(voxels: VoxelSet, bounds: IntBox) -> VoxelSet:
    (x0, x1), (y0, y1), (z0, z1) = bounds
    return frozenset(
        (x, y, z) for x, y, z in voxels if x0 <= x <= x1 and y0 <= y <= y1 and z0 <= z <= z1
    )


def build_initial_heap(w: WorkspaceTopology) -> SpatialHeap:
    """Discretize obstacles (padded) and stock into the starting heap.

    Environment wins over Stock where they overlap; out-of-bounds dilation
    spill is dropped because those coordinates already read as Environment.
    """
    grid = w.grid
    bounds = w.voxel_bounds()
    eps = w.epsilon_voxels
    env: set = set()
    for obstacle in w.obstacles:
        env |= dilate(discretize_shape(obstacle.shape, grid), eps)
    env = set(_clip_to_bounds(frozenset(env), bounds))
    heap = SpatialHeap(bounds).alloc(env, Occupancy.ENVIRONMENT)
    if w.stock is not None:
        stock = _clip_to_bounds(discretize_shape(w.stock, grid), bounds) - frozenset(env)
        heap = heap.alloc(stock, Occupancy.STOCK)
    return heap


def padded_obstacle_bounds(w: WorkspaceTopology, obstacle: Obstacle) -> MmBox:
    """Continuous AABB of an obstacle after epsilon padding, clamped to limits."""
    lo, hi = obstacle.shape.aabb()
    out = []
    for a in range(3):
        plo = max(lo[a] - w.epsilon_mm, w.machine_limits[a][0])
        phi = min(hi[a] + w.epsilon_mm, w.machine_limits[a][1])
        out.append((plo, phi))
    return tuple(out)


def _fmt_limit(v: float) -> str:
    return f"{v:g}"


def _fmt_bound(v: float, clamped: bool) -> str:
    # Clamped bounds print like the machine limit they clamp to.
    return f"{v:g}" if clamped else f"{v:.1f}"


def _bounds_entry(w: WorkspaceTopology, label: str, shape: Shape) -> str:
    lo, hi = shape.aabb()
    parts = []
    for a in range(3):
        plo = lo[a] - w.epsilon_mm
        phi = hi[a] + w.epsilon_mm
        clo = max(plo, w.machine_limits[a][0])
        chi = min(phi, w.machine_limits[a][1])
        parts.append(
            f"{AXES[a].upper()} ∈ [{_fmt_bound(clo, clo != plo)}, "
            f"{_fmt_bound(chi, chi != phi)}]"
        )
    return f"- {label}: " + ", ".join(parts)


def emit_generator_context(w: WorkspaceTopology, active_tool: str) -> str:
    """Render the constraint document injected into the generator prompt.

    Layout follows the prompt-injection figure line for line; deterministic
    for a given topology (obstacles listed in label order).
    """
    tool = w.tool(active_tool)
    lines = ["System Constraints:"]
    lines.append(
        "MACHINE_LIMITS: "
        + ", ".join(
            f"{AXES[a].upper()} ∈ [{_fmt_limit(w.machine_limits[a][0])}, "
            f"{_fmt_limit(w.machine_limits[a][1])}]"
            for a in range(3)
        )
    )
    lines.append(f"ACTIVE_TOOL: {active_tool} ({tool.kind}, Radius={tool.radius_mm:.1f}mm)")
    lines.append(f"SAFE_Z_RETRACT: Z{w.safe_z_mm:.1f}")
    if w.stock is not None:
        lines.append("STOCK_BOUNDS (Pre-expanded via B_ε margin):")
        lines.append(_bounds_entry(w, "Stock", w.stock))
    lines.append(
        f"OBSTACLE_BOUNDS (Pre-expanded via B_ε margin, ε={w.epsilon_mm:.1f}mm):"
    )
    for obstacle in sorted(w.obstacles, key=lambda o: o.label):
        lines.append(_bounds_entry(w, obstacle.label, obstacle.shape))
    lines.append(
        "Directive: Route all G00 rapid movements to strictly avoid the OBSTACLE_BOUNDS."
    )
    return "\n".join(lines) + "\n"
