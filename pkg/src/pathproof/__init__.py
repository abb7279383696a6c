"""pathproof: separation-logic safety verification for G-code toolpaths.

The pipeline: a workspace description is discretized into a spatial heap
(voxels owned by Environment, Stock or the Tool), each motion command's
swept volume is dilated by the tool geometry and a safety margin, and a
prover checks per-command disjointness side conditions.  Failures are
condensed into minimal conflict boxes and fed back to a pluggable code
generator until a proof of safety is reached.
"""

from .errors import (
    AllocationFault,
    ParseError,
    PathproofError,
    UnionFault,
    UnknownToolError,
    WorkspaceError,
)
from .feedback import FeedbackSignal, bounding_box, condense, render_signal
from .gcode import GCodeCommand, Kind, MachineState, parse_program, resolve_modal
from .grid import GridScale, s_grid
from .heap import Occupancy, SpatialHeap
from .loop import GeneratorHandle, LoopTranscript, run_loop, verify_once
from .oracle import simulate
from .prover import (
    ConflictReport,
    ProofOutcome,
    ProofState,
    check_g00,
    check_g01,
    frame_check,
    initial_proof_state,
    prove_program,
)
from .shapes import Box, Cylinder, Shape, Sphere, discretize_shape, shape_from_json
from .sweep import SweptFootprint, footprint, path_box, path_lin, voxelize_tool
from .voxel import chebyshev_ball, dilate, minkowski_sum, translate
from .workspace import (
    ToolGeometry,
    WorkspaceTopology,
    build_initial_heap,
    emit_generator_context,
    load_workspace,
    workspace_from_json,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationFault",
    "Box",
    "ConflictReport",
    "Cylinder",
    "FeedbackSignal",
    "GCodeCommand",
    "GeneratorHandle",
    "GridScale",
    "Kind",
    "LoopTranscript",
    "MachineState",
    "Occupancy",
    "ParseError",
    "PathproofError",
    "ProofOutcome",
    "ProofState",
    "Shape",
    "SpatialHeap",
    "Sphere",
    "SweptFootprint",
    "ToolGeometry",
    "UnionFault",
    "UnknownToolError",
    "WorkspaceError",
    "bounding_box",
    "build_initial_heap",
    "check_g00",
    "check_g01",
    "chebyshev_ball",
    "condense",
    "dilate",
    "discretize_shape",
    "emit_generator_context",
    "footprint",
    "frame_check",
    "initial_proof_state",
    "load_workspace",
    "minkowski_sum",
    "parse_program",
    "path_box",
    "path_lin",
    "prove_program",
    "render_signal",
    "resolve_modal",
    "run_loop",
    "s_grid",
    "shape_from_json",
    "simulate",
    "translate",
    "verify_once",
    "voxelize_tool",
    "workspace_from_json",
]
