"""Conflict-to-feedback translation: the structured error signal.

A refutation is rendered twice from the same numbers: a machine-readable
JSON payload (voxel and millimetre bounds) and a deterministic natural
language template for the generator's context window.  The template text
is a versioned resource file because its wording is a contract with the
generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Dict, List

from .grid import GridScale
from .prover import ConflictReport
from .voxel import IntBox, VoxelSet
from .voxel import bounding_box as voxel_bounding_box

TEMPLATE_NAME = "spatial_data_race_v1.txt"

Z_CLEARANCE_HINT = (
    " Consider increasing the Z-axis clearance height (G00 Z...) prior to "
    "lateral XY translation."
)


@dataclass(frozen=True)
class FeedbackSignal:
    machine_payload: Dict
    human_text: str
    iteration: int


def bounding_box(v: VoxelSet) -> IntBox:
    """Tightest integer box around a non-empty conflict set."""
    return voxel_bounding_box(v)


def condense(v_conflict: VoxelSet, budget: int = 1) -> List[IntBox]:
    """Condense a conflict set into at most ``budget`` boxes.

    Only the single-box form is shipped (the feedback contract carries one
    box); the list return type leaves room for finer decompositions.
    """
    if not v_conflict:
        raise ValueError("cannot condense an empty conflict set")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    return [bounding_box(v_conflict)]


def _load_template() -> str:
    return (
        resources.files("pathproof.templates").joinpath(TEMPLATE_NAME).read_text("utf-8")
    )


def render_signal(
    report: ConflictReport, grid: GridScale, iteration: int, safe_z_mm: float
) -> FeedbackSignal:
    """Render one conflict into the paired machine/human feedback signal.

    Deterministic: identical reports yield byte-identical signals.  The
    Z-retract hint is added only when the conflict top sits below the safe
    retract plane.
    """
    (xv, yv, zv) = report.bounds_voxel
    (xm, ym, zm) = report.bounds_mm
    z_hint = Z_CLEARANCE_HINT if zm[1] < safe_z_mm else ""
    human = _load_template().format(
        command=report.command_text,
        status=report.conflicting_status.value,
        x_lo=xv[0],
        x_hi=xv[1],
        y_lo=yv[0],
        y_hi=yv[1],
        z_lo=zv[0],
        z_hi=zv[1],
        window_lo=report.window[0],
        window_hi=report.window[1],
        z_hint=z_hint,
    )
    payload = {
        "error": "spatial_data_race",
        "iteration": iteration,
        "line": report.source_line,
        "n_word": report.line_no,
        "command": report.command_text,
        "status": report.conflicting_status.value,
        "bounds_mm": {
            "x": [xm[0], xm[1]],
            "y": [ym[0], ym[1]],
            "z": [zm[0], zm[1]],
        },
        "bounds_voxel": {
            "x": [xv[0], xv[1]],
            "y": [yv[0], yv[1]],
            "z": [zv[0], zv[1]],
        },
        "directive": (
            f"Regenerate the toolpath between lines {report.window[0]} and "
            f"{report.window[1]}. You must route the tool to strictly avoid "
            f"the stated conflict bounds.{z_hint}"
        ),
    }
    return FeedbackSignal(machine_payload=payload, human_text=human, iteration=iteration)
