"""Workspace loading, initial heap construction and the context document."""

import random

import pytest

from pathproof import Occupancy, load_workspace
from pathproof.errors import DiagnosticWarning, UnknownToolError, WorkspaceError
from pathproof.shapes import Box
from pathproof.voxel import bounding_box
from pathproof.workspace import (
    build_initial_heap,
    emit_generator_context,
    normalize_tool_id,
    padded_obstacle_bounds,
    workspace_from_json,
)

from conftest import DEMOS, GOLDEN, make_workspace, write_json


def clamp_doc(epsilon=2.0):
    return {
        "machine_limits": {"x": [0, 500], "y": [0, 500], "z": [0, 500]},
        "grid_resolution_mm": 1.0,
        "epsilon_mm": epsilon,
        "safe_z_mm": 50.0,
        "tools": {"T01": {"radius_mm": 5.0, "length_mm": 30.0}},
        "obstacles": [
            {"label": "Clamp_1", "shape": {"type": "box", "min": [10, 10, 0], "max": [30, 30, 20]}}
        ],
    }


def test_load_round_trip_field_by_field(tmp_path):
    doc = clamp_doc()
    path = write_json(tmp_path / "w.json", doc)
    w1 = load_workspace(str(path))
    w2 = load_workspace(str(path))
    assert w1 == w2
    assert w1.machine_limits == ((0, 500), (0, 500), (0, 500))
    assert w1.grid_resolution_mm == 1.0
    assert w1.epsilon_mm == 2.0
    assert w1.safe_z_mm == 50.0
    assert w1.tools["T01"].radius_mm == 5.0
    assert len(w1.obstacles) == 1
    assert w1.obstacles[0].label == "Clamp_1"
    assert w1.obstacles[0].shape == Box((10, 10, 0), (30, 30, 20))
    assert w1.stock is None


def test_empty_obstacle_list_gives_stock_and_empty_only():
    w = make_workspace(
        obstacles=(),
        stock={"type": "box", "min": [0, 0, 0], "max": [4, 4, 2]},
        epsilon=1.0,
    )
    heap = build_initial_heap(w)
    assert heap.domain_of(Occupancy.ENVIRONMENT) == frozenset()
    assert len(heap.domain_of(Occupancy.STOCK)) == 5 * 5 * 3


def test_obstacle_outside_limits_is_load_error():
    doc = clamp_doc()
    doc["obstacles"][0]["shape"]["max"] = [600, 30, 20]
    with pytest.raises(WorkspaceError):
        workspace_from_json(doc)


def test_stock_outside_limits_is_load_error():
    doc = clamp_doc()
    doc["stock"] = {"type": "box", "min": [-5, 0, 0], "max": [10, 10, 10]}
    with pytest.raises(WorkspaceError):
        workspace_from_json(doc)


def test_nonpositive_resolution_and_bad_json(tmp_path):
    doc = clamp_doc()
    doc["grid_resolution_mm"] = 0
    with pytest.raises(WorkspaceError):
        workspace_from_json(doc)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(WorkspaceError):
        load_workspace(str(bad))
    with pytest.raises(WorkspaceError):
        load_workspace(str(tmp_path / "missing.json"))


def test_thin_epsilon_warns_and_strict_raises():
    doc = clamp_doc(epsilon=0.25)
    with pytest.warns(DiagnosticWarning):
        workspace_from_json(doc)
    with pytest.raises(WorkspaceError):
        workspace_from_json(doc, strict=True)


def test_padded_clamp_environment_spans_figure_bounds():
    w = workspace_from_json(clamp_doc(epsilon=2.0))
    heap = build_initial_heap(w)
    env = heap.domain_of(Occupancy.ENVIRONMENT)
    assert bounding_box(env) == ((8, 32), (8, 32), (0, 22))


def test_environment_wins_over_stock_on_overlap():
    w = make_workspace(
        obstacles=({"label": "o", "shape": {"type": "box", "min": [0, 0, 0], "max": [2, 2, 2]}},),
        stock={"type": "box", "min": [1, 1, 1], "max": [5, 5, 5]},
        epsilon=1.0,
    )
    heap = build_initial_heap(w)
    env = heap.domain_of(Occupancy.ENVIRONMENT)
    stock = heap.domain_of(Occupancy.STOCK)
    assert env & stock == frozenset()
    # every voxel of the discretized stock overlapping the padded obstacle is Environment
    assert (1, 1, 1) in env and (1, 1, 1) not in stock
    assert (5, 5, 5) in stock


def test_build_initial_heap_is_pure():
    w = workspace_from_json(clamp_doc())
    assert build_initial_heap(w) == build_initial_heap(w)


def test_dilation_monotonic_in_epsilon():
    doc1, doc2 = clamp_doc(epsilon=1.0), clamp_doc(epsilon=3.0)
    env1 = build_initial_heap(workspace_from_json(doc1)).domain_of(Occupancy.ENVIRONMENT)
    env2 = build_initial_heap(workspace_from_json(doc2)).domain_of(Occupancy.ENVIRONMENT)
    assert env1 <= env2


def test_discretization_soundness_on_random_boxes():
    # With center sampling plus eps >= 1 voxel, every continuous obstacle
    # point sits within Chebyshev distance 1 voxel of an Environment center.
    rng = random.Random(42)
    for _ in range(25):
        lo = [rng.uniform(5, 30) for _ in range(3)]
        extent = [rng.uniform(1.0, 10.0) for _ in range(3)]
        hi = [lo[a] + extent[a] for a in range(3)]
        w = make_workspace(
            limits=((0, 50), (0, 50), (0, 50)),
            epsilon=1.0,
            obstacles=({"label": "b", "shape": {"type": "box", "min": lo, "max": hi}},),
        )
        env = build_initial_heap(w).domain_of(Occupancy.ENVIRONMENT)
        for _ in range(40):
            p = [rng.uniform(lo[a], hi[a]) for a in range(3)]
            nearest = tuple(round(c) for c in p)
            ok = nearest in env or any(
                max(abs(v[0] - p[0]), abs(v[1] - p[1]), abs(v[2] - p[2])) <= 1.0 + 1e-9
                for v in env
            )
            assert ok, (lo, hi, p)


def test_context_round_trip_matches_heap_environment_box():
    w = workspace_from_json(clamp_doc(epsilon=2.0))
    heap = build_initial_heap(w)
    env_box = bounding_box(heap.domain_of(Occupancy.ENVIRONMENT))
    padded = padded_obstacle_bounds(w, w.obstacles[0])
    grid = w.grid
    rediscretized = tuple((grid.to_voxel(lo), grid.to_voxel(hi)) for lo, hi in padded)
    assert rediscretized == env_box


def test_context_document_matches_golden():
    w = load_workspace(str(DEMOS / "rag_workspace.json"))
    got = emit_generator_context(w, "T01")
    assert got == (GOLDEN / "context_rag.txt").read_text("utf-8")
    assert "- Clamp_1 (Derived from CAD Feature #006): X ∈ [8.0, 32.0]" in got


def test_zero_epsilon_padding_is_identity():
    doc = clamp_doc(epsilon=0.0)
    with pytest.warns(DiagnosticWarning):
        w = workspace_from_json(doc)
    text = emit_generator_context(w, "T01")
    assert "X ∈ [10.0, 30.0], Y ∈ [10.0, 30.0], Z ∈ [0.0, 20.0]" in text


def test_two_obstacles_listed_in_label_order():
    doc = clamp_doc()
    doc["obstacles"].insert(
        0,
        {"label": "Zed_clamp", "shape": {"type": "box", "min": [100, 100, 0], "max": [120, 120, 20]}},
    )
    w = workspace_from_json(doc)
    text = emit_generator_context(w, "T01")
    assert text.index("Clamp_1") < text.index("Zed_clamp")
    assert text.count("- ") == 2


def test_context_unknown_tool_raises():
    w = workspace_from_json(clamp_doc())
    with pytest.raises(UnknownToolError):
        emit_generator_context(w, "T09")


def test_tool_id_normalization():
    assert normalize_tool_id("t2") == "T02"
    assert normalize_tool_id("T02") == "T02"
    assert normalize_tool_id("12") == "T12"
    with pytest.raises(WorkspaceError):
        normalize_tool_id("Tx")


def test_voxel_bounds_center_containment():
    w = make_workspace(limits=((0, 10), (0, 10), (-5, 5)), epsilon=1.0)
    assert w.voxel_bounds() == ((0, 10), (0, 10), (-5, 5))
    w2 = make_workspace(limits=((0.4, 9.6), (0, 10), (0, 10)), epsilon=1.0)
    assert w2.voxel_bounds()[0] == (1, 9)
