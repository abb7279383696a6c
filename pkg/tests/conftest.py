import json
import pathlib

import pytest

from pathproof import workspace_from_json

REPO = pathlib.Path(__file__).resolve().parent.parent
DEMOS = REPO / "demos"
GOLDEN = pathlib.Path(__file__).resolve().parent / "golden"


def make_workspace(
    limits=((-10, 60), (-10, 60), (-10, 60)),
    resolution=1.0,
    epsilon=1.0,
    safe_z=40.0,
    tools=None,
    obstacles=(),
    stock=None,
):
    doc = {
        "machine_limits": {"x": list(limits[0]), "y": list(limits[1]), "z": list(limits[2])},
        "grid_resolution_mm": resolution,
        "epsilon_mm": epsilon,
        "safe_z_mm": safe_z,
        "tools": tools if tools is not None else {"T01": {"radius_mm": 1.0, "length_mm": 5.0}},
        "obstacles": list(obstacles),
        "stock": stock,
    }
    return workspace_from_json(doc)


@pytest.fixture
def demo_path():
    return DEMOS


@pytest.fixture
def golden_path():
    return GOLDEN


def write_json(path: pathlib.Path, doc) -> pathlib.Path:
    path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
    return path
