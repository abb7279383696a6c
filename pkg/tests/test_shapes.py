"""Shape containment and center-sampled discretization."""

import math

import pytest

from pathproof.errors import DiagnosticWarning, WorkspaceError
from pathproof.grid import GridScale
from pathproof.shapes import Box, Cylinder, Sphere, discretize_shape, shape_from_json


def brute_voxels(shape, res):
    """Independent containment oracle: scan a generous lattice box."""
    lo, hi = shape.aabb()
    out = set()
    for ix in range(math.floor(lo[0] / res) - 2, math.ceil(hi[0] / res) + 3):
        for iy in range(math.floor(lo[1] / res) - 2, math.ceil(hi[1] / res) + 3):
            for iz in range(math.floor(lo[2] / res) - 2, math.ceil(hi[2] / res) + 3):
                if shape.contains((ix * res, iy * res, iz * res)):
                    out.add((ix, iy, iz))
    return frozenset(out)


def test_unit_box_discretizes_to_its_corners():
    got = discretize_shape(Box((0, 0, 0), (1, 1, 1)), GridScale(1.0))
    assert got == frozenset(
        {(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1)}
    )


def test_zero_radius_sphere_is_center_voxel_with_diagnostic():
    with pytest.warns(DiagnosticWarning):
        got = discretize_shape(Sphere((2.0, 3.0, 4.0), 0.0), GridScale(1.0))
    assert got == frozenset({(2, 3, 4)})


def test_degenerate_box_off_lattice_is_empty_with_diagnostic():
    with pytest.warns(DiagnosticWarning):
        got = discretize_shape(Box((0.4, 0.4, 0.4), (0.4, 0.4, 0.4)), GridScale(1.0))
    assert got == frozenset()


def test_nist_style_cylinder_matches_brute_force_count():
    # R=20 mm about +Y at (-245, 0, -100), as extracted from the reference part.
    cyl = Cylinder((-245.0, 0.0, -100.0), "y", 20.0, 30.0)
    grid = GridScale(2.5)
    got = discretize_shape(cyl, grid)
    assert got == brute_voxels(cyl, 2.5)
    assert len(got) > 0


@pytest.mark.parametrize(
    "shape",
    [
        Box((-3.2, 0.0, 1.1), (4.7, 2.5, 3.3)),
        Cylinder((1.0, 2.0, 3.0), "z", 2.7, 4.1),
        Cylinder((0.0, 0.0, 0.0), "x", 1.2, 5.0),
        Sphere((0.5, -1.5, 2.0), 3.3),
    ],
)
def test_discretization_agrees_with_oracle(shape):
    for res in (1.0, 0.5):
        assert discretize_shape(shape, GridScale(res)) == brute_voxels(shape, res)


def test_shape_json_round_trip_and_errors():
    for doc in (
        {"type": "box", "min": [0, 0, 0], "max": [1, 2, 3]},
        {"type": "cylinder", "center": [1, 2, 3], "axis": "y", "radius": 2.0, "height": 4.0},
        {"type": "sphere", "center": [0, 0, 0], "radius": 1.5},
    ):
        assert shape_from_json(doc).to_json() == doc

    with pytest.raises(WorkspaceError):
        shape_from_json({"type": "wedge"})
    with pytest.raises(WorkspaceError):
        shape_from_json({"type": "box", "min": [1, 0, 0], "max": [0, 5, 5]})
    with pytest.raises(WorkspaceError):
        shape_from_json({"type": "cylinder", "center": [0, 0, 0], "axis": "w", "radius": 1, "height": 1})
    with pytest.raises(WorkspaceError):
        shape_from_json({"type": "sphere", "center": [0, 0], "radius": 1})
