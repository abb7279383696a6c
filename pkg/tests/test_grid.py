"""Continuous-to-lattice scaling: rounding rules and margin conversion."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pathproof.grid import GridScale, s_grid


def test_half_away_rounding_examples():
    g = GridScale(0.1)
    assert g.to_voxel(12.345) == 123
    assert g.to_voxel(0.0) == 0
    assert g.to_voxel(-0.05) == -1  # half away from zero
    assert g.to_voxel(0.05) == 1
    assert s_grid(12.345, g) == 123


def test_scale_and_back_conversion():
    g = GridScale(0.5)
    assert g.scale == 2.0
    assert g.to_mm(7) == 3.5
    assert g.to_voxel(g.to_mm(7)) == 7


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
def test_sign_symmetry(x):
    g = GridScale(0.25)
    assert g.to_voxel(-x) == -g.to_voxel(x)


@given(
    st.floats(min_value=-1e4, max_value=1e4),
    st.floats(min_value=-1e4, max_value=1e4),
)
def test_monotone_non_decreasing(a, b):
    g = GridScale(1.0)
    lo, hi = sorted((a, b))
    assert g.to_voxel(lo) <= g.to_voxel(hi)


def test_epsilon_voxels_ceiling():
    g = GridScale(1.0)
    assert g.epsilon_voxels(0.0) == 0
    assert g.epsilon_voxels(1.0) == 1
    assert g.epsilon_voxels(1.5) == 2
    assert GridScale(0.1).epsilon_voxels(0.2) == 2  # FP-safe exact multiple
    with pytest.raises(ValueError):
        g.epsilon_voxels(-0.5)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        GridScale(0.0)
    with pytest.raises(ValueError):
        GridScale(float("nan"))
    with pytest.raises(ValueError):
        GridScale(1.0).to_voxel(math.inf)
