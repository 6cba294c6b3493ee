import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symmkit.geom import (DimensionError, LineSubspace, RotationOp, project_point, reflect_point,
                          rotation_between, rotation_distance)

from conftest import angles

coords = st.floats(-1e3, 1e3, allow_nan=False)
X_AXIS = LineSubspace.from_angle(0.0)


def test_reflect_examples():
    assert np.allclose(reflect_point([1, 2], X_AXIS), [1, -2], atol=1e-15)
    assert np.allclose(reflect_point([1, 0], LineSubspace.from_angle(math.pi / 4)), [0, 1], atol=1e-15)
    H = LineSubspace.from_angle(0.7)
    p = 3.0 * np.array([math.cos(0.7), math.sin(0.7)])
    assert np.allclose(reflect_point(p, H), p, atol=1e-12)


def test_project_examples():
    assert np.allclose(project_point([3, 4], X_AXIS), [3, 0])
    E12 = LineSubspace(np.array([[1.0, 0, 0], [0, 1.0, 0]]))
    assert np.allclose(project_point([1, 1, 1], E12), [1, 1, 0])
    assert np.allclose(project_point([2, 5, 0], E12), [2, 5, 0])


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        reflect_point([1, 2, 3], X_AXIS)
    with pytest.raises(DimensionError):
        project_point([1.0], X_AXIS)


def test_line_angle_is_modulo_pi():
    assert LineSubspace.from_angle(math.pi + 0.25).angle == pytest.approx(0.25, abs=1e-15)
    assert LineSubspace.from_angle(-0.25).angle == pytest.approx(math.pi - 0.25, abs=1e-15)


def test_basis_reorthonormalized():
    H = LineSubspace(np.array([[1.0, 0.0, 0.0], [1e-6, 1.0, 0.0]]))
    assert np.abs(H.basis @ H.basis.T - np.eye(2)).max() < 1e-12


@given(coords, coords, angles)
def test_reflection_involution(x, y, a):
    H = LineSubspace.from_angle(a)
    p = np.array([x, y])
    back = reflect_point(reflect_point(p, H), H)
    assert np.allclose(back, p, atol=1e-12 * max(1.0, np.abs(p).max()))


@given(coords, coords, angles)
def test_fixed_points_are_the_line(x, y, a):
    H = LineSubspace.from_angle(a)
    p = np.array([x, y])
    moved = np.linalg.norm(reflect_point(p, H) - p) > 1e-9 * max(1.0, np.linalg.norm(p))
    assert moved != H.contains(p, tol=1e-9)


def test_rotation_between_examples():
    R = rotation_between([1, 0], [0, 1])
    assert np.allclose(R.matrix, [[0, -1], [1, 0]], atol=1e-15)
    assert np.allclose(rotation_between([0.6, 0.8], [0.6, 0.8]).matrix, np.eye(2))
    R3 = rotation_between([1, 0, 0], [0, 0, 1])
    assert np.allclose(R3.apply([0, 1, 0]), [0, 1, 0], atol=1e-15)
    assert np.allclose(R3.apply([1, 0, 0]), [0, 0, 1], atol=1e-15)


def test_rotation_between_antipodal_rejected():
    with pytest.raises(ValueError, match="antipodal"):
        rotation_between([1, 0], [-1, 0])


@given(st.lists(st.floats(-1, 1), min_size=6, max_size=6))
def test_rotation_between_maps_u_to_v(c):
    u, v = np.array(c[:3]), np.array(c[3:])
    if np.linalg.norm(u) < 1e-3 or np.linalg.norm(v) < 1e-3:
        return
    u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
    if u @ v < -1 + 1e-6:
        return
    R = rotation_between(u, v)
    assert np.allclose(R.apply(u), v, atol=1e-12)
    assert abs(np.linalg.det(R.matrix) - 1) < 1e-10


def test_rotation_rejects_reflection():
    with pytest.raises(ValueError):
        RotationOp(np.diag([1.0, -1.0]))


@given(st.floats(-math.pi, math.pi))
def test_distance_to_identity(a):
    d = rotation_distance(RotationOp.identity(), RotationOp.planar(a))
    assert d == pytest.approx(2 * math.sin(abs(a) / 2), abs=1e-12)


def test_distance_metric_axioms(rng):
    for _ in range(50):
        A, B, C = (RotationOp.planar(a) for a in rng.uniform(-math.pi, math.pi, 3))
        assert rotation_distance(A, A) == 0
        assert rotation_distance(A, B) == pytest.approx(rotation_distance(B, A), abs=1e-15)
        assert rotation_distance(A, C) <= rotation_distance(A, B) + rotation_distance(B, C) + 1e-12
    Q = [rotation_between(rng.normal(size=3), rng.normal(size=3)) for _ in range(3)]
    assert rotation_distance(Q[0], Q[2]) <= rotation_distance(Q[0], Q[1]) + rotation_distance(Q[1], Q[2]) + 1e-12
