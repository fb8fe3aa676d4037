import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadric_cr.convex import (
    box_body,
    boundary_distance,
    cone_body,
    cone_inequality_constant,
    contains,
    empty_body,
    erode,
    interval_body,
    polar_cone,
    polytope_body,
    project_body,
    segment_body,
    support,
)


def test_support_sign_convention():
    k = interval_body(1.0, 2.0)
    assert support(k, np.array([1.0])) == -1.0
    assert support(k, np.array([-1.0])) == 2.0
    box = box_body([0.0, 0.0], [1.0, 2.0])
    assert support(box, np.array([-1.0, -1.0])) == 3.0
    assert support(empty_body(2), np.array([1.0, 0.0])) == -np.inf


def test_support_on_cones():
    half = cone_body([[1.0]])
    assert support(half, np.array([1.0])) == 0.0
    assert support(half, np.array([-1.0])) == np.inf
    quad = cone_body([[1.0, 0.0], [0.0, 1.0]])
    assert support(quad, np.array([0.5, 0.5])) == 0.0
    assert support(quad, np.array([-0.1, 1.0])) == np.inf


def test_contains_polytope():
    box = box_body([0.0, 0.0], [1.0, 1.0])
    assert contains(box, [0.5, 0.5])
    assert contains(box, [1.0, 1.0])
    assert contains(box, [1.0 + 1e-12, 0.5])
    assert not contains(box, [1.1, 0.5])
    seg = segment_body([0.0, 0.0], [1.0, 1.0])
    assert contains(seg, [0.25, 0.25])
    assert not contains(seg, [0.25, 0.3])


def test_contains_cone():
    quad = cone_body([[1.0, 0.0], [0.0, 1.0]])
    assert contains(quad, [3.0, 5.0])
    assert contains(quad, [0.0, 0.0])
    assert not contains(quad, [-0.5, 1.0])


def test_polar_cone_1d():
    assert np.allclose(polar_cone(interval_body(1.0, 2.0)).points, [[1.0]])
    assert np.allclose(polar_cone(interval_body(-2.0, -1.0)).points, [[-1.0]])
    mixed = polar_cone(interval_body(-1.0, 2.0))
    assert mixed.points.shape[0] == 0


def test_polar_cone_2d_quadrant():
    quad = cone_body([[1.0, 0.0], [0.0, 1.0]])
    dual = polar_cone(quad)
    assert contains(dual, [1.0, 0.0]) and contains(dual, [0.0, 1.0])
    assert contains(dual, [0.7, 0.7])
    assert not contains(dual, [-0.1, 1.0])


def test_polar_cone_2d_single_ray_is_halfplane():
    dual = polar_cone(cone_body([[1.0, 0.0]]))
    for h in ([0.0, 1.0], [0.0, -1.0], [1.0, 5.0], [1.0, -5.0], [2.0, 0.0]):
        assert contains(dual, np.asarray(h) / np.linalg.norm(h))
    assert not contains(dual, [-0.1, 1.0])


def test_polar_cone_2d_wide_is_trivial():
    wide = cone_body([[1.0, 0.1], [-1.0, 0.1], [0.0, -1.0]])
    assert polar_cone(wide).points.shape[0] == 0


def test_polar_cone_3d_octant():
    oct3 = cone_body(np.eye(3))
    dual = polar_cone(oct3)
    assert contains(dual, [1.0, 1.0, 1.0])
    for e in np.eye(3):
        assert contains(dual, e, tol=1e-6)
    assert not contains(dual, [-0.2, 0.5, 0.5])


def test_boundary_distance_interval_and_box():
    k = interval_body(1.0, 2.0)
    assert boundary_distance(k, np.array([1.4])) == pytest.approx(0.4)
    assert boundary_distance(k, np.array([2.5])) == 0.0
    box = box_body([0.0, 0.0], [1.0, 1.0])
    assert boundary_distance(box, np.array([0.5, 0.5])) == pytest.approx(0.5)
    assert boundary_distance(box, np.array([0.2, 0.9])) == pytest.approx(0.1)
    assert boundary_distance(box, np.array([1.2, 0.5])) == 0.0


def test_boundary_distance_flat_and_cone():
    seg = segment_body([0.0, 0.0], [1.0, 0.0])
    assert boundary_distance(seg, np.array([0.5, 0.0])) == 0.0
    quad = cone_body([[1.0, 0.0], [0.0, 1.0]])
    assert boundary_distance(quad, np.array([0.3, 0.8])) == pytest.approx(0.3)
    assert boundary_distance(quad, np.array([-0.3, 0.8])) == 0.0
    half = cone_body([[1.0]])
    assert boundary_distance(half, np.array([0.7])) == pytest.approx(0.7)


def test_erode_interval_and_box():
    k = erode(interval_body(1.0, 2.0), 0.1)
    assert np.allclose(sorted(k.points[:, 0]), [1.1, 1.9])
    assert erode(interval_body(1.0, 2.0), 0.6).kind == "empty"
    box = erode(box_body([0.0, 0.0], [1.0, 1.0]), 0.2)
    got = sorted(tuple(np.round(p, 9)) for p in box.points)
    assert got == sorted(
        [(0.2, 0.2), (0.2, 0.8), (0.8, 0.2), (0.8, 0.8)]
    )


def test_erode_triangle_keeps_margin():
    tri = polytope_body([[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]])
    inner = erode(tri, 0.5)
    for p in inner.points:
        assert boundary_distance(tri, p) == pytest.approx(0.5, abs=1e-9)
    with pytest.raises(ValueError):
        erode(cone_body([[1.0, 0.0]]), 0.1)


def test_project_body():
    box = box_body([0.0, -1.0], [1.0, 1.0])
    proj = project_body(box, np.array([[1.0], [0.0]]))
    assert proj.kind == "polytope"
    assert sorted(proj.points[:, 0]) == [0.0, 1.0]


def test_cone_constant_halfline():
    assert cone_inequality_constant(cone_body([[1.0]])) == pytest.approx(1.0)


def test_cone_constant_quadrant():
    c = cone_inequality_constant(cone_body([[1.0, 0.0], [0.0, 1.0]]))
    assert 0.99 <= c <= 1.05


@settings(deadline=None, derandomize=True, max_examples=30)
@given(st.integers(min_value=0, max_value=10**6))
def test_support_subadditive(seed):
    rng = np.random.default_rng(seed)
    verts = rng.uniform(-2, 2, size=(4, 2))
    body = polytope_body(verts)
    v, w = rng.uniform(-1, 1, size=(2, 2))
    assert support(body, v + w) <= support(body, v) + support(body, w) + 1e-12
    assert contains(body, verts.mean(axis=0))
