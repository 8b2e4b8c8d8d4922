import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from striplab.lorentz import (
    Geodesic,
    Isometry,
    angle_lines,
    causal_character,
    common_perpendicular,
    dist_halfplanes,
    dist_points,
    intersect_lines,
    kill_eval,
    killing_axis_velocity,
    mink_cross,
    mink_dot,
    normalize_dual,
    normalize_point,
    point_along,
    reflection_matrix,
    signed_line_distance,
    tangent_toward,
)

ORIGIN = np.array([0.0, 0.0, 1.0])

coord = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)
vec3 = st.tuples(coord, coord, coord).map(np.array)


@st.composite
def hyp_points(draw):
    t = draw(st.floats(min_value=0.0, max_value=2.0, allow_nan=False))
    ph = draw(st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False))
    return np.array([math.sinh(t) * math.cos(ph),
                     math.sinh(t) * math.sin(ph), math.cosh(t)])


def test_form_signature():
    e1, e2, e3 = np.eye(3)
    assert mink_dot(e1, e1) == 1.0
    assert mink_dot(e2, e2) == 1.0
    assert mink_dot(e3, e3) == -1.0
    assert mink_dot(e1, e2) == 0.0


def test_cross_orientation():
    e1, e2 = np.eye(3)[:2]
    assert np.array_equal(mink_cross(e1, e2), np.array([0.0, 0.0, -1.0]))


@settings(max_examples=150, deadline=None)
@given(vec3, vec3, vec3)
def test_cross_det_identity(a, b, c):
    with np.errstate(divide="ignore"):  # exact-singular stacks are fine here
        det = np.linalg.det(np.stack([a, b, c]))
    got = mink_dot(mink_cross(a, b), c)
    assert abs(got - det) <= 1e-12 * max(1.0, abs(det))


@settings(max_examples=150, deadline=None)
@given(vec3, vec3, vec3, vec3)
def test_lagrange_identity(a, b, c, d):
    lhs = mink_dot(mink_cross(a, b), mink_cross(c, d))
    rhs = -(mink_dot(a, c) * mink_dot(b, d) - mink_dot(a, d) * mink_dot(b, c))
    assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs), abs(rhs))


def test_causal_character():
    assert causal_character(np.array([1.0, 0.0, 0.0])) == "spacelike"
    assert causal_character(np.array([0.0, 0.0, 1.0])) == "timelike"
    assert causal_character(np.array([1.0, 0.0, 1.0])) == "lightlike"


def test_normalize_point_rejects_spacelike():
    with pytest.raises(ValueError, match="not timelike"):
        normalize_point(np.array([2.0, 0.0, 1.0]))
    with pytest.raises(ValueError, match="not spacelike"):
        normalize_dual(np.array([0.0, 0.0, 1.0]))


def test_normalize_point_future_sheet():
    p = normalize_point(np.array([0.3, -0.1, -2.0]))
    assert p[2] > 0
    assert abs(mink_dot(p, p) + 1.0) < 1e-14


def test_dist_points_translation():
    for t in (0.1, 0.7, 2.3):
        z = np.array([math.sinh(t), 0.0, math.cosh(t)])
        assert abs(dist_points(ORIGIN, z) - t) < 1e-13
    assert dist_points(ORIGIN, ORIGIN) == 0.0


def test_dist_points_rejects_bad_input():
    with pytest.raises(ValueError, match="non-unit or past-sheet"):
        dist_points(ORIGIN, np.array([1.0, 0.0, 0.0]))


def test_dist_halfplanes():
    u1 = np.array([1.0, 0.0, 0.0])
    for t in (0.2, 1.0, 2.5):
        u2 = np.array([-math.cosh(t), 0.0, math.sinh(t)])
        assert abs(dist_halfplanes(u1, u2) - t) < 1e-13
    with pytest.raises(ValueError, match="not disjoint"):
        dist_halfplanes(u1, np.array([0.0, 1.0, 0.0]))


def test_kill_eval_rotation_vanishes_at_center():
    p = normalize_point(np.array([0.4, -0.2, 1.5]))
    assert np.max(np.abs(kill_eval(p, p))) < 1e-15


def test_kill_eval_counterclockwise():
    # Flow of the rotation about the origin moves +x toward +y.
    y = np.array([math.sinh(1.0), 0.0, math.cosh(1.0)])
    vel = kill_eval(ORIGIN, y)
    assert vel[1] > 0
    moved = Isometry.exp(0.1 * ORIGIN).apply(y)
    assert moved[1] > 0


@settings(max_examples=80, deadline=None)
@given(hyp_points(), hyp_points())
def test_rotation_pi_swaps_endpoints(y, z):
    m = normalize_point(y + z)
    rot = Isometry.rotation_pi(m)
    assert np.max(np.abs(rot.apply(y) - z)) < 1e-9 * max(1.0, z[2])
    assert np.max(np.abs((rot @ rot).m - np.eye(3))) < 1e-12 * max(1.0, m[2]) ** 2


def test_reflection_matrix_properties():
    u = normalize_dual(np.array([1.0, 0.3, 0.2]))
    R = reflection_matrix(u)
    assert abs(np.linalg.det(R) + 1.0) < 1e-12
    assert np.max(np.abs(R @ R - np.eye(3))) < 1e-13
    # Fixes points of the reflection line.
    p = normalize_point(mink_cross(u, np.array([0.0, 0.0, 1.0])) + 2.0 * np.array([0.0, 0.0, 1.0]))
    q = p - mink_dot(p, u) * u
    q = normalize_point(q)
    assert np.max(np.abs(R @ q - q)) < 1e-13


def test_exp_elliptic_branch():
    rot = Isometry.exp(0.5 * ORIGIN)
    assert rot.kind == "elliptic"
    # Rotation by angle 0.5 about the origin acts on the xy parts.
    y = np.array([math.sinh(1.0), 0.0, math.cosh(1.0)])
    got = rot.apply(y)
    assert abs(got[0] - math.sinh(1.0) * math.cos(0.5)) < 1e-14
    assert abs(got[1] - math.sinh(1.0) * math.sin(0.5)) < 1e-14


def test_exp_loxodromic_branch():
    U = np.array([0.0, 0.7, 0.0])
    g = Isometry.translation(U)
    assert g.kind == "loxodromic"
    assert abs(g.trace - (1.0 + 2.0 * math.cosh(0.7))) < 1e-13
    # The axis point at the origin moves exactly the translation length.
    assert abs(dist_points(ORIGIN, g.apply(ORIGIN)) - 0.7) < 1e-13


def test_exp_parabolic_branch():
    g = Isometry.exp(np.array([1.0, 0.0, 1.0]))
    assert g.kind == "parabolic"
    assert abs(g.trace - 3.0) < 1e-12


def test_exp_zero_is_identity():
    g = Isometry.exp(np.zeros(3))
    assert g.kind == "identity"
    assert np.array_equal(g.m, np.eye(3))


def test_translation_rejects_timelike():
    with pytest.raises(ValueError, match="not loxodromic"):
        Isometry.translation(np.array([0.0, 0.0, 1.0]))


def test_isometry_validation():
    with pytest.raises(ValueError, match="does not preserve the form"):
        Isometry(np.diag([1.0, 2.0, 1.0]))
    u = normalize_dual(np.array([1.0, 0.2, 0.1]))
    with pytest.raises(ValueError, match="orientation-reversing"):
        Isometry(reflection_matrix(u))


def test_inverse_is_lorentz_transpose():
    g = Isometry.exp(np.array([0.4, -1.2, 0.3]))
    assert np.max(np.abs(g.inverse().m - np.linalg.inv(g.m))) < 1e-13
    assert np.max(np.abs((g @ g.inverse()).m - np.eye(3))) < 1e-14


def test_geodesic_through_points_contains_both():
    y = normalize_point(np.array([0.3, 0.4, 1.5]))
    z = normalize_point(np.array([-0.6, 0.1, 1.8]))
    g = Geodesic.through_points(y, z)
    assert g.contains(y) and g.contains(z)


def test_intersect_lines_and_angle():
    g1 = Geodesic(np.array([1.0, 0.0, 0.0]))
    g2 = Geodesic(np.array([0.0, 1.0, 0.0]))
    p = intersect_lines(g1, g2)
    assert np.max(np.abs(p - ORIGIN)) < 1e-15
    assert abs(angle_lines(g1, g2, p) - math.pi / 2.0) < 1e-15
    with pytest.raises(ValueError, match="not transverse"):
        intersect_lines(g1, Geodesic(np.array([-math.cosh(1.0), 0.0, math.sinh(1.0)])))


def test_angle_lines_requires_common_point():
    g1 = Geodesic(np.array([1.0, 0.0, 0.0]))
    g2 = Geodesic(np.array([0.0, 1.0, 0.0]))
    off = normalize_point(np.array([0.5, 0.5, 1.5]))
    with pytest.raises(ValueError, match="does not pass through"):
        angle_lines(g1, g2, off)


def test_common_perpendicular():
    g1 = Geodesic(np.array([1.0, 0.0, 0.0]))
    g2 = Geodesic(np.array([-math.cosh(1.5), 0.0, math.sinh(1.5)]))
    cp = common_perpendicular(g1, g2)
    assert abs(mink_dot(cp.dual, g1.dual)) < 1e-13
    assert abs(mink_dot(cp.dual, g2.dual)) < 1e-13
    with pytest.raises(ValueError, match="not disjoint"):
        common_perpendicular(g1, Geodesic(np.array([0.0, 1.0, 0.0])))


def test_tangent_and_point_along():
    y = normalize_point(np.array([0.2, -0.5, 1.4]))
    z = normalize_point(np.array([-0.8, 0.3, 1.6]))
    n = tangent_toward(y, z)
    assert abs(mink_dot(n, n) - 1.0) < 1e-13
    assert abs(mink_dot(n, y)) < 1e-13
    d = dist_points(y, z)
    assert np.max(np.abs(point_along(y, n, d) - z)) < 1e-12


def test_signed_line_distance_sides():
    g = Geodesic(np.array([1.0, 0.0, 0.0]))
    for t in (-1.2, 0.4):
        p = np.array([math.sinh(t), 0.0, math.cosh(t)])
        assert abs(signed_line_distance(g, p) - math.sinh(t)) < 1e-14


def test_killing_axis_velocity():
    U = np.array([0.0, 1.3, 0.0])
    axis, vel = killing_axis_velocity(U)
    assert abs(vel - 1.3) < 1e-14
    assert axis.contains(ORIGIN)
    with pytest.raises(ValueError, match="not loxodromic"):
        killing_axis_velocity(np.array([0.0, 0.0, 1.0]))


def test_kind_classification():
    assert Isometry.identity().kind == "identity"
    assert Isometry.exp(np.array([0.0, 0.0, 0.3])).kind == "elliptic"
    assert Isometry.exp(np.array([0.3, 0.0, 0.0])).kind == "loxodromic"
