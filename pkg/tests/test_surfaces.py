"""Panel constructors: derived data against closed forms."""

import math

import numpy as np
import pytest

from striplab import lorentz
from striplab.strip_map import curve_length
from striplab.surfaces import (
    bisector_residual,
    build_cusp_family,
    build_sphere,
    build_torus,
    holonomy,
    panel_from_dict,
    sphere_heights_waists,
)


def boundary_half_lengths(a, d, theta):
    za, zd = math.sinh(a), math.sinh(d)
    ra, rd = math.cosh(a), math.cosh(d)
    cosh2b = za * zd - ra * rd * math.cos(theta)
    cosh2c = za * zd + ra * rd * math.cos(theta)
    return cosh2b, cosh2c


def test_boundary_half_lengths_closed_form(boundary_panel):
    p = boundary_panel
    cosh2b, cosh2c = boundary_half_lengths(p.a, p.d, p.theta)
    assert math.cosh(2.0 * p.b) == pytest.approx(cosh2b, rel=1e-12)
    assert math.cosh(2.0 * p.c) == pytest.approx(cosh2c, rel=1e-12)


def test_cone_half_lengths_closed_form(cone_panel):
    p = cone_panel
    za, zd = math.cosh(p.a), math.cosh(p.d)
    ra, rd = math.sinh(p.a), math.sinh(p.d)
    assert math.cosh(2.0 * p.b) == pytest.approx(za * zd - ra * rd * math.cos(p.theta), rel=1e-12)
    assert math.cosh(2.0 * p.c) == pytest.approx(za * zd + ra * rd * math.cos(p.theta), rel=1e-12)


def test_right_angle_gives_equal_half_lengths(sym_torus):
    assert sym_torus.theta == pytest.approx(0.5 * math.pi)
    assert sym_torus.b == pytest.approx(sym_torus.c, abs=1e-15)
    # a = d = arcsinh sqrt(2) puts both at cosh 2b = 2
    assert math.cosh(2.0 * sym_torus.b) == pytest.approx(2.0, rel=1e-12)


def test_corner_layout(boundary_panel):
    p = boundary_panel
    ra, za = math.cosh(p.a), math.sinh(p.a)
    rd, zd = math.cosh(p.d), math.sinh(p.d)
    ct, st = math.cos(p.theta), math.sin(p.theta)
    expected = np.array([
        [ra, 0.0, za],
        [rd * ct, rd * st, zd],
        [-ra, 0.0, za],
        [-rd * ct, -rd * st, zd],
    ])
    assert np.array_equal(p.corners, expected)
    assert np.array_equal(p.p, np.array([0.0, 0.0, 1.0]))
    assert p.spacelike_corners


def test_centering_identity_is_exact(boundary_panel, cone_panel):
    # (A + A') w_d == (D + D') w_a holds with no rounding at all: both
    # sides reduce to the same float product.
    for p, w in ((boundary_panel, math.sinh), (cone_panel, math.cosh)):
        A, D, Ap, Dp = p.corners
        assert np.array_equal((A + Ap) * w(p.d), (D + Dp) * w(p.a))


def test_inadmissible_parameters():
    with pytest.raises(ValueError, match="inadmissible"):
        build_torus(0.5, 0.5, 1.0)  # sinh a sinh d < 1
    with pytest.raises(ValueError, match="inadmissible"):
        build_torus(1.2, 0.9, 0.0)
    with pytest.raises(ValueError, match="inadmissible"):
        build_torus(1.2, 0.9, math.pi)
    with pytest.raises(ValueError, match="inadmissible"):
        build_torus(-1.0, 0.9, 1.0)
    with pytest.raises(ValueError, match="inadmissible"):
        build_torus(1.0, 1.0, 0.05)  # cosh 2b would drop below 1
    with pytest.raises(ValueError, match="unknown torus flavor"):
        build_torus(1.2, 0.9, 1.45, flavor="banana")


def test_swapping_diagonals_swaps_half_lengths(boundary_panel):
    p = boundary_panel
    q = build_torus(p.d, p.a, math.pi - p.theta)
    assert q.b == pytest.approx(p.c, abs=1e-14)
    assert q.c == pytest.approx(p.b, abs=1e-14)


def test_cone_angle_is_corner_sum(cone_panel):
    p = cone_panel
    total = sum(p.corner_angle(i) for i in range(4))
    assert p.cone_angle == pytest.approx(total, abs=1e-15)
    assert 0.0 < p.cone_angle < 2.0 * math.pi
    assert not p.spacelike_corners


def test_boundary_corners_have_no_angles(boundary_panel):
    assert boundary_panel.cone_angle is None
    with pytest.raises(ValueError, match="hyperideal"):
        boundary_panel.corner_angle(0)


def test_commutator_of_generators(boundary_panel, cone_panel):
    # Cone flavor: trace 1 + 2 cos(cone angle); boundary flavor: loxodromic.
    for p in (boundary_panel, cone_panel):
        comm = p.gen_u.m @ p.gen_v.m @ p.gen_u.inverse().m @ p.gen_v.inverse().m
        tr = float(np.trace(comm))
        if p.flavor == "cone":
            assert tr == pytest.approx(1.0 + 2.0 * math.cos(p.cone_angle), abs=1e-12)
        else:
            assert tr > 3.0


def test_generator_translation_lengths(boundary_panel, cone_panel):
    for p in (boundary_panel, cone_panel):
        assert curve_length(p.gen_u) == pytest.approx(
            2.0 * lorentz.dist_points(p.p, p.m12), abs=1e-12)
        assert curve_length(p.gen_v) == pytest.approx(
            2.0 * lorentz.dist_points(p.p, p.m01), abs=1e-12)


def test_side_duals_positive_inside(boundary_panel):
    S, M = boundary_panel.side_data()
    for k in range(4):
        assert lorentz.mink_dot(boundary_panel.p, S[k]) > 0.0
        assert lorentz.mink_dot(M[k], M[k]) == pytest.approx(-1.0, abs=1e-12)


def test_holonomy_reports():
    t = build_torus(1.2, 0.9, 1.45)
    rep = holonomy(t)
    assert rep["relation"] == "commutator of u, v is peripheral"
    assert rep["generators"] == [t.gen_u, t.gen_v]
    s = build_sphere(0.9, 1.1, 1.3)
    rep = holonomy(s)
    assert rep["relation"] == "C*B*A = identity"
    assert len(rep["generators"]) == 3


def test_cusp_family_member():
    f = build_cusp_family(0.7, 0.9, 1.1, 2.0)
    assert f.flavor == "cone"
    assert f.family == (0.7, 0.9, 2.0)
    assert f.a == pytest.approx(2.7)
    assert f.d == pytest.approx(2.9)
    with pytest.raises(ValueError, match="inadmissible"):
        build_cusp_family(-0.1, 0.9, 1.1, 0.0)
    with pytest.raises(ValueError, match="inadmissible"):
        build_cusp_family(0.7, 0.9, 1.1, -0.5)


def test_equal_diagonal_cone_identity():
    # With a = d the half-length sines split the diagonal sine exactly:
    # sinh b = sinh a sin(theta/2), sinh c = sinh a cos(theta/2).
    theta = 1.1
    f = build_cusp_family(0.7, 0.7, theta, 2.0)
    lhs = math.sinh(f.b) + math.sinh(f.c)
    rhs = math.sinh(f.a) * (math.sin(0.5 * theta) + math.cos(0.5 * theta))
    assert lhs == pytest.approx(rhs, rel=1e-13)


def test_panel_round_trip(boundary_panel, cone_panel, sphere_panel):
    for p in (boundary_panel, cone_panel):
        q = panel_from_dict(p.to_dict())
        assert q.flavor == p.flavor
        assert np.array_equal(q.corners, p.corners)
    f = build_cusp_family(0.7, 0.9, 1.1, 2.0)
    g = panel_from_dict(f.to_dict())
    assert g.family == f.family
    assert np.array_equal(g.corners, f.corners)
    s = panel_from_dict(sphere_panel.to_dict())
    assert np.array_equal(s.Y, sphere_panel.Y)
    assert np.array_equal(s.u, sphere_panel.u)


def test_sphere_arc_gram(sphere_panel):
    # Unit duals with pairwise products -cosh(ell_k / 2): the three arcs
    # are disjoint at half the opposite boundary length.
    u, ell = sphere_panel.u, sphere_panel.ell
    for i in range(3):
        assert lorentz.mink_dot(u[i], u[i]) == pytest.approx(1.0, abs=1e-12)
        for j in range(i + 1, 3):
            k = 3 - i - j
            assert lorentz.mink_dot(u[i], u[j]) == pytest.approx(
                -math.cosh(0.5 * ell[k]), rel=1e-12)


def test_sphere_boundary_lines(sphere_panel):
    p = sphere_panel
    for i in range(3):
        assert lorentz.mink_dot(p.Y[i], p.Y[i]) == pytest.approx(1.0, abs=1e-12)
        assert lorentz.mink_dot(p.base_point, p.Y[i]) < 0.0
    for gen, ell in zip((p.gen_A, p.gen_B, p.gen_C), p.ell):
        assert curve_length(gen) == pytest.approx(ell, rel=1e-11)


def test_sphere_relation(sphere_panel):
    p = sphere_panel
    rel = p.gen_C.m @ p.gen_B.m @ p.gen_A.m
    assert np.max(np.abs(rel - np.eye(3))) < 1e-12


def test_seam_lengths_match_hexagon_formula(sphere_panel):
    # cosh s_i = (cosh(l_i/2) + cosh(l_j/2) cosh(l_k/2)) / (sinh(l_j/2) sinh(l_k/2))
    ell = sphere_panel.ell
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        num = math.cosh(0.5 * ell[i]) + math.cosh(0.5 * ell[j]) * math.cosh(0.5 * ell[k])
        den = math.sinh(0.5 * ell[j]) * math.sinh(0.5 * ell[k])
        assert sphere_panel.arc_length[i] == pytest.approx(math.acosh(num / den), abs=1e-12)


def test_heights_are_concurrent(sphere_panel):
    p = sphere_panel
    for i in range(3):
        off = lorentz.signed_line_distance(lorentz.Geodesic(p.h[i]), p.height_point)
        assert abs(math.asinh(off)) < 1e-12
    assert bisector_residual(p) < 1e-12


def test_height_feet_lie_on_both_lines(sphere_panel):
    p = sphere_panel
    for i in range(3):
        assert abs(lorentz.mink_dot(p.p_feet[i], p.u[i])) < 1e-12
        assert abs(lorentz.mink_dot(p.p_feet[i], p.h[i])) < 1e-12
        assert abs(lorentz.mink_dot(p.delta_feet[i], p.Y[i])) < 1e-12
        assert p.delta_half[i] == pytest.approx(
            lorentz.dist_points(p.p_feet[i], p.delta_feet[i]), abs=1e-12)


def test_seam_midpoints_split_arcs(sphere_panel):
    p = sphere_panel
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        m = p.midpoints[i]
        assert abs(lorentz.mink_dot(m, p.u[i])) < 1e-12
        d1 = lorentz.dist_points(m, p.arc_feet[i][j])
        d2 = lorentz.dist_points(m, p.arc_feet[i][k])
        assert d1 == pytest.approx(d2, abs=1e-12)


def test_heights_waists_passthrough(sphere_panel):
    f0, f1, f2, a0, a1, a2 = sphere_heights_waists(sphere_panel)
    assert np.array_equal(f0, sphere_panel.p_feet[0])
    assert np.array_equal(f2, sphere_panel.p_feet[2])
    assert (a0, a1, a2) == tuple(sphere_panel.half_angles)
    assert a0 + a1 + a2 < 0.5 * math.pi


def test_sphere_rejects_bad_lengths():
    with pytest.raises(ValueError, match="non-positive length"):
        build_sphere(0.0, 1.0, 1.0)
    with pytest.raises(ValueError, match="non-positive length"):
        build_sphere(1.0, -2.0, 1.0)
