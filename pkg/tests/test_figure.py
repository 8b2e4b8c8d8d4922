"""Sawblade mesh: flip recursion, projective view, OBJ round trip."""

import io
import math

import numpy as np
import pytest

from striplab import lorentz
from striplab.arc_complex import Slope
from striplab.figure import (
    PhiMap,
    build_figure_mesh,
    flip_half_length,
    flip_tangent_vector,
    gap_plane_residuals,
    mesh_to_dict,
    read_obj_counts,
    write_obj,
)
from striplab.strip_map import frame_for_slope, strip_vector_sine
from striplab.surfaces import build_torus


def teeth_count(depth):
    return 1 + 3 * (2 ** depth - 1)


def slope_count(depth):
    return 3 + 3 * (2 ** depth - 1)


def test_root_flip_recovers_other_diagonal(boundary_panel, cone_panel):
    # cosh 2b + cosh 2c equals twice the product of diagonal weights, so
    # flipping one diagonal of the base quad must return the other.
    p, c = boundary_panel, cone_panel
    assert flip_half_length("boundary", p.b, p.c, p.a) == pytest.approx(p.d, abs=1e-14)
    assert flip_half_length("cone", c.b, c.c, c.a) == pytest.approx(c.d, abs=1e-14)


def test_flip_half_length_is_involutive(boundary_panel, cone_panel):
    for p in (boundary_panel, cone_panel):
        new = flip_half_length(p.flavor, p.c, p.a, p.b)
        assert flip_half_length(p.flavor, p.c, p.a, new) == pytest.approx(p.b, abs=1e-13)


def test_flip_half_length_matches_frame_walk(cone_panel):
    # Independent route: walk the frame of the flipped slope and measure
    # its diagonal directly.
    c = cone_panel
    C = frame_for_slope(c, Slope(1, 2)).corners
    direct = 0.5 * lorentz.dist_points(C[0], C[2])
    assert flip_half_length("cone", c.c, c.a, c.b) == pytest.approx(direct, abs=1e-12)


def test_flip_tangent_recursion_matches_walk(boundary_panel, cone_panel):
    for panel in (boundary_panel, cone_panel):
        f = {a: strip_vector_sine(panel, a) for a in ("alpha", "beta", "gamma", "delta")}
        rec = flip_tangent_vector(panel.flavor, f["beta"], f["gamma"], f["alpha"],
                                  (panel.a, panel.d, panel.b, panel.c))
        assert np.max(np.abs(rec - f["delta"])) < 1e-9
        # one level deeper: flip the beta side, target slope 1/2
        d12 = flip_half_length(panel.flavor, panel.c, panel.a, panel.b)
        rec12 = flip_tangent_vector(panel.flavor, f["gamma"], f["alpha"], f["beta"],
                                    (panel.b, d12, panel.c, panel.a))
        direct = strip_vector_sine(panel, Slope(1, 2))
        assert np.max(np.abs(rec12 - direct)) < 1e-9


def test_mesh_counts():
    panel = build_torus(0.8, 0.65, 1.3, flavor="cone")
    for depth in (0, 1, 3):
        mesh = build_figure_mesh(panel, depth)
        assert len(mesh.slopes) == slope_count(depth)
        assert mesh.vertex_count == slope_count(depth)
        assert len(mesh.faces) == teeth_count(depth)
        assert len(mesh.gap_faces) == slope_count(depth)
        assert mesh.gap_vertices.shape == (2 * slope_count(depth), 3)
        assert np.all(np.isfinite(mesh.vertices))
        assert np.all(np.isfinite(mesh.gap_vertices))


def test_gap_wedges_are_planar(boundary_panel, cone_panel):
    for panel in (boundary_panel, cone_panel):
        mesh = build_figure_mesh(panel, 6)
        res = gap_plane_residuals(mesh)
        assert res.shape == (len(mesh.gap_faces),)
        assert res.max() < 1e-6


def test_figure_rejects_sphere(sphere_panel):
    with pytest.raises(ValueError, match="figure requires a torus panel"):
        build_figure_mesh(sphere_panel, 2)


def test_phi_map_defaults():
    phi = PhiMap()
    assert np.allclose(phi.chart, np.full(3, 1.0 / math.sqrt(3.0)))
    assert np.allclose(phi.matrix, np.eye(3))
    # offset direction maps to bhat after the chart rotation
    assert np.allclose(phi.bhat, phi.rot @ phi.chart)
    y = phi.point(np.array([1.0, 2.0, 3.0]), Slope(1, 1))
    assert np.all(np.isfinite(y))


def test_phi_map_singular_chart():
    phi = PhiMap()
    with pytest.raises(ValueError, match="chart singular for slope 1/1"):
        phi.point(np.array([1.0, -1.0, 0.0]), Slope(1, 1))
    with pytest.raises(ValueError, match="chart singular"):
        phi.direction(np.array([1.0, -1.0, 0.0]), Slope(2, 1))


def test_obj_round_trip(cone_panel):
    mesh = build_figure_mesh(cone_panel, 3)
    buf = io.StringIO()
    write_obj(mesh, buf)
    buf.seek(0)
    nv, nf = read_obj_counts(buf)
    assert nv == slope_count(3) + 2 * slope_count(3)
    assert nf == teeth_count(3) + slope_count(3)


def test_obj_reader_rejects_malformed():
    with pytest.raises(ValueError, match="malformed OBJ vertex"):
        read_obj_counts(io.StringIO("v 1 2\n"))
    with pytest.raises(ValueError, match="malformed OBJ face"):
        read_obj_counts(io.StringIO("v 0 0 0\nf 1 1\n"))
    with pytest.raises(ValueError, match="OBJ face index out of range"):
        read_obj_counts(io.StringIO("v 0 0 0\nv 0 0 1\nv 0 1 0\nf 1 2 4\n"))
    # comments and blank lines pass through
    assert read_obj_counts(io.StringIO("# header\n\nv 0 0 1\n")) == (1, 0)


def test_mesh_to_dict_shape(cone_panel):
    mesh = build_figure_mesh(cone_panel, 2)
    d = mesh_to_dict(mesh)
    assert set(d) == {"slopes", "vertices", "faces", "gap_vertices", "gap_faces"}
    assert len(d["vertices"]) == slope_count(2)
    assert len(d["gap_vertices"]) == 2 * slope_count(2)
    assert all(len(f) == 3 for f in d["faces"])
