"""Mesh export of the strip-map image for torus panels.

The image of the strip map over the Farey complex is an unbounded
polyhedral surface: one triangle per triangulation, with vertices the
tangent vectors of the three arcs. A projective transformation sending
the origin to infinity makes the whole surface visible as a bounded
"sawblade": teeth triangles plus, at every slope, a planar gap wedge
spanned by the two spiral limit directions of its neighbor fan.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .arc_complex import ROOT_TRIANGLE, Slope, flip
from .strip_map import strip_vector_sine

SPIRAL_TOL = 1e-13
SPIRAL_CAP = 200
CHART_TOL = 1e-12
LOG2 = math.log(2.0)


def _logcosh(x):
    x = abs(x)
    return x + math.log1p(math.exp(-2.0 * x)) - LOG2


def _logsinh(x):
    # x > 0; stable for both tiny and huge arguments.
    if x < 1.0:
        return math.log(math.sinh(x))
    return x + math.log1p(-math.exp(-2.0 * x)) - LOG2


def asinh_exp(l):
    """asinh(exp(l)) without overflow."""
    return l + math.log1p(math.sqrt(1.0 + math.exp(-2.0 * l)))


def acosh_exp(l):
    """acosh(exp(l)) for l >= 0 without overflow."""
    return l + math.log1p(math.sqrt(max(0.0, 1.0 - math.exp(-2.0 * l))))


def flip_half_length(flavor, hl_keep1, hl_keep2, hl_removed):
    """Half-length of the new diagonal after a flip.

    The four panel corners are shared by every triangulation, so the
    sum cosh 2b + cosh 2c determined by the kept pair equals the
    flavor-dependent product of the two diagonal weights.
    """
    num = np.logaddexp(_logcosh(2.0 * hl_keep1), _logcosh(2.0 * hl_keep2))
    if flavor == "boundary":
        return asinh_exp(num - LOG2 - _logsinh(hl_removed))
    return acosh_exp(num - LOG2 - _logcosh(hl_removed))


def _log_velocities(flavor, a, d, b, c):
    """Logs of the flip velocities (A, B, C, D) for half-lengths a,d,b,c."""
    if flavor == "boundary":
        la, ld = _logcosh(a), _logcosh(d)
        lb, lc = _logcosh(b), _logcosh(c)
        wa, wd = _logsinh(a), _logsinh(d)
    else:
        la, ld = _logsinh(a), _logsinh(d)
        lb, lc = _logsinh(b), _logsinh(c)
        wa, wd = _logcosh(a), _logcosh(d)
    lsum = np.logaddexp(wa, wd)
    return (LOG2 + la + wd, LOG2 + lb + lsum, LOG2 + lc + lsum, LOG2 + ld + wa)


def flip_tangent_vector(flavor, f_keep1, f_keep2, f_removed, hl):
    """Tangent vector of the new arc from the flip relation.

    hl = (a, d, b, c) half-lengths with a the removed and d the new
    diagonal. Only safe while the velocities stay within float range;
    the spiral iteration uses the renormalized log-space variant.
    """
    la, lb, lc, ld = _log_velocities(flavor, *hl)
    return (math.exp(lb - ld) * f_keep1 + math.exp(lc - ld) * f_keep2
            - math.exp(la - ld) * f_removed)


@dataclass
class PhiMap:
    """Projective view transform y = Q (M x + b) / <n, x>.

    n is the chart functional (the plane <n, x> = 0 goes to infinity,
    in particular the origin does), b the affine offset whose direction
    is where Phi(0) ends up at infinity, and Q the rotation taking n to
    the z-axis so the teeth tips land in a horizontal plane.
    """

    matrix: np.ndarray = None
    chart: np.ndarray = None
    offset: np.ndarray = None

    def __post_init__(self):
        if self.matrix is None:
            self.matrix = np.eye(3)
        self.matrix = np.asarray(self.matrix, dtype=float)
        if self.chart is None:
            self.chart = np.full(3, 1.0 / math.sqrt(3.0))
        self.chart = np.asarray(self.chart, dtype=float)
        self.chart = self.chart / np.linalg.norm(self.chart)
        if self.offset is None:
            self.offset = self.chart.copy()
        self.offset = np.asarray(self.offset, dtype=float)
        self.rot = _rotation_to_z(self.chart)
        nb = np.linalg.norm(self.offset)
        self.bhat = self.rot @ (self.offset / nb) if nb > 0 else np.zeros(3)

    def point(self, x, slope):
        den = float(self.chart @ x)
        if den <= CHART_TOL * max(1.0, float(np.linalg.norm(x))):
            raise ValueError(f"chart singular for slope {slope}")
        return self.rot @ ((self.matrix @ x + self.offset) / den)

    def direction(self, v, slope):
        """Limit of point(t v) as t grows: image of a direction at infinity."""
        den = float(self.chart @ v)
        if den <= CHART_TOL:
            raise ValueError(f"chart singular for slope {slope}")
        return self.rot @ (self.matrix @ v / den)


def _rotation_to_z(n):
    z = np.array([0.0, 0.0, 1.0])
    c = float(n @ z)
    if c > 1.0 - 1e-15:
        return np.eye(3)
    if c < -1.0 + 1e-15:
        return np.diag([1.0, -1.0, -1.0])
    k = np.cross(n, z)
    s = np.linalg.norm(k)
    k = k / s
    kx = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + s * kx + (1.0 - c) * (kx @ kx)


@dataclass
class FigureMesh:
    """Sawblade mesh: teeth triangles plus one gap wedge per slope."""

    slopes: list
    vertices: np.ndarray  # (n_slopes, 3) images of the tangent vectors
    faces: list  # teeth, one index triple per Farey triangle
    gap_vertices: np.ndarray  # (2 * n_slopes, 3) images of spiral limits
    gap_faces: list  # one triple per slope: (slope vtx, v+, v-)
    bhat: np.ndarray = field(default=None)

    @property
    def vertex_count(self):
        return len(self.slopes)


def _enumerate_with_parents(depth):
    """Triangles as slope triples, each with the flip that created it.

    Yields (triangle, removed, new) where triangle is a tuple of three
    Slopes; the root has removed = new = None. Breadth-first, children
    ordered by the flipped vertex, matching the arc-complex count
    1 + 3 (2^depth - 1).
    """
    root = tuple(ROOT_TRIANGLE)
    out = [(root, None, None)]
    frontier = [(root, None)]
    for _ in range(depth):
        nxt = []
        for tri, back in frontier:
            for v in tri:
                if back is not None and v == back:
                    continue
                new = flip(tri, v)
                ordered = tuple(s for s in tri if s != v) + (new,)
                out.append((ordered, v, new))
                nxt.append((ordered, new))
        frontier = nxt
    return out


def _spiral_limit(flavor, hl_s, f_s, hl_x, f_x, hl_y, f_y):
    """Unit limit direction of the neighbor fan f(y), flip(x), ... at slope s.

    Marches the three-term flip recursion around s away from x, keeping
    the running tangent vector renormalized and all velocity ratios in
    log space, until the direction settles.
    """
    norm_y = float(np.linalg.norm(f_y))
    g_prev = f_x / max(float(np.linalg.norm(f_x)), 1e-300)
    l_prev = math.log(max(float(np.linalg.norm(f_x)), 1e-300))
    g_cur = f_y / max(norm_y, 1e-300)
    l_cur = math.log(max(norm_y, 1e-300))
    hl_prev, hl_cur = hl_x, hl_y
    for _ in range(SPIRAL_CAP):
        hl_new = flip_half_length(flavor, hl_s, hl_cur, hl_prev)
        la, lb, lc, ld = _log_velocities(flavor, hl_prev, hl_new, hl_s, hl_cur)
        w = (math.exp(lb - ld - l_cur) * f_s
             + math.exp(lc - ld) * g_cur
             - math.exp(la - ld + l_prev - l_cur) * g_prev)
        wn = float(np.linalg.norm(w))
        g_new = w / wn
        if float(np.linalg.norm(g_new - g_cur)) < SPIRAL_TOL:
            return g_new
        l_prev, l_cur = l_cur, l_cur + math.log(wn)
        g_prev, g_cur = g_cur, g_new
        hl_prev, hl_cur = hl_cur, hl_new
    return g_cur


def build_figure_mesh(panel, depth, phi=None):
    """Sawblade mesh of the strip-map image at the given Farey depth."""
    if panel.flavor not in ("boundary", "cone"):
        raise ValueError("figure requires a torus panel")
    if phi is None:
        phi = PhiMap()
    flavor = panel.flavor
    base_hl = {Slope(1, 0): panel.b, Slope(0, 1): panel.c, Slope(1, 1): panel.a}
    base_f = {
        Slope(1, 0): strip_vector_sine(panel, "beta"),
        Slope(0, 1): strip_vector_sine(panel, "gamma"),
        Slope(1, 1): strip_vector_sine(panel, "alpha"),
    }
    hl = dict(base_hl)
    fvec = dict(base_f)
    order = list(base_hl)
    triangles = _enumerate_with_parents(depth)
    fan_seed = {}
    for tri, removed, new in triangles:
        if new is not None and new not in hl:
            k1, k2 = (s for s in tri if s != new)
            d = flip_half_length(flavor, hl[k1], hl[k2], hl[removed])
            fvec[new] = flip_tangent_vector(
                flavor, fvec[k1], fvec[k2], fvec[removed],
                (hl[removed], d, hl[k1], hl[k2]))
            hl[new] = d
            order.append(new)
        for v in tri:
            if v not in fan_seed:
                x, y = (s for s in tri if s != v)
                fan_seed[v] = (x, y)

    index = {s: i for i, s in enumerate(order)}
    verts = np.array([phi.point(fvec[s], s) for s in order])
    faces = [tuple(index[s] for s in tri) for tri, _, _ in triangles]

    gap_verts = np.empty((2 * len(order), 3))
    gap_faces = []
    for i, s in enumerate(order):
        x, y = fan_seed[s]
        vp = _spiral_limit(flavor, hl[s], fvec[s], hl[x], fvec[x], hl[y], fvec[y])
        vm = _spiral_limit(flavor, hl[s], fvec[s], hl[y], fvec[y], hl[x], fvec[x])
        gap_verts[2 * i] = phi.direction(vp, s)
        gap_verts[2 * i + 1] = phi.direction(vm, s)
        gap_faces.append((i, 2 * i, 2 * i + 1))
    return FigureMesh(
        slopes=[str(s) for s in order],
        vertices=verts,
        faces=faces,
        gap_vertices=gap_verts,
        gap_faces=gap_faces,
        bhat=phi.bhat,
    )


def gap_plane_residuals(mesh):
    """Angular deviation of each gap face from a plane containing Phi(0).

    The gap wedge at a slope spans a plane through the origin of the
    tangent space, so its image plane contains the direction in which
    the origin was sent to infinity. The residual is the triple product
    of the two face edges with that direction, normalized by the edge
    lengths: this stays meaningful for the very thin wedges of deep
    slopes, where a unit face normal would be all rounding noise. The
    denominator carries a floor at the coordinate rounding resolution,
    so a face whose extent collapses below float precision reads as
    planar rather than as noise.
    """
    eps = np.finfo(float).eps
    out = np.empty(len(mesh.gap_faces))
    for k, (i, jp, jm) in enumerate(mesh.gap_faces):
        a = mesh.vertices[i]
        e1 = mesh.gap_vertices[jp] - a
        e2 = mesh.gap_vertices[jm] - a
        vol = abs(float(np.cross(e1, e2) @ mesh.bhat))
        floor = 4096.0 * eps * max(1.0, float(np.linalg.norm(a)))
        out[k] = vol / (np.linalg.norm(e1) * np.linalg.norm(e2) + floor * floor)
    return out


def write_obj(mesh, stream):
    """ASCII OBJ: slope vertices, then gap vertices, then teeth and gaps."""
    nv = mesh.vertex_count
    for v in mesh.vertices:
        stream.write(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
    for v in mesh.gap_vertices:
        stream.write(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
    for a, b, c in mesh.faces:
        stream.write(f"f {a + 1} {b + 1} {c + 1}\n")
    for i, jp, jm in mesh.gap_faces:
        stream.write(f"f {i + 1} {nv + jp + 1} {nv + jm + 1}\n")


def read_obj_counts(stream):
    """(vertex count, face count) of an OBJ stream; rejects malformed records."""
    nv = nf = 0
    for line in stream:
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            if len(parts) != 4:
                raise ValueError("malformed OBJ vertex")
            [float(p) for p in parts[1:]]
            nv += 1
        elif parts[0] == "f":
            if len(parts) < 4:
                raise ValueError("malformed OBJ face")
            idx = [int(p) for p in parts[1:]]
            if any(i < 1 or i > nv for i in idx):
                raise ValueError("OBJ face index out of range")
            nf += 1
    return nv, nf


def mesh_to_dict(mesh):
    return {
        "slopes": mesh.slopes,
        "vertices": [list(map(float, v)) for v in mesh.vertices],
        "faces": [list(f) for f in mesh.faces],
        "gap_vertices": [list(map(float, v)) for v in mesh.gap_vertices],
        "gap_faces": [list(f) for f in mesh.gap_faces],
    }
