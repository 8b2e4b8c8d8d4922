"""Convexity of the strip-map image: flip relations and Killing criteria.

A flip replaces the arc alpha of a triangulation by its partner delta.
The four tangent vectors of the involved arcs satisfy one linear
relation B f(beta) + C f(gamma) - A f(alpha) - D f(delta) = 0, and the
image of the strip map is locally convex along the flip wall exactly
when A + D < B + C. The coefficients also arise as velocities of Killing
fields assigned to the tiles of the arc system; checking the assignment
(equivariance, vertex parallelograms, edge increments) certifies
convexity without solving the linear system.
"""

import math
from dataclasses import dataclass

import numpy as np

from .lorentz import Isometry, mink_cross, mink_dot, normalize_dual, reflection_matrix
from .strip_map import strip_vector_sine
from .surfaces import build_cusp_family, build_sphere

LOXODROMIC_TOL = 1e-10
AXIS_WAIST_TOL = 1e-7
RESIDUAL_TOL = 1e-8
RANK_TOL = 1e-10


@dataclass
class FlipReport:
    """Coefficients of one flip relation and the resulting convexity verdict."""

    flip: str
    A: float
    B: float
    C: float
    D: float
    margin: float
    convex: bool
    residual: float

    def to_dict(self):
        return {
            "flip": self.flip,
            "A": self.A,
            "B": self.B,
            "C": self.C,
            "D": self.D,
            "margin": self.margin,
            "convex": self.convex,
            "residual": self.residual,
        }


def solve_flip_relation(f_alpha, f_beta, f_gamma, f_delta, flip="alpha"):
    """Kernel of the 3x4 system spanned by the four tangent vectors.

    Requires (f_alpha, f_beta, f_gamma) linearly independent. The unique
    relation is reported as (A, B, C, D) with unit Euclidean norm and
    A > 0; for genuine flips D then comes out positive as well.
    """
    cols = [np.asarray(v, dtype=float) for v in (f_alpha, f_beta, f_gamma, f_delta)]
    m = np.column_stack(cols)
    norms = np.linalg.norm(m, axis=0)
    norms[norms == 0.0] = 1.0
    mn = m / norms
    s3 = np.linalg.svd(mn[:, :3], compute_uv=False)
    if s3[2] < RANK_TOL * s3[0]:
        raise ValueError("degenerate basis")
    _, s, vh = np.linalg.svd(mn)
    if s[2] < RANK_TOL * s[0]:
        raise ValueError("non-generic")
    kernel = vh[3]
    residual = float(np.linalg.norm(mn @ kernel) / s[0])
    coeff = kernel / norms
    a, b, c, d = -coeff[0], coeff[1], coeff[2], -coeff[3]
    scale = 1.0 / math.sqrt(a * a + b * b + c * c + d * d)
    if a < 0.0:
        scale = -scale
    a, b, c, d = a * scale, b * scale, c * scale, d * scale
    margin = b + c - a - d
    return FlipReport(
        flip=flip,
        A=float(a),
        B=float(b),
        C=float(c),
        D=float(d),
        margin=float(margin),
        convex=bool(margin > 0.0),
        residual=residual,
    )


def velocities_sphere(a_hat, b_hat, c_hat):
    """Closed-form flip velocities of the sphere with foot waists."""
    if min(a_hat, b_hat, c_hat) <= 0.0 or a_hat + b_hat + c_hat >= 0.5 * math.pi:
        raise ValueError("angle-sum violation")
    return (
        2.0 * math.cos(a_hat),
        2.0 * math.cos(b_hat),
        2.0 * math.cos(c_hat),
        2.0 * math.sin(a_hat),
    )


def velocities_torus(a, d, b, c, flavor):
    """Closed-form flip velocities of the torus for either flavor."""
    if flavor == "boundary":
        total = 2.0 * math.sinh(a) * math.sinh(d)
        ga, gd = math.cosh(a), math.cosh(d)
        gb, gc = math.cosh(b), math.cosh(c)
        wa, wd = math.sinh(a), math.sinh(d)
    elif flavor == "cone":
        total = 2.0 * math.cosh(a) * math.cosh(d)
        ga, gd = math.sinh(a), math.sinh(d)
        gb, gc = math.sinh(b), math.sinh(c)
        wa, wd = math.cosh(a), math.cosh(d)
    else:
        raise ValueError(f"unknown torus flavor {flavor!r}")
    # The derived half-lengths must match (a, d): their cosh-doubles sum
    # to a theta-independent function of the diagonals.
    got = math.cosh(2.0 * b) + math.cosh(2.0 * c)
    if abs(got - total) > 1e-9 * max(1.0, abs(total)):
        raise ValueError("inconsistent inputs")
    return (2.0 * ga * wd, 2.0 * gb * (wa + wd), 2.0 * gc * (wa + wd), 2.0 * gd * wa)


# ---------------------------------------------------------------------------
# Killing-field certificates.


@dataclass
class EdgeCheck:
    """Adjacency of two tiles across an arc, with the declared waist.

    `toward` is the unit normal of the arc at the waist pointing into the
    tile e_prime; `expected` is the signed velocity of the increment
    measured in that direction.
    """

    e: str
    e_prime: str
    arc: str
    arc_dual: np.ndarray
    waist: np.ndarray
    toward: np.ndarray
    expected: float


@dataclass
class KillingAssignment:
    """Killing vectors on the tiles of the flipped arc system."""

    flavor: str
    tiles: dict
    vertex_cycles: list
    edges: list
    equivariance: list  # (matrix, det sign, src tile, dst tile)
    velocities: tuple  # closed-form (A, B, C, D)


def _torus_assignment(panel):
    C = panel.corners
    if panel.flavor == "boundary":
        wa, wd = math.sinh(panel.a), math.sinh(panel.d)
    else:
        wa, wd = math.cosh(panel.a), math.cosh(panel.d)
    inner = {
        "pAD": C[0] * wd - C[1] * wa,
        "pDAp": C[1] * wa - C[2] * wd,
        "pApDp": C[2] * wd - C[3] * wa,
        "pDpA": C[3] * wa - C[0] * wd,
    }
    mids = [panel.m01, panel.m12, panel.m23, panel.m30]
    outer_of = {"obar_pAD": "pAD", "obar_pDAp": "pDAp",
                "obar_pApDp": "pApDp", "obar_pDpA": "pDpA"}
    tiles = dict(inner)
    equivariance = []
    for k, (name, src) in enumerate(outer_of.items()):
        rot = Isometry.rotation_pi(mids[k]).m
        tiles[name] = rot @ inner[src]
        equivariance.append((rot, 1.0, src, name))
    # The outer tiles are also deck translates of inner ones; these checks
    # compare the rotation extension against the holonomy extension.
    equivariance.append((panel.gen_v.inverse().m, 1.0, "pApDp", "obar_pAD"))
    equivariance.append((panel.gen_u.m, 1.0, "pDpA", "obar_pDAp"))
    equivariance.append((panel.gen_v.m, 1.0, "pAD", "obar_pApDp"))
    equivariance.append((panel.gen_u.inverse().m, 1.0, "pDAp", "obar_pDpA"))

    A, B, Cv, D = velocities_torus(panel.a, panel.d, panel.b, panel.c, panel.flavor)
    dA = normalize_dual(mink_cross(C[0], C[2]))
    dD = normalize_dual(mink_cross(C[1], C[3]))
    S, _ = panel.side_data()
    p = panel.p

    def against(dual, inside_pt):
        return dual if mink_dot(inside_pt, dual) > 0.0 else -dual

    edges = [
        EdgeCheck("pDpA", "pAD", "alpha", dA, p, against(dA, mids[0]), -A),
        EdgeCheck("pDAp", "pApDp", "alpha", dA, p, against(dA, mids[2]), -A),
        EdgeCheck("pAD", "pDAp", "delta", dD, p, against(dD, mids[1]), -D),
        EdgeCheck("pApDp", "pDpA", "delta", dD, p, against(dD, mids[3]), -D),
        EdgeCheck("obar_pAD", "pAD", "beta", S[0], mids[0], S[0], B),
        EdgeCheck("obar_pApDp", "pApDp", "beta", S[2], mids[2], S[2], B),
        EdgeCheck("obar_pDAp", "pDAp", "gamma", S[1], mids[1], S[1], Cv),
        EdgeCheck("obar_pDpA", "pDpA", "gamma", S[3], mids[3], S[3], Cv),
    ]
    cycles = [("pAD", "pDAp", "pApDp", "pDpA")]
    return KillingAssignment(panel.flavor, tiles, cycles, edges, equivariance,
                             (A, B, Cv, D))


def _sphere_assignment(panel):
    feet = panel.p_feet
    u_b = normalize_dual(mink_cross(feet[1], feet[0]))
    u_g = normalize_dual(mink_cross(feet[2], feet[0]))
    # Unit translations along the waist-triangle sides, directed toward
    # the foot of the flipped arc.
    if mink_dot(mink_cross(u_b, feet[1]),
                feet[0] + mink_dot(feet[0], feet[1]) * feet[1]) < 0.0:
        u_b = -u_b
    if mink_dot(mink_cross(u_g, feet[2]),
                feet[0] + mink_dot(feet[0], feet[2]) * feet[2]) < 0.0:
        u_g = -u_g
    r = [reflection_matrix(panel.u[i]) for i in range(3)]
    tiles = {
        "P_beta": u_b,
        "P_gamma": u_g,
        "ra_P_beta": -(r[0] @ u_b),
        "ra_P_gamma": -(r[0] @ u_g),
        "rb_P_beta": -(r[1] @ u_b),
        "rg_P_gamma": -(r[2] @ u_g),
    }
    equivariance = [
        (r[0], -1.0, "P_beta", "ra_P_beta"),
        (r[0], -1.0, "P_gamma", "ra_P_gamma"),
        (r[1], -1.0, "P_beta", "rb_P_beta"),
        (r[2], -1.0, "P_gamma", "rg_P_gamma"),
    ]
    ah, bh, ch = panel.half_angles
    A, B, Cv, D = velocities_sphere(ah, bh, ch)
    h0 = panel.h[0]
    toward_gamma = h0 if mink_dot(feet[2], h0) > 0.0 else -h0
    edges = [
        EdgeCheck("P_gamma", "ra_P_gamma", "bc", panel.u[0], feet[0],
                  panel.u[0], -A),
        EdgeCheck("P_beta", "P_gamma", "aa", h0, feet[0], toward_gamma, -D),
        EdgeCheck("rb_P_beta", "P_beta", "ca", panel.u[1], feet[1],
                  -panel.u[1], B),
        EdgeCheck("rg_P_gamma", "P_gamma", "ab", panel.u[2], feet[2],
                  -panel.u[2], Cv),
    ]
    cycles = [("P_beta", "P_gamma", "ra_P_gamma", "ra_P_beta")]
    return KillingAssignment("sphere", tiles, cycles, edges, equivariance,
                             (A, B, Cv, D))


def build_killing_assignment(panel):
    """The explicit tile-to-Killing-field assignment for the alpha flip."""
    if panel.flavor == "sphere":
        return _sphere_assignment(panel)
    return _torus_assignment(panel)


def killing_criterion_check(panel, psi):
    """Residuals of the three conditions certifying the strip-map criterion.

    (i) equivariance of psi under the listed symmetries, (ii) alternating
    vertex sums, (iii) every edge increment is a translation whose axis
    runs through the declared waist perpendicular to the arc, with the
    expected signed velocity. Raises if an increment fails to be
    loxodromic or its axis misses the waist.
    """
    t = psi.tiles
    equiv = 0.0
    for mat, det, src, dst in psi.equivariance:
        res = t[dst] - det * (mat @ t[src])
        equiv = max(equiv, float(np.max(np.abs(res))))
    vertex = 0.0
    for c1, c2, c3, c4 in psi.vertex_cycles:
        res = t[c1] - t[c2] + t[c3] - t[c4]
        vertex = max(vertex, float(np.max(np.abs(res))))
    extracted = {}
    axis_waist = 0.0
    perp = 0.0
    vel_err = 0.0
    expect_map = dict(zip(("alpha", "beta", "gamma", "delta"), psi.velocities))
    if psi.flavor == "sphere":
        expect_map = dict(zip(("bc", "ca", "ab", "aa"), psi.velocities))
    for edge in psi.edges:
        inc = t[edge.e_prime] - t[edge.e]
        q = mink_dot(inc, inc)
        if q <= LOXODROMIC_TOL:
            raise ValueError("increment not loxodromic")
        axis = inc / math.sqrt(q)
        miss = abs(math.asinh(mink_dot(axis, edge.waist)))
        if miss > AXIS_WAIST_TOL:
            raise ValueError("axis misses waist by more than 1e-7")
        axis_waist = max(axis_waist, miss)
        perp = max(perp, abs(mink_dot(axis, edge.arc_dual)))
        flow = mink_cross(inc, edge.waist)
        signed = float(mink_dot(flow, edge.toward))
        extracted.setdefault(edge.arc, signed)
        vel_err = max(vel_err, abs(signed - edge.expected))
    names = ("alpha", "beta", "gamma", "delta") if psi.flavor != "sphere" else (
        "bc", "ca", "ab", "aa")
    abcd = tuple(abs(extracted[n]) for n in names)
    return {
        "equivariance": equiv,
        "vertex": vertex,
        "axis_waist": axis_waist,
        "perpendicular": perp,
        "velocity_error": vel_err,
        "velocities_signed": extracted,
        "velocities_expected": {n: expect_map[n] for n in names},
        "ABCD": abcd,
    }


def midpoint_counterexample(eps):
    """Flip report for the sphere (eps, 1, 1) with midpoint waists.

    Normalized so B = C = 1; for small eps the margin 2 - A - D is
    negative, exhibiting the nonconvexity of the midpoint rule. Large
    eps values simply report whatever sign results.
    """
    panel = build_sphere(eps, 1.0, 1.0)
    vecs = [strip_vector_sine(panel, arc, rule="midpoint")
            for arc in ("bc", "ca", "ab", "aa")]
    rep = solve_flip_relation(*vecs, flip="bc")
    s = 2.0 / (rep.B + rep.C)
    a, b, c, d = rep.A * s, rep.B * s, rep.C * s, rep.D * s
    margin = b + c - a - d
    return FlipReport(
        flip=rep.flip,
        A=a,
        B=b,
        C=c,
        D=d,
        margin=margin,
        convex=bool(margin > 0.0),
        residual=rep.residual,
    )


def parabolic_ratio_check(a_bar, d_bar, theta, t_list):
    """Convexity ratios along the cusp-limit family, one per t.

    Each ratio sinh((a+d)/2) / (cosh((a-d)/2) (sinh b + sinh c)) is < 1
    exactly when inequality (5) holds for the member panel; the family
    stays uniformly bounded away from 1 as t grows.
    """
    out = []
    for t in t_list:
        panel = build_cusp_family(a_bar, d_bar, theta, t)
        at, dt = panel.a, panel.d
        num = math.sinh(0.5 * (at + dt))
        den = math.cosh(0.5 * (at - dt)) * (math.sinh(panel.b) + math.sinh(panel.c))
        out.append(num / den)
    return out


def parabolic_limit_bound(a_bar, d_bar, theta):
    """Limit of the family's ratio as t grows."""
    s = math.sin(0.5 * theta) + math.cos(0.5 * theta)
    return 1.0 / (math.cosh(0.5 * (a_bar - d_bar)) * s)


# ---------------------------------------------------------------------------
# Inequality chains used by the verification registry.


def sphere_chain_margins(a_hat, b_hat, c_hat):
    """Successive margins of cos b + cos c > 1 + cos(b+c) > 1 + sin a > cos a + sin a."""
    t1 = math.cos(b_hat) + math.cos(c_hat)
    t2 = 1.0 + math.cos(b_hat + c_hat)
    t3 = 1.0 + math.sin(a_hat)
    t4 = math.cos(a_hat) + math.sin(a_hat)
    return (t1 - t2, t2 - t3, t3 - t4)


def torus_reduction_margins(a, d):
    """Margins and residual of the boundary-torus reduction chain.

    Returns (identity residual, 2 - tanh(d/2) - tanh(a/2),
    sqrt(sinh a/sinh d) + sqrt(sinh d/sinh a) - 2).
    """
    sa, sd = math.sinh(a), math.sinh(d)
    lhs = math.sinh(a + d) - sa - sd
    rhs = sa * 2.0 * math.sinh(0.5 * d) ** 2 + sd * 2.0 * math.sinh(0.5 * a) ** 2
    t = math.tanh(0.5 * d) + math.tanh(0.5 * a)
    ratio = math.sqrt(sa / sd) + math.sqrt(sd / sa)
    return (abs(lhs - rhs), 2.0 - t, ratio - 2.0)


def inequality4_slack(a, d, b, c):
    """Boundary flavor: cosh b + cosh c - sinh(a+d)/(sinh a + sinh d)."""
    return math.cosh(b) + math.cosh(c) - math.sinh(a + d) / (
        math.sinh(a) + math.sinh(d))


def inequality5_slack(a, d, b, c):
    """Cone flavor: sinh b + sinh c - sinh((a+d)/2)/cosh((a-d)/2)."""
    return math.sinh(b) + math.sinh(c) - math.sinh(0.5 * (a + d)) / math.cosh(
        0.5 * (a - d))
