"""Hyperbolic structures on the once-punctured torus and thrice-punctured sphere.

Torus panels place the two diagonal arcs of the fundamental quadrilateral
through the lift p = (0, 0, 1) of their common point, at angle theta, with
corner vectors whose third coordinates are sinh (boundary flavor,
hyperideal corners) or cosh (cone flavor, true vertices) of the
half-lengths. Sphere panels are built from the pairwise distances of the
three seam-arc lines, which equal half the boundary lengths.
"""

import math

import numpy as np

from .lorentz import (
    Geodesic,
    Isometry,
    angle_lines,
    intersect_lines,
    mink_cross,
    mink_dot,
    normalize_dual,
    normalize_point,
    reflection_matrix,
    tangent_toward,
)

P_BASE = np.array([0.0, 0.0, 1.0])


class TorusPanel:
    """One-holed or cone torus with diagonal half-lengths a, d and angle theta."""

    flavor_names = ("boundary", "cone")

    def __init__(self, flavor, a, d, theta, family=None):
        if flavor not in self.flavor_names:
            raise ValueError(f"unknown torus flavor {flavor!r}")
        if a <= 0.0 or d <= 0.0 or not (0.0 < theta < math.pi):
            raise ValueError("inadmissible (a,d,theta)")
        self.flavor = flavor
        self.a = float(a)
        self.d = float(d)
        self.theta = float(theta)
        self.family = family  # (a_bar, d_bar, t) for cusp-limit members
        ct, st = math.cos(theta), math.sin(theta)
        if flavor == "boundary":
            ra, za = math.cosh(a), math.sinh(a)
            rd, zd = math.cosh(d), math.sinh(d)
            cosh2b = za * zd - ra * rd * ct
            cosh2c = za * zd + ra * rd * ct
        else:
            ra, za = math.sinh(a), math.cosh(a)
            rd, zd = math.sinh(d), math.cosh(d)
            cosh2b = za * zd - ra * rd * ct
            cosh2c = za * zd + ra * rd * ct
        if cosh2b <= 1.0 or cosh2c <= 1.0:
            raise ValueError("inadmissible (a,d,theta)")
        self.b = 0.5 * math.acosh(cosh2b)
        self.c = 0.5 * math.acosh(cosh2c)
        A = np.array([ra, 0.0, za])
        D = np.array([rd * ct, rd * st, zd])
        Ap = np.array([-ra, 0.0, za])
        Dp = np.array([-rd * ct, -rd * st, zd])
        self.corners = np.stack([A, D, Ap, Dp])  # ccw
        self.p = P_BASE.copy()
        self.m01 = normalize_point(A + D)
        self.m12 = normalize_point(D + Ap)
        self.m23 = normalize_point(Ap + Dp)
        self.m30 = normalize_point(Dp + A)
        rp = Isometry.rotation_pi(self.p)
        r01 = Isometry.rotation_pi(self.m01)
        r12 = Isometry.rotation_pi(self.m12)
        self.gen_v = rp @ r01
        self.gen_u = r12 @ rp
        if flavor == "cone":
            self.cone_angle = sum(self.corner_angle(i) for i in range(4))
            if not (0.0 < self.cone_angle < 2.0 * math.pi):
                raise ValueError("inadmissible (a,d,theta)")
        else:
            self.cone_angle = None

    @property
    def spacelike_corners(self):
        return self.flavor == "boundary"

    def corner_angle(self, i):
        """Interior angle of the quadrilateral at corner i (cone flavor)."""
        if self.flavor != "cone":
            raise ValueError("corners are hyperideal for the boundary flavor")
        C = self.corners
        t1 = tangent_toward(C[i], C[(i + 1) % 4])
        t2 = tangent_toward(C[i], C[(i - 1) % 4])
        return math.acos(min(1.0, max(-1.0, mink_dot(t1, t2))))

    def diagonal_duals(self):
        """Unit duals of the a-diagonal [C0 C2] and d-diagonal [C1 C3]."""
        dA = normalize_dual(mink_cross(self.corners[0], self.corners[2]))
        dD = normalize_dual(mink_cross(self.corners[1], self.corners[3]))
        return dA, dD

    def side_data(self):
        """Side duals oriented positive on the inside, and side midpoints."""
        C = self.corners
        S = np.empty((4, 3))
        M = np.empty((4, 3))
        for k in range(4):
            k2 = (k + 1) % 4
            s = normalize_dual(mink_cross(C[k], C[k2]))
            if mink_dot(self.p, s) < 0.0:
                s = -s
            S[k] = s
            M[k] = normalize_point(C[k] + C[k2])
        return S, M

    def to_dict(self):
        out = {
            "flavor": self.flavor,
            "a": self.a,
            "d": self.d,
            "theta": self.theta,
            "b": self.b,
            "c": self.c,
            "A": self.corners[0].tolist(),
            "D": self.corners[1].tolist(),
            "A_prime": self.corners[2].tolist(),
            "D_prime": self.corners[3].tolist(),
            "p": self.p.tolist(),
            "gen_u": self.gen_u.m.tolist(),
            "gen_v": self.gen_v.m.tolist(),
        }
        if self.cone_angle is not None:
            out["cone_angle"] = self.cone_angle
        if self.family is not None:
            out["a_bar"], out["d_bar"], out["t"] = self.family
        return out


def build_torus(a, d, theta, flavor="boundary"):
    """Torus panel from diagonal half-lengths and diagonal angle.

    Boundary flavor needs sinh a sinh d > 1 and an angle at which both
    derived half-lengths b, c are real; cone flavor is admissible for all
    positive a, d (the resulting cone angle always lands in (0, 2 pi)).
    """
    if flavor == "boundary" and math.sinh(a) * math.sinh(d) <= 1.0:
        raise ValueError("inadmissible (a,d,theta)")
    return TorusPanel(flavor, a, d, theta)


def build_cusp_family(a_bar, d_bar, theta, t):
    """Member Pi_t of the parabolic limit family: cone panel at (a_bar+t, d_bar+t)."""
    if a_bar <= 0.0 or d_bar <= 0.0 or t < 0.0:
        raise ValueError("inadmissible (a,d,theta)")
    return TorusPanel("cone", a_bar + t, d_bar + t, theta, family=(a_bar, d_bar, t))


class SpherePanel:
    """Thrice-punctured sphere with geodesic boundary lengths ell_a, ell_b, ell_c.

    Arc lines alpha (joining boundaries b, c), beta (c, a), gamma (a, b)
    are pairwise disjoint at distances ell_c/2, ell_a/2, ell_b/2; their
    duals u_i cut out the base region {<x, u_i> <= 0}. Boundary-line
    duals Y are oriented positive on the funnel side.
    """

    def __init__(self, ell_a, ell_b, ell_c):
        if ell_a <= 0.0 or ell_b <= 0.0 or ell_c <= 0.0:
            raise ValueError("non-positive length")
        self.flavor = "sphere"
        self.ell = np.array([float(ell_a), float(ell_b), float(ell_c)])
        ca = math.cosh(0.5 * ell_a)
        cb = math.cosh(0.5 * ell_b)
        cc = math.cosh(0.5 * ell_c)
        sc = math.sinh(0.5 * ell_c)
        z3 = (ca + cb * cc) / sc
        y3 = math.sqrt(ca * ca + cb * cb + cc * cc + 2.0 * ca * cb * cc - 1.0) / sc
        self.u = np.stack([
            np.array([1.0, 0.0, 0.0]),
            np.array([-cc, 0.0, sc]),
            np.array([-cb, y3, z3]),
        ])
        self.base_point = normalize_point(self.u[0] + self.u[1] + self.u[2])
        # Boundary lines: L_a is the common perpendicular of beta and gamma, etc.
        Y = np.empty((3, 3))
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            y = normalize_dual(mink_cross(self.u[j], self.u[k]))
            if mink_dot(self.base_point, y) > 0.0:
                y = -y
            Y[i] = y
        self.Y = Y
        # Heights: common perpendicular of each arc and its opposite boundary.
        H = np.empty((3, 3))
        feet = np.empty((3, 3))
        for i in range(3):
            h = normalize_dual(mink_cross(Y[i], self.u[i]))
            if h[np.argmax(np.abs(h))] < 0.0:
                h = -h
            H[i] = h
            feet[i] = intersect_lines(Geodesic(self.u[i]), Geodesic(h))
        self.h = H
        self.p_feet = feet
        half = np.empty(3)
        for i in range(3):
            t1 = tangent_toward(feet[i], feet[(i + 1) % 3])
            t2 = tangent_toward(feet[i], feet[(i + 2) % 3])
            half[i] = 0.5 * math.acos(min(1.0, max(-1.0, mink_dot(t1, t2))))
        self.half_angles = half  # (a_hat, b_hat, c_hat)
        if half.sum() >= 0.5 * math.pi:
            raise ValueError("half-angle sum out of range")
        # Holonomy: boundary loop about a is the product of reflections in
        # gamma then beta, translating along L_a by exactly ell_a.
        r = [reflection_matrix(self.u[i]) for i in range(3)]
        self.refl = np.stack(r)
        self.gen_A = Isometry(r[2] @ r[1], check=False)
        self.gen_B = Isometry(r[0] @ r[2], check=False)
        self.gen_C = Isometry(r[1] @ r[0], check=False)
        # Arc endpoints on boundary lines and waist distances for Eq.-(1)
        # closed forms: seam arc i runs between boundaries i+1, i+2.
        self.arc_feet = {}
        self.arc_length = np.empty(3)
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            fj = intersect_lines(Geodesic(self.u[i]), Geodesic(Y[j]))
            fk = intersect_lines(Geodesic(self.u[i]), Geodesic(Y[k]))
            self.arc_feet[i] = {j: fj, k: fk}
            self.arc_length[i] = math.acosh(max(1.0, -mink_dot(fj, fk)))
        # Midpoint waists of the seam arcs (counterexample rule).
        mids = np.empty((3, 3))
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            mids[i] = normalize_point(mink_cross(self.u[i], Y[j] - Y[k]))
        self.midpoints = mids
        # Height arcs: endpoints where the height meets its boundary line; the
        # foot p_i is their midpoint under both waist rules.
        self.delta_half = np.empty(3)
        self.delta_feet = np.empty((3, 3))
        for i in range(3):
            q = intersect_lines(Geodesic(H[i]), Geodesic(Y[i]))
            self.delta_feet[i] = q
            self.delta_half[i] = math.acosh(max(1.0, -mink_dot(feet[i], q)))
        # Dual-basis data of the waist triangle, used by the height tests
        # and to seed walk base points away from all arc lifts.
        V = np.empty((3, 3))
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            v = normalize_dual(mink_cross(feet[j], feet[k]))
            if mink_dot(feet[i], v) < 0.0:
                v = -v
            V[i] = v
        G = np.array([[mink_dot(V[i], V[j]) for j in range(3)] for i in range(3)])
        W = np.linalg.solve(G, V)
        self.tri_duals = V
        self.tri_dual_basis = W
        self.height_point = normalize_point(W[0] + W[1] + W[2])

    def to_dict(self):
        return {
            "flavor": "sphere",
            "ell_a": float(self.ell[0]),
            "ell_b": float(self.ell[1]),
            "ell_c": float(self.ell[2]),
            "u_alpha": self.u[0].tolist(),
            "u_beta": self.u[1].tolist(),
            "u_gamma": self.u[2].tolist(),
            "Y_a": self.Y[0].tolist(),
            "Y_b": self.Y[1].tolist(),
            "Y_c": self.Y[2].tolist(),
            "h_alpha": self.h[0].tolist(),
            "h_beta": self.h[1].tolist(),
            "h_gamma": self.h[2].tolist(),
            "p_alpha": self.p_feet[0].tolist(),
            "p_beta": self.p_feet[1].tolist(),
            "p_gamma": self.p_feet[2].tolist(),
            "a_hat": float(self.half_angles[0]),
            "b_hat": float(self.half_angles[1]),
            "c_hat": float(self.half_angles[2]),
            "gen_A": self.gen_A.m.tolist(),
            "gen_B": self.gen_B.m.tolist(),
            "gen_C": self.gen_C.m.tolist(),
        }


def build_sphere(ell_a, ell_b, ell_c):
    """Sphere panel realizing the three boundary lengths."""
    return SpherePanel(ell_a, ell_b, ell_c)


def panel_from_dict(data):
    """Rebuild a panel from its JSON dict (construction parameters only)."""
    flavor = data["flavor"]
    if flavor == "sphere":
        return build_sphere(data["ell_a"], data["ell_b"], data["ell_c"])
    if "a_bar" in data:
        return build_cusp_family(data["a_bar"], data["d_bar"], data["theta"], data["t"])
    return build_torus(data["a"], data["d"], data["theta"], flavor)


def sphere_heights_waists(panel):
    """Feet of the three heights and the half-angles of the waist triangle."""
    f = panel.p_feet
    h = panel.half_angles
    return f[0], f[1], f[2], h[0], h[1], h[2]


def holonomy(panel):
    """Holonomy generators of the panel with the relation they satisfy."""
    if panel.flavor == "sphere":
        return {
            "generators": [panel.gen_A, panel.gen_B, panel.gen_C],
            "relation": "C*B*A = identity",
        }
    return {
        "generators": [panel.gen_u, panel.gen_v],
        "relation": "commutator of u, v is peripheral",
    }


def bisector_residual(panel):
    """Max over feet of the difference of the two height sub-angles."""
    worst = 0.0
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        hline = Geodesic(panel.h[i])
        t1 = angle_lines(hline, Geodesic(mink_cross(panel.p_feet[i], panel.p_feet[j])), panel.p_feet[i])
        t2 = angle_lines(hline, Geodesic(mink_cross(panel.p_feet[i], panel.p_feet[k])), panel.p_feet[i])
        t1 = min(t1, math.pi - t1)
        t2 = min(t2, math.pi - t2)
        worst = max(worst, abs(t1 - t2))
    return worst
