"""Minkowski-space kernel for the hyperboloid model of the hyperbolic plane.

Vectors live in R^{2,1} with the bilinear form diag(+1, +1, -1). A single
3-vector serves as a point of the hyperbolic plane (unit timelike, future
sheet z > 0), as the dual of an oriented geodesic or half-plane (unit
spacelike), or as a Killing field (infinitesimal isometry). The sign of
the cross product is fixed so that a future timelike vector generates a
counterclockwise rotation about its projection; every other direction
convention in the package derives from this choice.
"""

import math

import numpy as np

from . import kernels as _k

CAUSAL_TOL = 1e-9

_J = np.diag([1.0, 1.0, -1.0])


def mink_dot(v, w):
    """Bilinear form <v, w> = v0 w0 + v1 w1 - v2 w2."""
    return v[0] * w[0] + v[1] * w[1] - v[2] * w[2]


def mink_cross(v, w):
    """Lorentzian cross product, orthogonal to both inputs.

    Normalized so that <mink_cross(v, w), x> = det[v, w, x]; in
    particular mink_cross((1,0,0), (0,1,0)) = (0, 0, -1).
    """
    out = np.empty(3)
    _k.mcross(np.asarray(v, dtype=float), np.asarray(w, dtype=float), out)
    return out


def causal_character(v):
    """'spacelike', 'lightlike' or 'timelike', with a relative tolerance."""
    v = np.asarray(v, dtype=float)
    q = mink_dot(v, v)
    scale = max(1.0, float(v @ v))
    if q > CAUSAL_TOL * scale:
        return "spacelike"
    if q < -CAUSAL_TOL * scale:
        return "timelike"
    return "lightlike"


def normalize_point(v):
    """Rescale a timelike vector onto the future unit hyperboloid."""
    v = np.asarray(v, dtype=float)
    out = np.empty(3)
    if _k.normalize_time(v, out) != 0:
        raise ValueError("not timelike")
    return out


def normalize_dual(v):
    """Rescale a spacelike vector to unit Minkowski norm."""
    v = np.asarray(v, dtype=float)
    out = np.empty(3)
    if _k.normalize_space(v, out) != 0:
        raise ValueError("not spacelike")
    return out


def _check_point(v, name="input"):
    v = np.asarray(v, dtype=float)
    if abs(mink_dot(v, v) + 1.0) > CAUSAL_TOL or v[2] <= 0.0:
        raise ValueError("non-unit or past-sheet input")
    return v


def dist_points(Y, Z):
    """Hyperbolic distance between two points, <Y, Z> = -cosh d."""
    Y = _check_point(Y)
    Z = _check_point(Z)
    return math.acosh(max(1.0, -mink_dot(Y, Z)))


def dist_halfplanes(Y, Z):
    """Distance between two disjoint half-planes P_Y, P_Z.

    Requires <Y, Z> < -1 (disjoint, non-asymptotic closures); then
    ||Y - Z|| = 2 cosh(d/2).
    """
    c = mink_dot(Y, Z)
    if c >= -1.0:
        raise ValueError("not disjoint")
    return math.acosh(-c)


def kill_eval(X, u):
    """Value at the point u of the Killing field with vector X.

    For X = u the field is a rotation about u and the value vanishes;
    for future timelike X the flow is counterclockwise.
    """
    return mink_cross(X, u)


class Geodesic:
    """Oriented geodesic {u in H^2 : <u, dual> = 0}, positive side <u, dual> >= 0."""

    __slots__ = ("dual",)

    def __init__(self, dual):
        self.dual = normalize_dual(np.asarray(dual, dtype=float))

    @classmethod
    def through_points(cls, Y, Z):
        """The geodesic through two distinct points of the hyperbolic plane."""
        c = mink_cross(Y, Z)
        return cls(c)

    def contains(self, pt, tol=1e-9):
        return abs(mink_dot(self.dual, pt)) <= tol

    def __repr__(self):
        return f"Geodesic(dual={self.dual!r})"


def killing_axis_velocity(U):
    """Axis and speed of the infinitesimal translation with vector U.

    U must be spacelike; the axis is the geodesic dual to U/||U|| and the
    velocity along it equals ||U|| = sqrt(<U, U>).
    """
    U = np.asarray(U, dtype=float)
    q = mink_dot(U, U)
    scale = max(1.0, float(U @ U))
    if q <= CAUSAL_TOL * scale:
        raise ValueError("not loxodromic")
    vel = math.sqrt(q)
    return Geodesic(U / vel), vel


def common_perpendicular(g1, g2):
    """The unique geodesic perpendicular to two disjoint geodesics."""
    d1, d2 = g1.dual, g2.dual
    if abs(mink_dot(d1, d2)) <= 1.0:
        raise ValueError("not disjoint")
    return Geodesic(mink_cross(d1, d2))


def intersect_lines(g1, g2):
    """Intersection point of two transverse geodesics."""
    c = mink_cross(g1.dual, g2.dual)
    q = mink_dot(c, c)
    if q >= -CAUSAL_TOL * max(1.0, float(c @ c)):
        raise ValueError("not transverse")
    return normalize_point(c)


def angle_lines(g1, g2, at):
    """Angle in (0, pi) between two geodesics at their common point `at`.

    Cosine of the result is -<g1.dual, g2.dual>; with both positive
    half-planes on the same side this is the angle swept from g1 to g2
    through the intersection of the two positive sides.
    """
    d1, d2 = g1.dual, g2.dual
    if abs(mink_dot(d1, at)) > 1e-9 or abs(mink_dot(d2, at)) > 1e-9:
        raise ValueError("line does not pass through the given point")
    c = mink_dot(d1, d2)
    if abs(c) >= 1.0 - 1e-12:
        raise ValueError("coincident")
    return math.acos(min(1.0, max(-1.0, -c)))


def tangent_toward(P, Q):
    """Unit tangent vector at the point P pointing toward the point Q."""
    t = Q + mink_dot(Q, P) * P
    return normalize_dual(t)


def point_along(P, n, t):
    """Point at distance t from P in the unit tangent direction n."""
    return math.cosh(t) * P + math.sinh(t) * n


def signed_line_distance(g, Y):
    """sinh of the signed distance from point Y to geodesic g (positive side +)."""
    return mink_dot(g.dual, Y)


class Isometry:
    """Orientation-preserving isometry of the hyperbolic plane, 3x3 Lorentz matrix."""

    __slots__ = ("m",)

    def __init__(self, m, check=True):
        m = np.asarray(m, dtype=float)
        if check:
            res = m.T @ _J @ m - _J
            if np.max(np.abs(res)) > 1e-10:
                raise ValueError("matrix does not preserve the form")
            if np.linalg.det(m) < 0.0:
                raise ValueError("orientation-reversing matrix")
        self.m = m

    @classmethod
    def identity(cls):
        return cls(np.eye(3), check=False)

    @classmethod
    def rotation_pi(cls, center):
        """Rotation by pi about a point of the hyperbolic plane."""
        out = np.empty((3, 3))
        _k.rotpi_mat(np.asarray(center, dtype=float), out)
        return cls(out, check=False)

    @classmethod
    def exp(cls, X):
        """Exponential of the Killing field X (time-1 flow)."""
        out = np.empty((3, 3))
        _k.exp_killing(np.asarray(X, dtype=float), out)
        return cls(out, check=False)

    @classmethod
    def translation(cls, U):
        """Translation along the axis of spacelike U by distance ||U||."""
        U = np.asarray(U, dtype=float)
        if mink_dot(U, U) <= 0.0:
            raise ValueError("not loxodromic")
        return cls.exp(U)

    def __matmul__(self, other):
        return Isometry(self.m @ other.m, check=False)

    def inverse(self):
        # J M^T J is the Lorentz inverse; cheaper and stabler than solve.
        return Isometry(_J @ self.m.T @ _J, check=False)

    def apply(self, v):
        return self.m @ np.asarray(v, dtype=float)

    @property
    def trace(self):
        return float(np.trace(self.m))

    @property
    def kind(self):
        tr = self.trace
        if tr > 3.0 + 1e-9:
            return "loxodromic"
        if tr < 3.0 - 1e-9:
            return "elliptic"
        if np.max(np.abs(self.m - np.eye(3))) <= 1e-9:
            return "identity"
        return "parabolic"

    def __repr__(self):
        return f"Isometry(kind={self.kind}, trace={self.trace:.6f})"


def reflection_matrix(u):
    """Raw 3x3 reflection in the geodesic dual to unit spacelike u (det -1)."""
    out = np.empty((3, 3))
    _k.reflect_mat(np.asarray(u, dtype=float), out)
    return out
