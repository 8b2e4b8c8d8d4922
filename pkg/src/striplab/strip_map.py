"""Strip maps: crossing traces, finite-width deformations, tangent vectors.

A strip deformation inserts a hyperbolic strip of width c along an arc of
the triangulated surface. On holonomy it acts by composing each generator
with one translation per crossing of the generator's path with a lift of
the arc: the translation has length c, its axis is the perpendicular to
the crossed lift through the lift's waist point, and it is directed
across the lift in the crossing direction. The infinitesimal version is
the tangent vector of basis-curve length derivatives

    d ell_gamma / dc  =  sum over crossings  sin(angle_i) cosh(r_i),

with r_i the distance from the waist to the crossing point. Both the
exact finite-difference route and the sine-formula route are provided;
they agree to high order and are compared in the test suite.

Torus tangent vectors are reported in the basis (u, v, uv) of closed
curves, sphere ones in the basis (a, b, c) of boundary curves. A basis
curve within 1e-6 of a parabolic trace would make the length derivative
blow up; for such a curve both routes substitute the derivative of the
Lorentz trace (d tr = 2 sinh(ell) d ell) for that component.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels as _k
from .arc_complex import Slope, parse_slope
from .lorentz import (
    _J,
    Isometry,
    mink_cross,
    mink_dot,
    normalize_dual,
    normalize_point,
    point_along,
    tangent_toward,
)

TORUS_ARC_LABELS = ("alpha", "delta", "beta", "gamma")
TORUS_ARC_SLOPES = {
    "alpha": Slope(1, 1),
    "delta": Slope(-1, 1),
    "beta": Slope(1, 0),
    "gamma": Slope(0, 1),
}
SPHERE_ARC_LABELS = ("bc", "ca", "ab", "aa", "bb", "cc")

WAIST_RULES = ("orthogonal-foot", "midpoint", "torus-midpoint")

MAX_WALK_STEPS = 4096
NEAR_PARABOLIC = 1e-6
# Deterministic start offsets (arclengths along the axis) used when a
# chord grazes a vertex of the tiling. Kept small so the start tile
# stays near the origin, where the walk is best conditioned; any
# nonzero shift dodges the measure-zero graze set.
_OFFSETS = (0.137, 0.211, 0.293, 0.371, 0.449)


def waist_rule_for(panel, rule=None):
    """Resolve and validate a waist rule for the panel's flavor."""
    if panel.flavor == "sphere":
        if rule is None:
            rule = "orthogonal-foot"
        if rule not in ("orthogonal-foot", "midpoint"):
            raise ValueError(f"waist rule {rule!r} not valid for sphere panels")
    else:
        if rule is None:
            rule = "torus-midpoint"
        if rule != "torus-midpoint":
            raise ValueError(f"waist rule {rule!r} not valid for torus panels")
    return rule


@dataclass
class Crossing:
    """One transverse crossing of a walk chord with an arc lift."""

    arc: str
    lift: int
    point: np.ndarray
    angle: float
    r: float  # signed distance from the waist along the arc
    direction: int
    t: float  # arclength position along the chord
    dual: np.ndarray
    waist: np.ndarray


def basis_words(panel):
    return ("a", "b", "c") if panel.flavor == "sphere" else ("u", "v", "uv")


def _basis_isos(panel):
    if panel.flavor == "sphere":
        return (panel.gen_A, panel.gen_B, panel.gen_C)
    return (panel.gen_u, panel.gen_v, panel.gen_u @ panel.gen_v)


def basis_modes(panel):
    """Per-basis reporting mode: 'length', or 'trace' near a parabolic."""
    out = []
    for iso in _basis_isos(panel):
        out.append("trace" if abs(iso.trace - 3.0) < NEAR_PARABOLIC else "length")
    return tuple(out)


def curve_length(iso):
    """Translation length from the Lorentz trace, tr = 1 + 2 cosh(ell)."""
    if iso.kind != "loxodromic":
        raise ValueError("non-loxodromic")
    return math.acosh(max(1.0, 0.5 * (iso.trace - 1.0)))


def algebraic_intersection(s, t):
    """Absolute homological intersection number of two slopes."""
    return abs(s.p * t.q - s.q * t.p)


def _word_iso(panel, word):
    if panel.flavor == "sphere":
        table = {"A": panel.gen_A, "B": panel.gen_B, "C": panel.gen_C}
        table.update({k.lower(): v.inverse() for k, v in table.items()})
    else:
        table = {"u": panel.gen_u, "v": panel.gen_v}
        table.update({"U": panel.gen_u.inverse(), "V": panel.gen_v.inverse()})
    iso = Isometry.identity()
    for ch in word:
        if ch not in table:
            raise ValueError(f"unknown word letter {ch!r}")
        iso = iso @ table[ch]
    return iso


def _sphere_waists(panel, rule):
    return panel.p_feet if rule == "orthogonal-foot" else panel.midpoints


def _run_torus(corners, spacelike, xa, xb, record):
    buf = np.empty((_k.MAXC, _k.NCOL))
    cor_out = np.empty((4, 3))
    n, status = _k.torus_walk(
        np.ascontiguousarray(corners, dtype=float),
        np.ascontiguousarray(xa, dtype=float),
        np.ascontiguousarray(xb, dtype=float),
        1 if record else 0,
        1 if spacelike else 0,
        MAX_WALK_STEPS,
        buf,
        cor_out,
    )
    return buf, int(n), int(status), cor_out


def _run_sphere(panel, rule, xa, xb, record):
    buf = np.empty((_k.MAXC, _k.NCOL))
    g_out = np.empty((3, 3))
    n, status = _k.sphere_walk(
        np.ascontiguousarray(panel.u, dtype=float),
        np.ascontiguousarray(_sphere_waists(panel, rule), dtype=float),
        np.ascontiguousarray(panel.h, dtype=float),
        np.ascontiguousarray(panel.p_feet, dtype=float),
        np.ascontiguousarray(xa, dtype=float),
        np.ascontiguousarray(xb, dtype=float),
        1 if record else 0,
        MAX_WALK_STEPS,
        buf,
        g_out,
    )
    return buf, int(n), int(status), g_out


def _check_status(status):
    if status == 2:
        raise RuntimeError("walk exceeded the step limit")
    if status == 4:
        raise RuntimeError("walk exceeded the crossing buffer")


def _quad_interior_point(corners):
    """A point inside a tile, off both diagonals and all side lines."""
    dA = mink_cross(corners[0], corners[2])
    dD = mink_cross(corners[1], corners[3])
    pF = normalize_point(mink_cross(dA, dD))
    m0 = normalize_point(corners[0] + corners[1])
    return normalize_point(3.0 * pF + m0)


def _start_candidates(panel):
    if panel.flavor == "sphere":
        z0 = panel.base_point
        toward = panel.p_feet[1]
    else:
        z0 = _quad_interior_point(panel.corners)
        toward = panel.m12
    yield z0
    n = tangent_toward(z0, toward)
    for i in range(3):
        yield normalize_point(point_along(z0, n, 1e-6 * 2.0 ** i))


def _crossings_from_buffer(buf, n, labels):
    out = []
    counts = {}
    for i in range(n):
        code = int(buf[i, 0])
        arc = labels[code]
        q = buf[i, 2:5].copy()
        dual = buf[i, 8:11].copy()
        waist = buf[i, 11:14].copy()
        tangent = mink_cross(waist, dual)
        r = buf[i, 6]
        if mink_dot(q, tangent) < 0.0:
            r = -r
        lift = counts.get(arc, 0)
        counts[arc] = lift + 1
        out.append(
            Crossing(
                arc=arc,
                lift=lift,
                point=q,
                angle=float(buf[i, 5]),
                r=float(r),
                direction=int(buf[i, 7]),
                t=float(buf[i, 1]),
                dual=dual,
                waist=waist,
            )
        )
    return out


def _walk_word(panel, rule, z, iso, record=True):
    """Walk the chord z -> iso(z) from the base tile; None on degeneracy."""
    xb = iso.apply(z)
    if panel.flavor == "sphere":
        buf, n, status, _ = _run_sphere(panel, rule, z, xb, record)
    else:
        buf, n, status, _ = _run_torus(
            panel.corners, panel.spacelike_corners, z, xb, record
        )
    if status == 3:
        return None
    _check_status(status)
    return buf, n


def _loop_legs(corners, spacelike, z, iso):
    """Crossing rows for a loop at z around iso, routed along its axis.

    A plain chord from z to iso(z) can pass a cone point of the tiling
    with the wrong winding; the walk then accumulates some other group
    element and a strip product built from its crossings deforms the
    wrong curve. The loop z -> x0 -> iso(x0) -> iso(z), with x0 on the
    axis of iso, pins the curve class: the middle leg runs along the
    invariant axis, whose development carries exactly iso. Only the
    first two legs are walked; the closing leg is the iso-image of the
    reversed first one, so its strip product is iso t1^-1 iso^-1 and
    the caller assembles the loop product as t1 t2 iso t1^-1 iso^-1.
    The axis leg is chained through the tile chart the first walk
    returns, and its development is checked against iso. Returns
    (tail_rows, axis_rows), or None when a leg grazes a vertex or the
    check fails.
    """
    _, P, T, _ = _axis_data(iso)
    C0 = np.asarray(corners, float)
    for off in _OFFSETS:
        x0 = point_along(P, T, off)
        buf1, n1, st1, C1 = _run_torus(C0, spacelike, z, x0, True)
        if st1 == 3:
            continue
        _check_status(st1)
        buf2, n2, st2, C2 = _run_torus(C1, spacelike, x0, iso.apply(x0), True)
        if st2 == 3:
            continue
        _check_status(st2)
        want = C1 @ iso.m.T
        if np.abs(C2 - want).max() > 1e-6 * (1.0 + np.abs(want).max()):
            continue
        return buf1[:n1].copy(), buf2[:n2].copy()
    return None


def _loop_deformed(legs, iso, labels, weight_by_arc):
    """Deformed holonomy t1 t2 iso t1^-1 of the axis-routed loop."""
    cr_tail, cr_axis = (
        _crossings_from_buffer(rows, len(rows), labels) for rows in legs
    )
    t1 = _strip_product(cr_tail, weight_by_arc)
    t2 = _strip_product(cr_axis, weight_by_arc)
    t1_inv = _J @ t1.T @ _J
    return Isometry(t1 @ t2 @ iso.m @ t1_inv, check=False)


def trace_crossings(panel, word, rule=None):
    """Ordered crossings of the chord from z to (holonomy of word)(z).

    The start z is a fixed interior point of the base tile; if the chord
    grazes a vertex of the tiling the start is perturbed deterministically,
    and after three retries a ValueError is raised.
    """
    rule = waist_rule_for(panel, rule)
    if word == "":
        return []
    iso = _word_iso(panel, word)
    labels = SPHERE_ARC_LABELS if panel.flavor == "sphere" else TORUS_ARC_LABELS
    for z in _start_candidates(panel):
        got = _walk_word(panel, rule, z, iso)
        if got is not None:
            buf, n = got
            return _crossings_from_buffer(buf, n, labels)
    raise ValueError("vertex hit after 3 perturbation retries")


def _strip_product(crossings, weight_by_arc):
    """Product T_1 T_2 ... T_k of strip translations, first crossed leftmost."""
    m = np.eye(3)
    for cr in crossings:
        c = weight_by_arc.get(cr.arc, 0.0)
        if c == 0.0:
            continue
        axis = mink_cross(cr.waist, cr.direction * cr.dual)
        m = m @ Isometry.exp(c * axis).m
    return m


def _deformed_generators(panel, weight_by_arc, rule):
    words = ("A", "B", "C") if panel.flavor == "sphere" else ("u", "v")
    labels = SPHERE_ARC_LABELS if panel.flavor == "sphere" else TORUS_ARC_LABELS
    isos = [_word_iso(panel, w) for w in words]

    for z in _start_candidates(panel):
        if panel.flavor == "sphere":
            walks = []
            for iso in isos:
                got = _walk_word(panel, rule, z, iso)
                if got is None:
                    break
                walks.append(_crossings_from_buffer(*got, labels))
            else:
                out = []
                for iso, crossings in zip(isos, walks):
                    t = _strip_product(crossings, weight_by_arc)
                    out.append(Isometry(t @ iso.m, check=False))
                return out
            continue
        loops = []
        for iso in isos:
            legs = _loop_legs(panel.corners, panel.spacelike_corners, z, iso)
            if legs is None:
                break
            loops.append(legs)
        else:
            return [
                _loop_deformed(legs, iso, labels, weight_by_arc)
                for iso, legs in zip(isos, loops)
            ]
    raise ValueError("vertex hit after 3 perturbation retries")


def finite_strip_holonomy(panel, weights, rule=None):
    """Holonomy generators deformed by strips of the given widths.

    `weights` maps arc labels (torus: alpha, delta, beta, gamma; sphere:
    bc, ca, ab, aa, bb, cc) to widths >= 0. With support in a single
    triangulation the deformed generators satisfy the surface relation
    exactly; weighting an arc together with its flip partner is allowed
    and keeps the relation to second order in the widths.
    """
    rule = waist_rule_for(panel, rule)
    labels = SPHERE_ARC_LABELS if panel.flavor == "sphere" else TORUS_ARC_LABELS
    for arc, c in weights.items():
        if arc not in labels:
            raise ValueError(f"unknown arc {arc!r}")
        if c < 0.0:
            raise ValueError("negative weight")
    return _deformed_generators(panel, dict(weights), rule)


def _basis_value(iso, mode):
    if mode == "trace":
        return iso.trace
    return curve_length(iso)


# ---------------------------------------------------------------------------
# Frames: tiles of the torus tiling adapted to an arbitrary slope.


@dataclass
class Frame:
    """Tile of the quadrilateral tiling whose main diagonal has a given slope.

    corners are ccw as in the base panel; (e, f) is the unimodular integer
    basis with sides of slopes e, f, main diagonal e+f and cross diagonal
    e-f, all in the homology coordinates where the base sides are (1,0)
    and (0,1).
    """

    corners: np.ndarray
    e: tuple
    f: tuple

    def arc_slopes(self):
        ep, eq = self.e
        fp, fq = self.f
        return (
            Slope(ep + fp, eq + fq),
            Slope(ep - fp, eq - fq),
            Slope(ep, eq),
            Slope(fp, fq),
        )


def _renorm_corner(v, spacelike):
    if spacelike:
        q = mink_dot(v, v)
        if q <= 0.0:
            raise ValueError("degenerate frame corner")
        return v / math.sqrt(q)  # keep the coherent sign
    return normalize_point(v)


def _frame_rotate(fr):
    c = fr.corners
    return Frame(np.stack([c[1], c[2], c[3], c[0]]), fr.f, (-fr.e[0], -fr.e[1]))


def _frame_flip_b(fr, spacelike):
    c = fr.corners
    m01 = normalize_point(c[0] + c[1])
    w = _renorm_corner(Isometry.rotation_pi(m01).apply(c[2]), spacelike)
    e = (fr.e[0] + fr.f[0], fr.e[1] + fr.f[1])
    return Frame(np.stack([w, c[1], c[2], c[0]]), e, fr.f)


def _frame_flip_c(fr, spacelike):
    c = fr.corners
    m12 = normalize_point(c[1] + c[2])
    w = _renorm_corner(Isometry.rotation_pi(m12).apply(c[0]), spacelike)
    f = (fr.e[0] + fr.f[0], fr.e[1] + fr.f[1])
    return Frame(np.stack([c[0], c[1], w, c[2]]), fr.e, f)


def frame_for_slope(panel, slope, max_ops=64):
    """Navigate the Farey tessellation to a tile with main diagonal `slope`."""
    if panel.flavor == "sphere":
        raise ValueError("frames exist only for torus panels")
    sp = panel.spacelike_corners
    fr = Frame(panel.corners.copy(), (1, 0), (0, 1))
    sv = (slope.p, slope.q)
    for _ in range(max_ops):
        a = sv[0] * fr.f[1] - sv[1] * fr.f[0]
        b = fr.e[0] * sv[1] - fr.e[1] * sv[0]
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        if a == 1 and b == 1:
            return fr
        if a > 0 and b < 0:
            fr = _frame_rotate(fr)
        elif b == 0:
            fr = _frame_flip_b(fr, sp)
        elif a == 0:
            fr = _frame_flip_c(fr, sp)
        elif a > b:
            fr = _frame_flip_c(fr, sp)
        else:
            fr = _frame_flip_b(fr, sp)
    raise ValueError("slope too deep for frame navigation")


def _axis_data(iso):
    """Axis dual, nearest point to the base center, forward tangent, period."""
    m = iso.m - np.eye(3)
    _, _, vh = np.linalg.svd(m)
    n = normalize_dual(vh[-1])
    p = np.array([0.0, 0.0, 1.0])
    P = normalize_point(p - mink_dot(p, n) * n)
    T = mink_cross(n, P)
    if mink_dot(iso.apply(P), T) < 0.0:
        T = -T
    return n, P, T, curve_length(iso)


def _resolve_torus_arc(arc):
    if isinstance(arc, Slope):
        return arc
    if arc in TORUS_ARC_SLOPES:
        return TORUS_ARC_SLOPES[arc]
    try:
        return parse_slope(arc)
    except (ValueError, TypeError, AttributeError):
        raise ValueError(f"unknown arc {arc!r}") from None


def frame_sine_matrix(panel, frame, rule=None):
    """Rows of sine-formula sums for the frame's four arcs.

    Row order matches Frame.arc_slopes(): main diagonal, cross diagonal,
    e-sides, f-sides. Columns are the basis curves (u, v, uv). Each entry
    sums sin(angle) cosh(r) over one axis period of the basis curve.
    """
    waist_rule_for(panel, rule)
    z_f = _quad_interior_point(frame.corners)
    sums = np.zeros((4, 3))
    for k, iso in enumerate(_basis_isos(panel)):
        _, P, T, period = _axis_data(iso)
        for off in _OFFSETS:
            x0 = point_along(P, T, off)
            _, _, status, cor = _run_torus(
                frame.corners, panel.spacelike_corners, z_f, x0, record=False
            )
            if status == 3:
                continue
            _check_status(status)
            buf, n, status, _ = _run_torus(
                cor, panel.spacelike_corners, x0, iso.apply(x0), record=True
            )
            if status == 3:
                continue
            _check_status(status)
            for i in range(n):
                code = int(buf[i, 0])
                sums[code, k] += math.sin(buf[i, 5]) * math.cosh(buf[i, 6])
            break
        else:
            raise RuntimeError("axis walk failed at every start offset")
    for k, (iso, mode) in enumerate(zip(_basis_isos(panel), basis_modes(panel))):
        if mode == "trace":
            sums[:, k] *= 2.0 * math.sinh(curve_length(iso))
    return sums


def strip_vector_sine(panel, arc, rule=None):
    """Tangent vector of basis-length derivatives via the sine formula."""
    rule = waist_rule_for(panel, rule)
    if panel.flavor == "sphere":
        if arc not in SPHERE_ARC_LABELS:
            raise ValueError(f"unknown arc {arc!r}")
        out = np.zeros(3)
        code = SPHERE_ARC_LABELS.index(arc)
        if code < 3:
            w = _sphere_waists(panel, rule)[code]
            for j, foot in panel.arc_feet[code].items():
                out[j] = max(1.0, -mink_dot(w, foot))
        else:
            i = code - 3
            out[i] = 2.0 * math.cosh(panel.delta_half[i])
        return out
    slope = _resolve_torus_arc(arc)
    frame = frame_for_slope(panel, slope)
    return frame_sine_matrix(panel, frame, rule)[0]


def strip_vector_fd(panel, arc, rule=None, h=1e-5):
    """Tangent vector by a central finite difference of strip deformations.

    The step h must lie in [1e-7, 1e-3]; basis values are lengths, or
    Lorentz traces for a near-parabolic basis curve, matching the sine
    route's substitution.
    """
    rule = waist_rule_for(panel, rule)
    if not (1e-7 <= h <= 1e-3):
        raise ValueError("step size out of range")
    modes = basis_modes(panel)
    if panel.flavor == "sphere":
        if arc not in SPHERE_ARC_LABELS:
            raise ValueError(f"unknown arc {arc!r}")

        def values(c):
            gens = _deformed_generators(panel, {arc: c}, rule)
            return [_basis_value(g, m) for g, m in zip(gens, modes)]

        hi = values(h)
        lo = values(-h)
        return (np.array(hi) - np.array(lo)) / (2.0 * h)
    slope = _resolve_torus_arc(arc)
    frame = frame_for_slope(panel, slope)
    z_f = _quad_interior_point(frame.corners)

    def values(c):
        words = ("u", "v")
        isos = [_word_iso(panel, w) for w in words]
        deformed = None
        for dz in _start_candidates_at(panel, z_f, frame):
            loops = []
            for iso in isos:
                legs = _loop_legs(frame.corners, panel.spacelike_corners, dz, iso)
                if legs is None:
                    break
                loops.append(legs)
            else:
                deformed = [
                    _loop_deformed(legs, iso, ("s", "d", "b", "c"), {"s": c})
                    for iso, legs in zip(isos, loops)
                ]
                break
        if deformed is None:
            raise ValueError("vertex hit after 3 perturbation retries")
        du, dv = deformed
        basis = [du, dv, du @ dv]
        return [_basis_value(g, m) for g, m in zip(basis, modes)]

    hi = values(h)
    lo = values(-h)
    return (np.array(hi) - np.array(lo)) / (2.0 * h)


def _start_candidates_at(panel, z0, frame):
    yield z0
    toward = normalize_point(frame.corners[1] + frame.corners[2])
    n = tangent_toward(z0, toward)
    for i in range(3):
        yield normalize_point(point_along(z0, n, 1e-6 * 2.0 ** i))
