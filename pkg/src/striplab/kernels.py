"""Minkowski primitives and tiling-walk kernels.

Everything here is written in scalar-loop style so that the same source
compiles under numba.njit (default) or runs as plain Python when
STRIPLAB_NUMBA=0. Vectors are 3-arrays in R^{2,1} with bilinear form
diag(+1, +1, -1); points of the hyperbolic plane are future unit timelike
vectors, geodesics are spanned by their unit spacelike duals.

Crossing records produced by the walks are rows of a (MAXC, 14) buffer:

    col 0      arc code
    col 1      t, arclength from the chord start to the crossing
    col 2:5    q, crossing point (unit timelike)
    col 5      angle in (0, pi) between chord and arc at q
    col 6      r >= 0, distance from the arc's waist to q
    col 7      dir, +1 if the chord crosses towards the stored dual
    col 8:11   arc dual (unit spacelike) at the crossing, ambient coords
    col 11:14  waist point of the crossed arc lift, ambient coords

Torus codes: 0 a-diagonal, 1 d-diagonal, 2 b-side, 3 c-side. Sphere codes:
0, 1, 2 the seam arcs, 3, 4, 5 the corresponding height arcs.

Walk status: 0 done, 2 step limit hit, 3 degenerate hit (caller should
retry from a perturbed start), 4 crossing buffer full.
"""

import math

import numpy as np

from ._backend import maybe_jit

MAXC = 512
NCOL = 14
TIE_EPS = 1e-12  # chord-parameter resolution for degenerate hits
HEPS = 1e-13     # window hand-off guard between consecutive tiles


@maybe_jit
def mdot(v, w):
    return v[0] * w[0] + v[1] * w[1] - v[2] * w[2]


@maybe_jit
def mcross(v, w, out):
    # Minkowski cross: <mcross(v, w), x> = det[v, w, x] for all x.
    cx = v[1] * w[2] - v[2] * w[1]
    cy = v[2] * w[0] - v[0] * w[2]
    cz = v[0] * w[1] - v[1] * w[0]
    out[0] = cx
    out[1] = cy
    out[2] = -cz


@maybe_jit
def normalize_time(v, out):
    # Scale to the future unit hyperboloid. Returns 0 ok, 1 not timelike.
    q = mdot(v, v)
    if q >= 0.0:
        return 1
    s = 1.0 / math.sqrt(-q)
    if v[2] < 0.0:
        s = -s
    out[0] = v[0] * s
    out[1] = v[1] * s
    out[2] = v[2] * s
    return 0


@maybe_jit
def normalize_space(v, out):
    # Scale to unit spacelike. Returns 0 ok, 1 not spacelike.
    q = mdot(v, v)
    if q <= 0.0:
        return 1
    s = 1.0 / math.sqrt(q)
    out[0] = v[0] * s
    out[1] = v[1] * s
    out[2] = v[2] * s
    return 0


@maybe_jit
def rotpi_mat(m, out):
    # Rotation by pi about the point m: v -> -v - 2<v, m> m.
    j0 = m[0]
    j1 = m[1]
    j2 = -m[2]
    for i in range(3):
        out[i, 0] = -2.0 * m[i] * j0
        out[i, 1] = -2.0 * m[i] * j1
        out[i, 2] = -2.0 * m[i] * j2
    out[0, 0] -= 1.0
    out[1, 1] -= 1.0
    out[2, 2] -= 1.0


@maybe_jit
def reflect_mat(u, out):
    # Reflection in the geodesic dual to unit spacelike u.
    j0 = u[0]
    j1 = u[1]
    j2 = -u[2]
    for i in range(3):
        out[i, 0] = -2.0 * u[i] * j0
        out[i, 1] = -2.0 * u[i] * j1
        out[i, 2] = -2.0 * u[i] * j2
    out[0, 0] += 1.0
    out[1, 1] += 1.0
    out[2, 2] += 1.0


@maybe_jit
def killing_mat(x, out):
    # Matrix of v -> mcross(x, v), the Killing field with vector x.
    p = x[0]
    q = x[1]
    r = x[2]
    out[0, 0] = 0.0
    out[0, 1] = -r
    out[0, 2] = q
    out[1, 0] = r
    out[1, 1] = 0.0
    out[1, 2] = -p
    out[2, 0] = q
    out[2, 1] = -p
    out[2, 2] = 0.0


@maybe_jit
def mat3_mul(a, b, out):
    # out must not alias a or b.
    for i in range(3):
        for j in range(3):
            out[i, j] = a[i, 0] * b[0, j] + a[i, 1] * b[1, j] + a[i, 2] * b[2, j]


@maybe_jit
def mat3_vec(a, v, out):
    v0 = v[0]
    v1 = v[1]
    v2 = v[2]
    out[0] = a[0, 0] * v0 + a[0, 1] * v1 + a[0, 2] * v2
    out[1] = a[1, 0] * v0 + a[1, 1] * v1 + a[1, 2] * v2
    out[2] = a[2, 0] * v0 + a[2, 1] * v1 + a[2, 2] * v2


@maybe_jit
def exp_killing(x, out):
    """Exponential of the Killing field x as a 3x3 Lorentz matrix.

    Uses K^3 = <x,x> K: closed forms for spacelike (translation) and
    timelike (rotation) x, a short series near the lightlike cone.
    """
    q = mdot(x, x)
    K = np.empty((3, 3))
    K2 = np.empty((3, 3))
    killing_mat(x, K)
    mat3_mul(K, K, K2)
    if q > 1e-24:
        lam = math.sqrt(q)
        c1 = math.sinh(lam) / lam
        c2 = (math.cosh(lam) - 1.0) / q
    elif q < -1e-24:
        phi = math.sqrt(-q)
        c1 = math.sin(phi) / phi
        c2 = (1.0 - math.cos(phi)) / (phi * phi)
    else:
        c1 = 1.0 + q / 6.0
        c2 = 0.5 + q / 24.0
    for i in range(3):
        for j in range(3):
            out[i, j] = c1 * K[i, j] + c2 * K2[i, j]
    out[0, 0] += 1.0
    out[1, 1] += 1.0
    out[2, 2] += 1.0


@maybe_jit
def _clip1(x):
    if x > 1.0:
        return 1.0
    if x < -1.0:
        return -1.0
    return x


@maybe_jit
def _acosh1(x):
    if x < 1.0:
        x = 1.0
    return math.acosh(x)


@maybe_jit
def _record(out, n, code, t, q, angle, r, direc, dual, waist):
    out[n, 0] = code
    out[n, 1] = t
    out[n, 2] = q[0]
    out[n, 3] = q[1]
    out[n, 4] = q[2]
    out[n, 5] = angle
    out[n, 6] = r
    out[n, 7] = direc
    out[n, 8] = dual[0]
    out[n, 9] = dual[1]
    out[n, 10] = dual[2]
    out[n, 11] = waist[0]
    out[n, 12] = waist[1]
    out[n, 13] = waist[2]


@maybe_jit
def torus_walk(cor_in, xa, xb, record, spacelike_corners, max_steps, out, cor_out):
    """Trace the chord xa -> xb through the quadrilateral tiling.

    cor_in holds the four corner vectors of the tile containing xa, in
    ccw order; they are unit spacelike for the boundary flavor
    (spacelike_corners=1) or unit timelike for the cone flavor. The
    start tile stays fixed and the chord is pulled back through it, so
    the tile geometry is evaluated once, where it is well conditioned;
    transporting the tile instead loses the side duals to rounding when
    the walk runs far from the start. The accumulated gluing matrix
    restores ambient coordinates for the recorded crossings and for the
    final tile corners written to cor_out. Crossings (diagonals and
    exited sides) are recorded when record=1. Returns (ncross, status).
    """
    C = np.empty((4, 3))
    for i in range(4):
        for j in range(3):
            C[i, j] = cor_in[i, j]
    dA = np.empty(3)
    dD = np.empty(3)
    pF = np.empty(3)
    S = np.empty((4, 3))
    M = np.empty((4, 3))
    tmp = np.empty(3)
    q = np.empty(3)
    cd = np.empty(3)
    ya = np.empty(3)
    yb = np.empty(3)
    amb_q = np.empty(3)
    amb_d = np.empty(3)
    amb_w = np.empty(3)
    W = np.empty((3, 3))
    wv = np.empty(3)
    w1 = np.empty(3)
    w2 = np.empty(3)
    # Tile geometry, once: diagonal duals, center, oriented side duals
    # (positive on the inside) and side midpoints. Cross-product norms
    # come from the Lagrange identity <u x v, u x v> =
    # <u,v>^2 - <u,u><v,v>; squaring the cross entries instead would
    # square the rounding error again.
    g2 = mdot(C[0], C[2])
    nq = g2 * g2 - mdot(C[0], C[0]) * mdot(C[2], C[2])
    if nq <= 0.0:
        return 0, 3
    mcross(C[0], C[2], tmp)
    sc = 1.0 / math.sqrt(nq)
    for j in range(3):
        dA[j] = tmp[j] * sc
    g2 = mdot(C[1], C[3])
    nq = g2 * g2 - mdot(C[1], C[1]) * mdot(C[3], C[3])
    if nq <= 0.0:
        return 0, 3
    mcross(C[1], C[3], tmp)
    sc = 1.0 / math.sqrt(nq)
    for j in range(3):
        dD[j] = tmp[j] * sc
    g2 = mdot(dA, dD)
    nq = g2 * g2 - 1.0
    if nq >= 0.0:
        return 0, 3  # diagonals of a proper tile cross
    mcross(dA, dD, tmp)
    sc = 1.0 / math.sqrt(-nq)
    if tmp[2] * sc < 0.0:
        sc = -sc
    for j in range(3):
        pF[j] = tmp[j] * sc
    for k in range(4):
        k2 = (k + 1) & 3
        g2 = mdot(C[k], C[k2])
        nq = g2 * g2 - mdot(C[k], C[k]) * mdot(C[k2], C[k2])
        if nq <= 0.0:
            return 0, 3
        mcross(C[k], C[k2], tmp)
        sc = 1.0 / math.sqrt(nq)
        for j in range(3):
            S[k, j] = tmp[j] * sc
        if mdot(pF, S[k]) < 0.0:
            for j in range(3):
                S[k, j] = -S[k, j]
        for j in range(3):
            tmp[j] = C[k, j] + C[k2, j]
        nq = mdot(tmp, tmp)
        if nq >= 0.0:
            return 0, 3
        sc = 1.0 / math.sqrt(-nq)
        if tmp[2] * sc < 0.0:
            sc = -sc
        for j in range(3):
            M[k, j] = tmp[j] * sc
    # Chord state: both endpoints and the chord dual, pulled back to the
    # fixed tile as the walk advances. The pullback is affine in the
    # chord parameter, so the s bookkeeping below is unchanged by it.
    g2 = mdot(xa, xb)
    nq = g2 * g2 - mdot(xa, xa) * mdot(xb, xb)
    if nq <= 0.0:
        return 0, 3
    mcross(xa, xb, tmp)
    sc = 1.0 / math.sqrt(nq)
    for j in range(3):
        cd[j] = tmp[j] * sc
        ya[j] = xa[j]
        yb[j] = xb[j]
    for i in range(3):
        for j in range(3):
            W[i, j] = 1.0 if i == j else 0.0
    n = 0
    s_cur = 0.0
    s_hlo = 0.0
    status = 2
    for _step in range(max_steps):
        # Exit: earliest decreasing crossing of a side plane.
        s_exit = 2.0
        s_next = 3.0
        k_exit = -1
        for k in range(4):
            fa = mdot(ya, S[k])
            fb = mdot(yb, S[k])
            if fb < fa:
                sk = fa / (fa - fb)
                if sk >= s_cur - 1e-14:
                    if sk < s_exit:
                        s_next = s_exit
                        s_exit = sk
                        k_exit = k
                    elif sk < s_next:
                        s_next = sk
        if k_exit >= 0 and s_next - s_exit <= TIE_EPS:
            return n, 3  # corner graze: two sides at once
        if s_exit >= 1.0 - TIE_EPS and s_exit <= 1.0 + TIE_EPS:
            return n, 3  # chord endpoint sits on a side
        done = s_exit >= 1.0
        s_end = 1.0 if done else s_exit
        if record != 0:
            for d in range(2):
                if d == 0:
                    dual = dA
                else:
                    dual = dD
                fa = mdot(ya, dual)
                fb = mdot(yb, dual)
                den = fa - fb
                if den == 0.0:
                    continue
                sd = fa / den
                if (not done) and abs(sd - s_exit) <= TIE_EPS:
                    return n, 3  # diagonal meets the exit corner
                if sd > s_hlo and sd <= s_end:
                    for i in range(3):
                        tmp[i] = ya[i] + sd * (yb[i] - ya[i])
                    if normalize_time(tmp, q) != 0:
                        return n, 3
                    if n >= MAXC:
                        return n, 4
                    t = _acosh1(-mdot(ya, q))
                    ang = math.acos(_clip1(mdot(cd, dual)))
                    r = _acosh1(-mdot(q, pF))
                    fc = fa + s_cur * (fb - fa)
                    direc = 1.0 if fc < 0.0 else -1.0
                    mat3_vec(W, q, amb_q)
                    mat3_vec(W, dual, amb_d)
                    mat3_vec(W, pF, amb_w)
                    _record(out, n, float(d), t, amb_q, ang, r, direc, amb_d, amb_w)
                    n += 1
            if not done:
                fa = mdot(ya, S[k_exit])
                fb = mdot(yb, S[k_exit])
                for i in range(3):
                    tmp[i] = ya[i] + s_exit * (yb[i] - ya[i])
                if normalize_time(tmp, q) != 0:
                    return n, 3
                if n >= MAXC:
                    return n, 4
                t = _acosh1(-mdot(ya, q))
                ang = math.acos(_clip1(mdot(cd, S[k_exit])))
                r = _acosh1(-mdot(q, M[k_exit]))
                fc = fa + s_cur * (fb - fa)
                direc = 1.0 if fc < 0.0 else -1.0
                code = 2.0 if (k_exit & 1) == 0 else 3.0
                mat3_vec(W, q, amb_q)
                mat3_vec(W, S[k_exit], amb_d)
                mat3_vec(W, M[k_exit], amb_w)
                _record(out, n, code, t, amb_q, ang, r, direc, amb_d, amb_w)
                n += 1
        if done:
            status = 0
            break
        # Cross the exited side. The tile glues to its neighbor by two
        # pi-rotations, w1 then w2 (side 0/2: the v-generator of this
        # frame, side 1/3: the u-generator). The chord is pulled back by
        # the inverse gluing, so the rotations hit it in reverse order,
        # while W picks up the forward gluing on the right: right
        # multiplication by R(m) = -I - 2 m (Jm)^T is a rank-one update.
        if k_exit == 0:
            for j in range(3):
                w1[j] = pF[j]
                w2[j] = M[0, j]
        elif k_exit == 2:
            for j in range(3):
                w1[j] = M[0, j]
                w2[j] = pF[j]
        elif k_exit == 1:
            for j in range(3):
                w1[j] = pF[j]
                w2[j] = M[1, j]
        else:
            for j in range(3):
                w1[j] = M[1, j]
                w2[j] = pF[j]
        c0 = mdot(ya, w2)
        for j in range(3):
            ya[j] = -ya[j] - 2.0 * c0 * w2[j]
        c0 = mdot(ya, w1)
        for j in range(3):
            ya[j] = -ya[j] - 2.0 * c0 * w1[j]
        c0 = mdot(yb, w2)
        for j in range(3):
            yb[j] = -yb[j] - 2.0 * c0 * w2[j]
        c0 = mdot(yb, w1)
        for j in range(3):
            yb[j] = -yb[j] - 2.0 * c0 * w1[j]
        c0 = mdot(cd, w2)
        for j in range(3):
            cd[j] = -cd[j] - 2.0 * c0 * w2[j]
        c0 = mdot(cd, w1)
        for j in range(3):
            cd[j] = -cd[j] - 2.0 * c0 * w1[j]
        for i in range(3):
            wv[i] = W[i, 0] * w2[0] + W[i, 1] * w2[1] + W[i, 2] * w2[2]
        for i in range(3):
            W[i, 0] = -W[i, 0] - 2.0 * wv[i] * w2[0]
            W[i, 1] = -W[i, 1] - 2.0 * wv[i] * w2[1]
            W[i, 2] = -W[i, 2] + 2.0 * wv[i] * w2[2]
        for i in range(3):
            wv[i] = W[i, 0] * w1[0] + W[i, 1] * w1[1] + W[i, 2] * w1[2]
        for i in range(3):
            W[i, 0] = -W[i, 0] - 2.0 * wv[i] * w1[0]
            W[i, 1] = -W[i, 1] - 2.0 * wv[i] * w1[1]
            W[i, 2] = -W[i, 2] + 2.0 * wv[i] * w1[2]
        s_cur = s_exit
        s_hlo = s_exit + HEPS
    for i in range(4):
        mat3_vec(W, C[i], tmp)
        for j in range(3):
            cor_out[i, j] = tmp[j]
    return n, status


@maybe_jit
def sphere_walk(u_rows, w_rows, h_rows, p_rows, xa, xb, record, max_steps, out, g_out):
    """Trace the chord xa -> xb through the reflection tiling of the sphere.

    u_rows: the three seam-line duals of the base region {<x,u_i> <= 0}.
    w_rows: seam waist points under the active waist rule. h_rows/p_rows:
    height-line duals and their waists. The walk state is g in the
    reflection group; the final g is written to g_out (det +-1).
    Height crossings use windows closed at the tile exit so a crossing at
    a seam foot is counted exactly once. Returns (ncross, status).
    """
    g = np.eye(3)
    R = np.empty((3, 3, 3))
    for i in range(3):
        reflect_mat(u_rows[i], R[i])
    S = np.empty((3, 3))
    gw = np.empty((3, 3))
    gh = np.empty((3, 3))
    gp = np.empty((3, 3))
    tmp = np.empty(3)
    q = np.empty(3)
    cd = np.empty(3)
    gn = np.empty((3, 3))
    mcross(xa, xb, cd)
    if normalize_space(cd, cd) != 0:
        return 0, 3
    n = 0
    s_cur = 0.0
    s_hlo = 0.0
    status = 2
    for _step in range(max_steps):
        for i in range(3):
            mat3_vec(g, u_rows[i], tmp)
            S[i, 0] = -tmp[0]
            S[i, 1] = -tmp[1]
            S[i, 2] = -tmp[2]
            mat3_vec(g, w_rows[i], gw[i])
            mat3_vec(g, h_rows[i], gh[i])
            mat3_vec(g, p_rows[i], gp[i])
        s_exit = 2.0
        s_next = 3.0
        k_exit = -1
        for k in range(3):
            fa = mdot(xa, S[k])
            fb = mdot(xb, S[k])
            if fb < fa:
                sk = fa / (fa - fb)
                if sk >= s_cur - 1e-14:
                    if sk < s_exit:
                        s_next = s_exit
                        s_exit = sk
                        k_exit = k
                    elif sk < s_next:
                        s_next = sk
        if k_exit >= 0 and s_next - s_exit <= TIE_EPS:
            return n, 3
        if s_exit >= 1.0 - TIE_EPS and s_exit <= 1.0 + TIE_EPS:
            return n, 3
        done = s_exit >= 1.0
        s_end = 1.0 if done else s_exit + HEPS
        if record != 0:
            for d in range(3):
                fa = mdot(xa, gh[d])
                fb = mdot(xb, gh[d])
                den = fa - fb
                if den == 0.0:
                    continue
                sd = fa / den
                if sd > s_hlo and sd <= s_end and sd < 1.0:
                    for i in range(3):
                        tmp[i] = xa[i] + sd * (xb[i] - xa[i])
                    if normalize_time(tmp, q) != 0:
                        return n, 3
                    if n >= MAXC:
                        return n, 4
                    t = _acosh1(-mdot(xa, q))
                    ang = math.acos(_clip1(mdot(cd, gh[d])))
                    r = _acosh1(-mdot(q, gp[d]))
                    fc = fa + s_cur * (fb - fa)
                    direc = 1.0 if fc < 0.0 else -1.0
                    _record(out, n, float(3 + d), t, q, ang, r, direc, gh[d], gp[d])
                    n += 1
            if not done:
                fa = mdot(xa, S[k_exit])
                fb = mdot(xb, S[k_exit])
                for i in range(3):
                    tmp[i] = xa[i] + s_exit * (xb[i] - xa[i])
                if normalize_time(tmp, q) != 0:
                    return n, 3
                if n >= MAXC:
                    return n, 4
                t = _acosh1(-mdot(xa, q))
                ang = math.acos(_clip1(mdot(cd, S[k_exit])))
                r = _acosh1(-mdot(q, gw[k_exit]))
                fc = fa + s_cur * (fb - fa)
                direc = 1.0 if fc < 0.0 else -1.0
                _record(out, n, float(k_exit), t, q, ang, r, direc, S[k_exit], gw[k_exit])
                n += 1
        if done:
            status = 0
            break
        mat3_mul(g, R[k_exit], gn)
        for i in range(3):
            for j in range(3):
                g[i, j] = gn[i, j]
        s_cur = s_exit
        s_hlo = s_exit + HEPS
    for i in range(3):
        for j in range(3):
            g_out[i, j] = g[i, j]
    return n, status
