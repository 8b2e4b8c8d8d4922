"""Arc-complex combinatorics for the two small surfaces.

The punctured-torus complex is the Farey tessellation: vertices are
slopes p/q in P^1(Q), triangles are triples with pairwise determinant
one, and removing a vertex of a triangle admits exactly one other
completion (the flip). The thrice-punctured sphere complex is finite
and hard-coded: 6 arcs named by the boundary components they join.
"""

import math
from dataclasses import dataclass

DEPTH_CAP = 12

SPHERE_ARCS = ("bc", "ca", "ab", "aa", "bb", "cc")

# The 4 triangulations: the central one and its three one-flip neighbors.
SPHERE_TRIANGLES = (
    frozenset(("bc", "ca", "ab")),
    frozenset(("aa", "ca", "ab")),
    frozenset(("bc", "bb", "ab")),
    frozenset(("bc", "ca", "cc")),
)

# Flipping arc xy in a triangulation containing it yields the doubled
# arc zz for the third boundary z, and back.
_SPHERE_FLIP = {"bc": "aa", "ca": "bb", "ab": "cc", "aa": "bc", "bb": "ca", "cc": "ab"}


@dataclass(frozen=True, order=True)
class Slope:
    """Reduced slope p/q with q >= 0, and p = 1 when q = 0."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if (p, q) == (0, 0):
            raise ValueError("slope 0/0")
        g = math.gcd(abs(p), abs(q))
        p //= g
        q //= g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def __str__(self):
        return f"{self.p}/{self.q}"

    def key(self):
        return (self.q, self.p)


def parse_slope(text):
    p, q = text.split("/")
    return Slope(int(p), int(q))


def farey_adjacent(s, t):
    """True iff the slopes bound a Farey edge: |ps' - qp'| = 1."""
    return abs(s.p * t.q - s.q * t.p) == 1


def canonical_triangle(slopes):
    tri = tuple(sorted(slopes, key=Slope.key))
    if len(set(tri)) != 3:
        raise ValueError("degenerate triangle")
    for i in range(3):
        for j in range(i + 1, 3):
            if not farey_adjacent(tri[i], tri[j]):
                raise ValueError(f"not Farey-adjacent: {tri[i]} {tri[j]}")
    return tri


ROOT_TRIANGLE = canonical_triangle((Slope(0, 1), Slope(1, 0), Slope(1, 1)))


def flip(tri, vertex):
    """The other slope completing tri minus `vertex` to a Farey triangle.

    The two triangles on an edge {y, z} have third vertices y+z and
    y-z projectively; the flip swaps them.
    """
    if vertex not in tri:
        raise ValueError("vertex not in triangle")
    y, z = (s for s in tri if s != vertex)
    plus = Slope(y.p + z.p, y.q + z.q)
    if plus != vertex:
        return plus
    return Slope(y.p - z.p, y.q - z.q)


def flip_triangle(tri, vertex):
    """The adjacent triangle across the edge opposite to `vertex`."""
    new = flip(tri, vertex)
    return canonical_triangle([new if s == vertex else s for s in tri])


def enumerate_triangles(depth, cap=DEPTH_CAP):
    """All Farey triangles within `depth` flips of the root, BFS order.

    Children of each triangle are visited in (q, p)-lexicographic order
    of the inserted slope, so the output order is reproducible. Count is
    1 + 3(2^depth - 1).
    """
    if depth < 0:
        raise ValueError("negative depth")
    if depth > cap:
        raise ValueError(f"depth {depth} over cap {cap}")
    out = [ROOT_TRIANGLE]
    frontier = [(ROOT_TRIANGLE, None)]
    for _ in range(depth):
        nxt = []
        for tri, parent_edge in frontier:
            children = []
            for vertex in tri:
                edge = tuple(s for s in tri if s != vertex)
                if parent_edge is not None and set(edge) == set(parent_edge):
                    continue
                new = flip(tri, vertex)
                child = canonical_triangle([new if s == vertex else s for s in tri])
                children.append((new.key(), child, edge + (new,)))
            children.sort(key=lambda c: c[0])
            for _key, child, marker in children:
                out.append(child)
                nxt.append((child, marker[:2]))
        frontier = nxt
    return out


def triangle_to_json(tri):
    return [str(s) for s in tri]


def sphere_complex():
    """Vertices, edges and triangles of the sphere arc complex.

    Returns (vertices, edges, triangles) with exact counts (6, 9, 4);
    the three edges of the central triangulation are the inner ones
    (shared by two triangles), all others are frontier.
    """
    vertices = list(SPHERE_ARCS)
    edges = set()
    for tri in SPHERE_TRIANGLES:
        t = sorted(tri)
        edges.add(frozenset((t[0], t[1])))
        edges.add(frozenset((t[0], t[2])))
        edges.add(frozenset((t[1], t[2])))
    edges = sorted(edges, key=lambda e: sorted(e))
    return vertices, edges, list(SPHERE_TRIANGLES)


def sphere_flip(tri, label):
    """Flip one arc of a sphere triangulation; errors on frontier edges."""
    if label not in tri:
        raise ValueError("vertex not in triangle")
    new = _SPHERE_FLIP[label]
    target = frozenset(a for a in tri if a != label) | {new}
    if target not in SPHERE_TRIANGLES:
        raise ValueError("no adjacent triangulation across this edge")
    return new
