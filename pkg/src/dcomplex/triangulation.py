"""Ideal triangulations of punctured surfaces.

Every vertex of a triangulation is a puncture standing in for one boundary
component (hole) of the compact surface ``S_{g,b}``.  Triangle ``t`` has
corners ``0, 1, 2`` in counterclockwise order; side ``j`` runs from corner
``j`` to corner ``j + 1``.  Two glued sides are traversed in opposite
directions, which makes the surface oriented.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1


class UnsupportedSurface(ValueError):
    """The requested surface has no essential curves or is not modelled."""


def _find(parent: list[int], a: int) -> int:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@dataclass(frozen=True)
class Symmetry:
    """A combinatorial self-map of a triangulation.

    ``edge_perm[e]`` is the image edge of ``e`` and ``hole_perm[h - 1]`` the
    image hole of hole ``h``.  ``orientation`` is ``+1`` or ``-1``.
    """

    edge_perm: tuple[int, ...]
    hole_perm: tuple[int, ...]
    orientation: int


@dataclass
class Triangulation:
    """Oriented ideal triangulation given by side gluings.

    ``gluings`` maps each side ``(t, j)`` to its partner side.  Arrays derived
    from it: ``tri_vert[t, j]`` (vertex at corner ``j``), ``tri_edge[t, j]``
    (edge carried by side ``j``) and ``tri_sign[t, j]`` (``+1`` when side ``j``
    runs from the edge's tail to its head).
    """

    genus: int
    holes: int
    n_triangles: int
    gluings: dict[tuple[int, int], tuple[int, int]]
    tri_vert: np.ndarray = field(init=False, repr=False)
    tri_edge: np.ndarray = field(init=False, repr=False)
    tri_sign: np.ndarray = field(init=False, repr=False)
    edge_ends: np.ndarray = field(init=False, repr=False)
    edge_sides: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        T = self.n_triangles
        sides = [(t, j) for t in range(T) for j in range(3)]
        for s in sides:
            p = self.gluings.get(s)
            if p is None or p == s or self.gluings.get(p) != s:
                raise ValueError(f"side {s} is not glued to exactly one other side")
        parent = list(range(3 * T))
        for (t, j), (s, k) in self.gluings.items():
            a, b = _find(parent, 3 * t + j), _find(parent, 3 * s + (k + 1) % 3)
            parent[a] = b
            a, b = _find(parent, 3 * t + (j + 1) % 3), _find(parent, 3 * s + k)
            parent[a] = b
        vid: dict[int, int] = {}
        tri_vert = np.zeros((T, 3), dtype=np.int64)
        for t in range(T):
            for j in range(3):
                r = _find(parent, 3 * t + j)
                tri_vert[t, j] = vid.setdefault(r, len(vid))
        tri_edge = np.full((T, 3), -1, dtype=np.int64)
        tri_sign = np.zeros((T, 3), dtype=np.int64)
        ends, esides = [], []
        for t, j in sides:
            if tri_edge[t, j] >= 0:
                continue
            s, k = self.gluings[(t, j)]
            e = len(ends)
            tri_edge[t, j], tri_sign[t, j] = e, 1
            tri_edge[s, k], tri_sign[s, k] = e, -1
            ends.append((tri_vert[t, j], tri_vert[t, (j + 1) % 3]))
            esides.append(((t, j), (s, k)))
        self.tri_vert = tri_vert
        self.tri_edge = tri_edge
        self.tri_sign = tri_sign
        self.edge_ends = np.asarray(ends, dtype=np.int64).reshape(-1, 2)
        self.edge_sides = np.asarray(esides, dtype=np.int64).reshape(-1, 2, 2)
        for a in (self.tri_vert, self.tri_edge, self.tri_sign, self.edge_ends, self.edge_sides):
            a.setflags(write=False)
        if self.n_vertices != self.holes:
            raise ValueError(f"expected {self.holes} punctures, found {self.n_vertices}")
        if self.euler_characteristic != 2 - 2 * self.genus - self.holes:
            raise ValueError("cell counts do not match the requested surface")
        if not self._connected():
            raise ValueError("triangulation is disconnected")

    @property
    def n_edges(self) -> int:
        return len(self.edge_ends)

    @property
    def n_vertices(self) -> int:
        return int(self.tri_vert.max()) + 1 if self.n_triangles else 0

    @property
    def euler_characteristic(self) -> int:
        """Euler characteristic of the punctured surface, ``T - E``."""
        return self.n_triangles - self.n_edges

    @property
    def signature(self) -> tuple[int, int]:
        return (self.genus, self.holes)

    def _connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for j in range(3):
                s = self.gluings[(t, j)][0]
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        return len(seen) == self.n_triangles

    def vertex_corners(self, v: int) -> list[tuple[int, int]]:
        return [(t, j) for t in range(self.n_triangles) for j in range(3) if self.tri_vert[t, j] == v]

    def hole_of_vertex(self, v: int) -> int:
        """Holes are numbered ``1..b`` in vertex order."""
        return v + 1

    def symmetries(self) -> list[Symmetry]:
        """All combinatorial automorphisms, both orientations, sorted; identity first."""
        T = self.n_triangles
        perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)]
        found: dict[tuple, Symmetry] = {}
        for t0 in range(T):
            for p0 in perms:
                sym = self._propagate(t0, p0)
                if sym is not None:
                    found.setdefault((sym.edge_perm, sym.hole_perm, sym.orientation), sym)
        ident = tuple(range(self.n_edges))
        return sorted(found.values(), key=lambda s: (s.edge_perm != ident, s.edge_perm, s.hole_perm, -s.orientation))

    def _propagate(self, t0: int, p0: tuple[int, int, int]) -> Symmetry | None:
        tri_map = {0: (t0, p0)}
        stack = [0]
        while stack:
            t = stack.pop()
            ti, p = tri_map[t]
            for j in range(3):
                s, k = self.gluings[(t, j)]
                a, b = p[j], p[(j + 1) % 3]
                img_side = a if (a + 1) % 3 == b else b
                si, ki = self.gluings[(ti, img_side)]
                # Corner c of ti on the image side matches corner of si across it.
                def across(c):
                    return (ki + 1) % 3 if c == img_side else ki
                q = [0, 0, 0]
                q[k] = across(b)
                q[(k + 1) % 3] = across(a)
                q[(k + 2) % 3] = 3 - q[k] - q[(k + 1) % 3]
                q = tuple(q)
                if s in tri_map:
                    if tri_map[s] != (si, q):
                        return None
                else:
                    tri_map[s] = (si, q)
                    stack.append(s)
        if len({v[0] for v in tri_map.values()}) != self.n_triangles:
            return None
        orientation = 1 if p0 in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1
        edge_perm = [0] * self.n_edges
        hole_perm = [0] * self.n_vertices
        for t, (ti, p) in tri_map.items():
            for j in range(3):
                a, b = p[j], p[(j + 1) % 3]
                img_side = a if (a + 1) % 3 == b else b
                edge_perm[self.tri_edge[t, j]] = int(self.tri_edge[ti, img_side])
                hole_perm[self.tri_vert[t, j]] = int(self.tri_vert[ti, p[j]]) + 1
        return Symmetry(tuple(edge_perm), tuple(hole_perm), orientation)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "genus": self.genus,
            "holes": self.holes,
            "triangles": self.tri_vert.tolist(),
            "gluings": sorted([t, j, s, k] for (t, j), (s, k) in self.gluings.items()),
            "punctures": [self.hole_of_vertex(v) for v in range(self.n_vertices)],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "Triangulation":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError("unsupported triangulation schema version")
        glu = {(int(t), int(j)): (int(s), int(k)) for t, j, s, k in data["gluings"]}
        tri = cls(int(data["genus"]), int(data["holes"]), len(data["triangles"]), glu)
        if tri.tri_vert.tolist() != data["triangles"]:
            raise ValueError("triangle vertex table does not match the gluings")
        return tri


def _glue(g: dict, a: tuple[int, int], b: tuple[int, int]) -> None:
    g[a] = b
    g[b] = a


def _three_punctured_sphere() -> tuple[int, dict]:
    g: dict = {}
    # Triangle 1 lists the same vertices in the opposite cyclic order.
    _glue(g, (0, 0), (1, 0))
    _glue(g, (0, 1), (1, 2))
    _glue(g, (0, 2), (1, 1))
    return 2, g


def _one_holed_genus(genus: int) -> tuple[int, dict]:
    # Fan triangulation of the 4g-gon with side word a1 b1 a1^-1 b1^-1 ...
    # Fan triangle i - 1 has corners (P0, Pi, Pi+1), i = 1 .. 4g-2.
    n = 4 * genus
    T = n - 2
    g: dict = {}

    def polygon_side(k: int) -> tuple[int, int]:
        if k == 0:
            return (0, 0)
        if k == n - 1:
            return (T - 1, 2)
        return (k - 1, 1)

    for i in range(1, T):
        _glue(g, (i - 1, 2), (i, 0))
    for h in range(genus):
        for k in (4 * h, 4 * h + 1):
            _glue(g, polygon_side(k), polygon_side(k + 2))
    return T, g


def _stellar(T: int, g: dict, t: int) -> tuple[int, dict]:
    """Insert a new puncture inside triangle ``t``."""
    a, b, c = t, T, T + 1
    old = {j: g[(t, j)] for j in range(3)}
    new: dict = {k: v for k, v in g.items() if k[0] != t and v[0] != t}
    # New triangles (v0, v1, u), (v1, v2, u), (v2, v0, u); side 0 keeps the old side.
    for j, tri in enumerate((a, b, c)):
        partner = old[j]
        if partner[0] == t:
            partner = ((a, b, c)[partner[1]], 0)
        _glue(new, (tri, 0), partner)
    _glue(new, (a, 1), (b, 2))
    _glue(new, (b, 1), (c, 2))
    _glue(new, (c, 1), (a, 2))
    return T + 2, new


def standard_triangulation(genus: int, holes: int) -> Triangulation:
    """Canonical ideal triangulation of ``S_{genus,holes}``.

    Spheres start from two triangles (three punctures), higher genus from the
    fan triangulation of a 4g-gon (one puncture).  Further punctures are
    added by subdividing the last triangle.  The result has
    ``4g - 4 + 2b`` triangles and ``6g - 6 + 3b`` edges.
    """
    if genus < 0 or holes < 0:
        raise UnsupportedSurface("genus and hole count must be non-negative")
    if holes == 0:
        raise UnsupportedSurface("closed surfaces are not modelled (holes are punctures)")
    if genus == 0 and holes <= 3:
        raise UnsupportedSurface(f"S_(0,{holes}) has no essential curves")
    if genus == 0:
        T, g = _three_punctured_sphere()
        base = 3
    else:
        T, g = _one_holed_genus(genus)
        base = 1
    for _ in range(holes - base):
        T, g = _stellar(T, g, T - 1)
    return Triangulation(genus, holes, T, g)
