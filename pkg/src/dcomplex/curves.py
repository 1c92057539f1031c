"""Normal curves on a fixed ideal triangulation.

A multicurve is stored by its normal coordinates, one non-negative integer
per edge.  Essential simple closed curves have unique normal representatives,
so coordinates are canonical names for isotopy classes.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels as kern
from .triangulation import Triangulation


class InadmissibleWeights(ValueError):
    """Edge weights that do not describe a normal multicurve."""


@dataclass(frozen=True, order=True)
class CurveClass:
    """A connected normal curve, named by its edge weights.

    ``linked_hole`` is the hole a vertex-linking curve encircles, else None.
    """

    sort_key: tuple = ()
    coords: tuple[int, ...] = ()
    linked_hole: int | None = None

    @classmethod
    def make(cls, coords: Sequence[int], linked_hole: int | None = None) -> "CurveClass":
        coords = tuple(int(v) for v in coords)
        return cls((sum(coords), coords), coords, linked_hole)

    @property
    def essential(self) -> bool:
        return self.linked_hole is None

    @property
    def max_weight(self) -> int:
        return max(self.coords, default=0)

    def label(self) -> str:
        return "c(" + ",".join(map(str, self.coords)) + ")"

    def to_json(self) -> dict:
        return {
            "coords": list(self.coords),
            "essential": self.essential,
            "vertex_linking": self.linked_hole,
        }


@dataclass(frozen=True)
class Piece:
    """A complementary piece of a cut multicurve.

    ``sides`` lists, with repetition, the indices (into the cut multicurve's
    component list) of the curves whose sides bound the piece.
    """

    index: int
    genus: int
    holes: tuple[int, ...]
    sides: tuple[int, ...]
    chi: int

    @property
    def n_boundary(self) -> int:
        return len(self.holes) + len(self.sides)

    @property
    def adjacent(self) -> frozenset[int]:
        return frozenset(self.sides)


class Realization:
    """The normal multicurve with weights ``w`` laid out arc by arc."""

    def __init__(self, surface: "Surface", w: Sequence[int]):
        self.surface = surface
        tri = surface.tri
        self.w = np.ascontiguousarray(np.asarray(w, dtype=np.int64))
        if self.w.shape != (tri.n_edges,) or (self.w < 0).any():
            raise InadmissibleWeights("weights must be one non-negative integer per edge")
        self.c, ok = kern.corner_counts(self.w, surface.tri_edge)
        if not ok:
            raise InadmissibleWeights(f"weights {self.w.tolist()} fail the triangle conditions")
        (self.offs, self.arc_meta, self.arc_x, self.arc_low, self.cross_end) = kern.build_arcs(
            self.w, surface.tri_edge, surface.tri_sign, self.c
        )
        self.n_comp, self.comp = kern.trace_arcs(self.arc_x, self.cross_end)
        self.comp_coords = kern.component_coords(self.w, self.offs, self.arc_x, self.comp, self.n_comp)

    def components(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in row) for row in self.comp_coords]

    def cut(self, cut_components: Iterable[int]) -> "CutResult":
        mask = np.zeros(max(self.n_comp, 1), dtype=np.bool_)
        for i in cut_components:
            mask[i] = True
        s = self.surface
        n_pieces, region_piece, seg_piece, vertex_piece, bank_piece, bank_class = kern.cut_regions(
            self.w, s.tri_edge, s.tri_sign, s.tri_vert, s.edge_sides, s.tri.n_vertices,
            self.c, self.arc_meta, self.arc_x, self.arc_low, self.cross_end, self.comp, mask,
        )
        return CutResult(self, mask[: self.n_comp], n_pieces, region_piece, seg_piece, vertex_piece, bank_piece, bank_class)


class CutResult:
    """Pieces of a realization cut along a chosen subset of its components."""

    def __init__(self, real: Realization, mask, n_pieces, region_piece, seg_piece, vertex_piece, bank_piece, bank_class):
        self.real = real
        self.mask = mask
        self.n_pieces = int(n_pieces)
        self.region_piece = region_piece
        self.vertex_piece = vertex_piece
        self.bank_piece = bank_piece
        n_reg = np.bincount(region_piece, minlength=self.n_pieces)
        n_seg = np.bincount(seg_piece, minlength=self.n_pieces)
        self.chi = (n_reg - n_seg).astype(np.int64)
        # The two bank classes of each cut component and the piece on each.
        sides: dict[int, dict[int, int]] = {}
        for a in range(len(real.comp)):
            k = int(real.comp[a])
            if not mask[k]:
                continue
            for b in range(2):
                sides.setdefault(k, {})[int(bank_class[a, b])] = int(bank_piece[a, b])
        self.side_pieces: dict[int, tuple[int, int]] = {}
        for k, classes in sides.items():
            if len(classes) != 2:
                raise RuntimeError("a cut curve must have exactly two sides")
            self.side_pieces[k] = tuple(classes[c] for c in sorted(classes))

    @cached_property
    def pieces(self) -> list[Piece]:
        tri = self.real.surface.tri
        holes: dict[int, list[int]] = {p: [] for p in range(self.n_pieces)}
        for v in range(tri.n_vertices):
            holes[int(self.vertex_piece[v])].append(tri.hole_of_vertex(v))
        sides: dict[int, list[int]] = {p: [] for p in range(self.n_pieces)}
        for k, (p0, p1) in sorted(self.side_pieces.items()):
            sides[p0].append(k)
            sides[p1].append(k)
        out = []
        for p in range(self.n_pieces):
            chi = int(self.chi[p])
            nb = len(holes[p]) + len(sides[p])
            g2 = 2 - chi - nb
            if g2 < 0 or g2 % 2:
                raise RuntimeError(f"inconsistent piece topology (chi={chi}, boundary={nb})")
            out.append(Piece(p, g2 // 2, tuple(sorted(holes[p])), tuple(sorted(sides[p])), chi))
        return out

    def piece_of_component(self, k: int) -> int:
        """Piece containing an uncut component."""
        if self.mask[k]:
            raise ValueError("component is cut; it has two sides")
        a = int(np.flatnonzero(self.real.comp == k)[0])
        return int(self.bank_piece[a, 0])


@dataclass(frozen=True)
class MultiCurve:
    """Curve classes with multiplicities, sorted."""

    parts: tuple[tuple[CurveClass, int], ...]

    @classmethod
    def of(cls, counts: Counter | dict) -> "MultiCurve":
        return cls(tuple(sorted((c, int(m)) for c, m in counts.items() if m > 0)))

    def __len__(self) -> int:
        return sum(m for _, m in self.parts)

    def classes(self) -> list[CurveClass]:
        return [c for c, _ in self.parts]

    def multiplicity(self, c: CurveClass) -> int:
        return dict(self.parts).get(c, 0)

    def coords(self, n_edges: int) -> tuple[int, ...]:
        total = np.zeros(n_edges, dtype=np.int64)
        for c, m in self.parts:
            total += m * np.asarray(c.coords, dtype=np.int64)
        return tuple(int(v) for v in total)


class Surface:
    """Curve-level operations on ``S_{g,b}`` through a fixed triangulation."""

    def __init__(self, tri: Triangulation):
        self.tri = tri
        self.tri_edge = np.ascontiguousarray(tri.tri_edge, dtype=np.int64)
        self.tri_sign = np.ascontiguousarray(tri.tri_sign, dtype=np.int64)
        self.tri_vert = np.ascontiguousarray(tri.tri_vert, dtype=np.int64)
        self.edge_sides = np.ascontiguousarray(tri.edge_sides, dtype=np.int64)
        ends = tri.edge_ends
        self._linking = {}
        for v in range(tri.n_vertices):
            coords = tuple(int((ends[e, 0] == v) + (ends[e, 1] == v)) for e in range(tri.n_edges))
            self._linking[coords] = tri.hole_of_vertex(v)

    @property
    def signature(self) -> tuple[int, int]:
        return self.tri.signature

    @property
    def n_edges(self) -> int:
        return self.tri.n_edges

    def linking_curve(self, hole: int) -> CurveClass:
        for coords, h in self._linking.items():
            if h == hole:
                return CurveClass.make(coords, h)
        raise KeyError(hole)

    def admissible(self, w: Sequence[int]) -> bool:
        w = np.asarray(w, dtype=np.int64)
        if w.shape != (self.n_edges,) or (w < 0).any():
            return False
        return bool(kern.corner_counts(w, self.tri_edge)[1])

    def realize(self, w: Sequence[int]) -> Realization:
        return Realization(self, w)

    def classify_component(self, coords: Sequence[int]) -> CurveClass:
        coords = tuple(int(v) for v in coords)
        return CurveClass.make(coords, self._linking.get(coords))

    def trace(self, w: Sequence[int]) -> MultiCurve:
        """Split weights into connected components with multiplicities."""
        real = self.realize(w)
        return MultiCurve.of(Counter(self.classify_component(c) for c in real.components()))

    def curve(self, coords: Sequence[int]) -> CurveClass:
        """The connected curve with these coordinates; raises if not connected."""
        mc = self.trace(coords)
        if len(mc) != 1:
            raise InadmissibleWeights(f"weights {tuple(coords)} do not trace to one curve")
        return mc.parts[0][0]

    def is_essential(self, c: CurveClass) -> bool:
        self.curve(c.coords)
        return c.essential

    def disjoint(self, a: CurveClass, b: CurveClass) -> bool:
        """True iff ``a`` and ``b`` have disjoint representatives (``i(a, b) = 0``)."""
        if len(a.coords) != self.n_edges or len(b.coords) != self.n_edges:
            raise ValueError("curve coordinates do not match this triangulation")
        coords = np.array([a.coords, b.coords], dtype=np.int64)
        return bool(kern.disjoint_batch(coords, np.array([[0, 1]], dtype=np.int64), self.tri_edge, self.tri_sign)[0])

    def disjoint_matrix(self, curves: Sequence[CurveClass]) -> np.ndarray:
        """Symmetric boolean matrix of pairwise disjointness (diagonal True)."""
        n = len(curves)
        out = np.eye(n, dtype=np.bool_)
        if n < 2:
            return out
        coords = np.array([c.coords for c in curves], dtype=np.int64)
        iu, ju = np.triu_indices(n, 1)
        pairs = np.stack([iu, ju], axis=1).astype(np.int64)
        res = kern.disjoint_batch(coords, pairs, self.tri_edge, self.tri_sign)
        out[iu, ju] = res
        out[ju, iu] = res
        return out

    def realize_system(self, curves: Sequence[CurveClass]) -> tuple[Realization, list[int]]:
        """Realize pairwise disjoint distinct curves together.

        Returns the realization and, for each input curve, its component index.
        """
        w = np.zeros(self.n_edges, dtype=np.int64)
        for c in curves:
            w += np.asarray(c.coords, dtype=np.int64)
        real = self.realize(w)
        comps = real.components()
        index = {c: i for i, c in enumerate(comps)}
        if len(index) != len(comps) or len(comps) != len(curves):
            raise ValueError("curves are not a system of pairwise disjoint distinct classes")
        try:
            return real, [index[c.coords] for c in curves]
        except KeyError as exc:
            raise ValueError("curves are not pairwise disjoint") from exc

    def cut(self, curves: Sequence[CurveClass]) -> list[Piece]:
        """Complementary pieces of a system of curves.

        Piece ``sides`` refer to positions in ``curves``.
        """
        if not curves:
            real = self.realize(np.zeros(self.n_edges, dtype=np.int64))
            return real.cut([]).pieces
        for c in curves:
            if not c.essential:
                raise ValueError("only essential curves can be cut along")
        real, comp_of = self.realize_system(curves)
        res = real.cut(comp_of)
        back = {k: i for i, k in enumerate(comp_of)}
        return [
            Piece(p.index, p.genus, p.holes, tuple(sorted(back[k] for k in p.sides)), p.chi)
            for p in res.pieces
        ]

    def enumerate_curves(self, W: int) -> list[CurveClass]:
        """Essential curves with every edge weight at most ``W``, sorted."""
        if W <= 0:
            return []
        E = self.n_edges
        order = np.arange(E, dtype=np.int64)
        pos = np.empty(E, dtype=np.int64)
        pos[order] = np.arange(E)
        tri_ready = pos[self.tri_edge].max(axis=1)
        vert_ready = np.zeros(self.tri.n_vertices, dtype=np.int64)
        for t in range(self.tri.n_triangles):
            for j in range(3):
                v = self.tri_vert[t, j]
                vert_ready[v] = max(vert_ready[v], tri_ready[t])
        found = kern.enumerate_essential(
            int(W), order, self.tri_edge, self.tri_sign, self.tri_vert, self.tri.n_vertices, tri_ready, vert_ready
        )
        return sorted(CurveClass.make(row) for row in found.tolist())

    def find_distinguishing_curve(self, system: Sequence[CurveClass], alpha: CurveClass, bound: int,
                                  pool: Sequence[CurveClass] | None = None) -> CurveClass | None:
        """A curve meeting ``alpha`` but disjoint from the rest of ``system``.

        Searches essential curves up to weight ``bound`` (or ``pool``) in sorted
        order.  ``None`` means the search failed, not that no such curve exists.
        """
        if alpha not in system:
            raise ValueError("alpha must belong to the system")
        others = [c for c in system if c != alpha]
        candidates = pool if pool is not None else self.enumerate_curves(bound)
        for g in candidates:
            if g.max_weight > bound:
                continue
            if self.disjoint(g, alpha):
                continue
            if all(self.disjoint(g, b) for b in others):
                return g
        return None
