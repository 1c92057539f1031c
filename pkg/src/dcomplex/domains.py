"""Domains on a surface and the predicates between them.

A non-annular domain is a complementary piece of its own essential boundary
system ``M``; with at least one hole on the surface such a piece is pinned
down by the pair (``M``, holes it contains).  An annular domain is named by
its core curve.  Every predicate reduces to realizing a few pairwise
disjoint curves together and asking which piece of a cut contains what.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .curves import CurveClass, Piece, Surface
from .triangulation import Symmetry, Triangulation, UnsupportedSurface, standard_triangulation


class DomainError(ValueError):
    """A selection that does not describe a domain."""


@dataclass(frozen=True)
class DomainClass:
    """Isotopy class of a domain.

    ``boundary`` holds the distinct essential boundary classes, sorted.
    ``sides`` lists, with repetition, which boundary class each essential
    boundary circle is parallel to (an annulus has ``sides == (0, 0)``).
    """

    boundary: tuple[CurveClass, ...]
    holes: tuple[int, ...]
    genus: int
    sides: tuple[int, ...]
    annular: bool = False

    @classmethod
    def annulus(cls, core: CurveClass) -> "DomainClass":
        if not core.essential:
            raise DomainError("an annulus core must be essential")
        return cls((core,), (), 0, (0, 0), True)

    @property
    def core(self) -> CurveClass:
        if not self.annular:
            raise DomainError("not an annulus")
        return self.boundary[0]

    @cached_property
    def key(self) -> tuple:
        coords = tuple(c.coords for c in self.boundary)
        if self.annular:
            return (0, coords, ())
        return (1, coords, self.holes)

    @cached_property
    def sort_key(self) -> tuple:
        total = np.zeros(len(self.boundary[0].coords), dtype=np.int64)
        for c in self.boundary:
            total += np.asarray(c.coords, dtype=np.int64)
        return (int(total.max()), int(total.sum()), self.key)

    def __lt__(self, other: "DomainClass") -> bool:
        return self.sort_key < other.sort_key

    def __eq__(self, other) -> bool:
        return isinstance(other, DomainClass) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def n_essential(self) -> int:
        """Number of essential boundary circles."""
        return len(self.sides)

    @property
    def n_peripheral(self) -> int:
        return len(self.holes)

    @property
    def type(self) -> tuple[int, int, int]:
        """``(genus, essential boundary circles, peripheral boundary circles)``."""
        return (self.genus, self.n_essential, self.n_peripheral)

    @property
    def is_pants(self) -> bool:
        return not self.annular and self.genus == 0 and self.n_essential + self.n_peripheral == 3

    @property
    def is_biperipheral(self) -> bool:
        return self.is_pants and self.n_peripheral == 2

    @property
    def is_monoperipheral(self) -> bool:
        return self.is_pants and self.n_peripheral == 1

    @property
    def is_nonperipheral(self) -> bool:
        return self.is_pants and self.n_peripheral == 0

    @property
    def piece_id(self) -> tuple:
        return (self.holes, frozenset(self.boundary))

    def kind(self) -> str:
        return classify(self)

    def label(self) -> str:
        if self.annular:
            return "A[" + self.core.label() + "]"
        parts = ",".join(c.label() for c in self.boundary)
        holes = ",".join(map(str, self.holes))
        return f"{self.kind()}[{parts}|h{holes}]"

    def to_json(self) -> dict:
        if self.annular:
            return {"kind": "annulus", "core": list(self.core.coords)}
        return {
            "kind": self.kind(),
            "boundary": [list(c.coords) for c in self.boundary],
            "holes": list(self.holes),
            "genus": self.genus,
            "sides": list(self.sides),
            "type": list(self.type),
        }

    @classmethod
    def from_json(cls, data: dict) -> "DomainClass":
        if data["kind"] == "annulus":
            return cls.annulus(CurveClass.make(data["core"]))
        dom = cls(
            tuple(CurveClass.make(c) for c in data["boundary"]),
            tuple(int(h) for h in data["holes"]),
            int(data["genus"]),
            tuple(int(s) for s in data["sides"]),
        )
        if dom.kind() != data["kind"] or list(dom.type) != list(data["type"]):
            raise DomainError("domain label is inconsistent with its topology")
        return dom


def classify(d: DomainClass) -> str:
    """``annulus``, ``pants-<k>`` for ``k`` peripheral circles, or ``nonelementary``."""
    if d.annular:
        return "annulus"
    if d.is_pants:
        return f"pants-{d.n_peripheral}"
    return "nonelementary"


@dataclass(frozen=True)
class Codomain:
    """A codomain of a disjoint pair; ``ends`` are the domains an annular one joins."""

    annular: bool
    ends: tuple[str, ...]

    def joins(self, a: str, b: str) -> bool:
        return self.annular and sorted(self.ends) == sorted((a, b))


class SurfaceModel:
    """Curves and domains of ``S_{g,b}`` with cached predicates."""

    def __init__(self, genus: int, holes: int, tri: Triangulation | None = None):
        self.tri = tri if tri is not None else standard_triangulation(genus, holes)
        if self.tri.signature != (genus, holes):
            raise UnsupportedSurface("triangulation does not match the requested surface")
        self.surface = Surface(self.tri)
        self._curves: dict[int, list[CurveClass]] = {}
        self._disjoint: dict[tuple, bool] = {}
        self._loc: dict[tuple, tuple] = {}

    @property
    def signature(self) -> tuple[int, int]:
        return self.tri.signature

    @property
    def genus(self) -> int:
        return self.tri.genus

    @property
    def holes(self) -> int:
        return self.tri.holes

    @property
    def excluded_s04(self) -> bool:
        return self.signature == (0, 4)

    # curves

    def curves(self, W: int) -> list[CurveClass]:
        if W not in self._curves:
            self._curves[W] = self.surface.enumerate_curves(W)
        return self._curves[W]

    def disjoint(self, a: CurveClass, b: CurveClass) -> bool:
        if a == b:
            return True
        key = (a.coords, b.coords) if a.coords < b.coords else (b.coords, a.coords)
        hit = self._disjoint.get(key)
        if hit is None:
            hit = self.surface.disjoint(a, b)
            self._disjoint[key] = hit
        return hit

    def prime_disjoint(self, curves: Sequence[CurveClass]) -> np.ndarray:
        """Fill the pair cache for ``curves`` in one batch; returns the matrix."""
        mat = self.surface.disjoint_matrix(curves)
        for i, a in enumerate(curves):
            for j in range(i + 1, len(curves)):
                b = curves[j]
                key = (a.coords, b.coords) if a.coords < b.coords else (b.coords, a.coords)
                self._disjoint[key] = bool(mat[i, j])
        return mat

    def pairwise_disjoint(self, curves: Iterable[CurveClass]) -> bool:
        cs = list(curves)
        return all(self.disjoint(cs[i], cs[j]) for i in range(len(cs)) for j in range(i + 1, len(cs)))

    # pieces and domains

    def pieces(self, system: Sequence[CurveClass]) -> list[Piece]:
        return self.surface.cut(system)

    def domain_from_selection(self, system: Sequence[CurveClass], selection) -> DomainClass:
        """Domain selected from a boundary system.

        ``selection`` is a piece index of ``cut(system)`` or ``("annulus", c)``.
        The essential boundary of the result is the set of curves the piece
        is adjacent to.
        """
        if isinstance(selection, tuple) and selection and selection[0] == "annulus":
            return DomainClass.annulus(selection[1])
        system = list(system)
        if not system:
            raise DomainError("the whole surface is not a domain")
        pieces = self.pieces(system)
        try:
            p = pieces[selection]
        except (IndexError, TypeError) as exc:
            raise DomainError(f"no piece {selection!r}") from exc
        return self._domain_of_piece(system, p)

    def _domain_of_piece(self, system: Sequence[CurveClass], p: Piece) -> DomainClass:
        used = sorted({system[i] for i in p.sides})
        pos = {c: i for i, c in enumerate(used)}
        sides = tuple(sorted(pos[system[i]] for i in p.sides))
        return DomainClass(tuple(used), p.holes, p.genus, sides)

    def domains_of_system(self, system: Sequence[CurveClass]) -> list[DomainClass]:
        """Pieces of ``cut(system)`` whose essential boundary is all of ``system``."""
        full = set(range(len(system)))
        return [self._domain_of_piece(system, p) for p in self.pieces(system) if set(p.sides) == full]

    def loc(self, system: Sequence[CurveClass], d: CurveClass) -> tuple:
        """Identity ``(holes, adjacent curves)`` of the piece of ``cut(system)`` containing ``d``.

        ``d`` must be disjoint from and distinct from every curve of ``system``.
        """
        system = tuple(sorted(system))
        key = (tuple(c.coords for c in system), d.coords)
        hit = self._loc.get(key)
        if hit is not None:
            return hit
        real, comps = self.surface.realize_system(list(system) + [d])
        res = real.cut(comps[:-1])
        q = res.piece_of_component(comps[-1])
        back = {k: system[i] for i, k in enumerate(comps[:-1])}
        piece = res.pieces[q]
        hit = (piece.holes, frozenset(back[k] for k in piece.sides))
        self._loc[key] = hit
        return hit

    def inside(self, d: CurveClass, X: DomainClass) -> bool:
        """Whether ``d`` is an essential non-peripheral curve of the non-annular domain ``X``."""
        if X.annular:
            return False
        if d in X.boundary or not all(self.disjoint(d, c) for c in X.boundary):
            return False
        return self.loc(X.boundary, d) == X.piece_id

    def domains_disjoint(self, X: DomainClass, Y: DomainClass) -> bool:
        """Whether ``X`` and ``Y`` have disjoint representatives (``X == Y`` gives True)."""
        if X == Y:
            return True
        for a in X.boundary:
            for b in Y.boundary:
                if not self.disjoint(a, b):
                    return False
        if X.annular and Y.annular:
            return True
        if X.annular or Y.annular:
            A, Z = (X, Y) if X.annular else (Y, X)
            return A.core in Z.boundary or not self.inside(A.core, Z)
        for d in Y.boundary:
            if d not in X.boundary and self.loc(X.boundary, d) == X.piece_id:
                return False
        for d in X.boundary:
            if d not in Y.boundary and self.loc(Y.boundary, d) == Y.piece_id:
                return False
        return True

    def subdomain_of(self, Y: DomainClass, X: DomainClass) -> bool:
        """Whether ``Y`` is isotopic to a domain on ``X`` other than ``X`` itself."""
        if X.annular or X == Y:
            return False
        if Y.annular:
            return self.inside(Y.core, X)
        if not self.pairwise_disjoint(set(X.boundary) | set(Y.boundary)):
            return False
        strictly = False
        for d in Y.boundary:
            if d in X.boundary:
                continue
            if self.loc(X.boundary, d) != X.piece_id:
                return False
            strictly = True
        if not strictly:
            return False
        for c in X.boundary:
            if c not in Y.boundary and self.loc(Y.boundary, c) == Y.piece_id:
                return False
        return True

    def codomains(self, X: DomainClass, Y: DomainClass) -> list[Codomain]:
        """Codomains of ``X ∪ Y`` for disjoint, distinct ``X`` and ``Y``.

        Ends of annular codomains are reported as ``"X"`` and ``"Y"``.
        """
        if X == Y or not self.domains_disjoint(X, Y):
            raise DomainError("codomains need two disjoint distinct domains")
        curves = sorted(set(X.boundary) | set(Y.boundary))
        real, comps = self.surface.realize_system(curves)
        fine = real.cut(comps)
        owner: list[str | None] = [None] * fine.n_pieces
        for name, D in (("X", X), ("Y", Y)):
            if D.annular:
                continue
            idx = [comps[curves.index(c)] for c in D.boundary]
            coarse = real.cut(idx)
            back = {k: curves[i] for i, k in enumerate(comps)}
            target = [
                p.index for p in coarse.pieces
                if (p.holes, frozenset(back[k] for k in p.sides)) == D.piece_id
            ]
            if len(target) != 1:
                raise DomainError("domain piece not found in the refinement")
            for r in range(len(fine.region_piece)):
                if coarse.region_piece[r] == target[0]:
                    owner[int(fine.region_piece[r])] = name
        parent = list(range(fine.n_pieces))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        ends: dict[int, set[str]] = {}

        def node(touch: Iterable[str]) -> int:
            parent.append(len(parent))
            n = len(parent) - 1
            ends[n] = set(touch)
            return n

        for i, c in enumerate(curves):
            banks = fine.side_pieces[comps[i]]
            cores = [name for name, D in (("X", X), ("Y", Y)) if D.annular and D.core == c]
            nodes = [node(cores), node(cores)] if cores else [node(()), node(())]
            if not cores:
                parent[nodes[1]] = nodes[0]
            for b, p in enumerate(banks):
                n = nodes[b]
                if owner[p] is None:
                    ra, rb = find(n), find(p)
                    parent[ra] = rb
                else:
                    ends[n].add(owner[p])
        groups: dict[int, list[int]] = {}
        for n in range(len(parent)):
            if n < fine.n_pieces and owner[n] is not None:
                continue
            groups.setdefault(find(n), []).append(n)
        out = []
        for members in groups.values():
            has_piece = any(n < fine.n_pieces for n in members)
            touch: set[str] = set()
            for n in members:
                touch |= ends.get(n, set())
            out.append(Codomain(not has_piece, tuple(sorted(touch)) if not has_piece else ()))
        return sorted(out, key=lambda c: (c.annular, c.ends))

    def n_joining(self, X: DomainClass, Y: DomainClass) -> int:
        return sum(1 for c in self.codomains(X, Y) if c.joins("X", "Y"))

    # symmetries

    def map_curve(self, sym: Symmetry, c: CurveClass) -> CurveClass:
        out = [0] * len(c.coords)
        for e, v in enumerate(c.coords):
            out[sym.edge_perm[e]] = v
        hole = None if c.linked_hole is None else sym.hole_perm[c.linked_hole - 1]
        return CurveClass.make(out, hole)

    def map_domain(self, sym: Symmetry, d: DomainClass) -> DomainClass:
        if d.annular:
            return DomainClass.annulus(self.map_curve(sym, d.core))
        imgs = [self.map_curve(sym, c) for c in d.boundary]
        order = sorted(range(len(imgs)), key=lambda i: imgs[i])
        rank = {old: new for new, old in enumerate(order)}
        return DomainClass(
            tuple(imgs[i] for i in order),
            tuple(sorted(sym.hole_perm[h - 1] for h in d.holes)),
            d.genus,
            tuple(sorted(rank[s] for s in d.sides)),
        )

    def symmetries(self) -> list[Symmetry]:
        return self.tri.symmetries()
