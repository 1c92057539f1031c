"""Finite flag complexes stored as graphs.

A flag complex is determined by its 1-skeleton: a finite vertex set is a
simplex exactly when its vertices are pairwise adjacent.  Vertices are dense
integers ``0..n-1``; each carries a string label.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from itertools import combinations

import numpy as np


class ComplexError(ValueError):
    """Raised for malformed complexes or queries on unknown vertices."""


class FlagComplex:
    """Immutable flag complex on vertices ``0..n-1``.

    >>> K = FlagComplex.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    >>> K.is_simplex({0, 1, 2})
    True
    """

    __slots__ = ("_n", "_labels", "_nbrs", "_adj", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None):
        if n < 0:
            raise ComplexError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            a, b = int(a), int(b)
            if not (0 <= a < n and 0 <= b < n):
                raise ComplexError(f"edge ({a}, {b}) references an undeclared vertex")
            if a == b:
                raise ComplexError(f"self-loop at vertex {a}")
            nbrs[a].add(b)
            nbrs[b].add(a)
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise ComplexError("label count does not match vertex count")
        self._n = n
        self._labels = tuple(str(s) for s in labels)
        self._nbrs = tuple(frozenset(s) for s in nbrs)
        self._adj = None
        self._edges = tuple(sorted((a, b) for a in range(n) for b in nbrs[a] if a < b))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None) -> "FlagComplex":
        return cls(n, edges, labels)

    def __len__(self) -> int:
        return self._n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FlagComplex):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges and self._labels == other._labels

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"FlagComplex(n={self._n}, edges={len(self._edges)})"

    @property
    def vertices(self) -> range:
        return range(self._n)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as sorted ``(a, b)`` pairs with ``a < b``."""
        return self._edges

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    def adjacency(self) -> np.ndarray:
        """Dense boolean adjacency matrix (cached)."""
        if self._adj is None:
            adj = np.zeros((self._n, self._n), dtype=np.bool_)
            if self._edges:
                e = np.asarray(self._edges, dtype=np.int64)
                adj[e[:, 0], e[:, 1]] = True
                adj[e[:, 1], e[:, 0]] = True
            adj.setflags(write=False)
            self._adj = adj
        return self._adj

    def _check(self, x: int) -> int:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self._n:
            raise ComplexError(f"unknown vertex {x!r}")
        return int(x)

    def neighbors(self, x: int) -> frozenset[int]:
        return self._nbrs[self._check(x)]

    def degree(self, x: int) -> int:
        return len(self._nbrs[self._check(x)])

    def adjacent(self, x: int, y: int) -> bool:
        return self._check(y) in self._nbrs[self._check(x)]

    def is_simplex(self, s: Iterable[int]) -> bool:
        """True iff ``s`` is a clique; the empty set is a simplex."""
        s = [self._check(v) for v in s]
        return all(b in self._nbrs[a] for a, b in combinations(set(s), 2))

    def star0(self, x: int) -> frozenset[int]:
        """Vertices of the closed star: ``x`` together with its neighbors."""
        x = self._check(x)
        return self._nbrs[x] | {x}

    def link0(self, x: int) -> frozenset[int]:
        """Vertices of the link: the neighbors of ``x``."""
        return self._nbrs[self._check(x)]

    def stars_equal(self, x: int, y: int) -> bool:
        return self.star0(x) == self.star0(y)

    def star_contained(self, x: int, y: int) -> bool:
        """True iff ``star0(x)`` is a subset of ``star0(y)``."""
        return self.star0(x) <= self.star0(y)

    def induced(self, keep: Iterable[int]) -> tuple["FlagComplex", list[int]]:
        """Induced subcomplex on ``keep``.

        Returns the subcomplex (renumbered densely in increasing original id
        order) and the list mapping new ids to original ids.
        """
        old = sorted({self._check(v) for v in keep})
        new_of = {v: i for i, v in enumerate(old)}
        edges = [(new_of[a], new_of[b]) for a, b in self._edges if a in new_of and b in new_of]
        return FlagComplex(len(old), edges, [self._labels[v] for v in old]), old

    def is_automorphism(self, m: Sequence[int] | Mapping[int, int]) -> bool:
        """True iff ``m`` is a bijection of the vertex set preserving adjacency both ways."""
        perm = as_permutation(m, self._n)
        if sorted(perm.tolist()) != list(range(self._n)):
            return False
        # A bijection on a finite graph that maps edges into edges maps the
        # edge set onto itself, so the inverse is simplicial as well.
        edge_set = set(self._edges)
        for a, b in self._edges:
            u, v = int(perm[a]), int(perm[b])
            if (min(u, v), max(u, v)) not in edge_set:
                return False
        return True

    def maximal_cliques(self) -> list[tuple[int, ...]]:
        """Maximal simplices, each sorted, in sorted order (Bron-Kerbosch with pivoting)."""
        out: list[tuple[int, ...]] = []

        def expand(r: set[int], p: set[int], x: set[int]) -> None:
            if not p and not x:
                out.append(tuple(sorted(r)))
                return
            pivot = max(p | x, key=lambda u: len(self._nbrs[u] & p))
            for v in sorted(p - self._nbrs[pivot]):
                expand(r | {v}, p & self._nbrs[v], x & self._nbrs[v])
                p = p - {v}
                x = x | {v}

        if self._n:
            expand(set(), set(range(self._n)), set())
        return sorted(out)

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": i, "label": lab} for i, lab in enumerate(self._labels)],
            "edges": [list(e) for e in self._edges],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FlagComplex":
        try:
            verts = data["vertices"]
            ids = [int(v["id"]) for v in verts]
            if ids != list(range(len(ids))):
                raise ComplexError("vertex ids must be 0..n-1 in order")
            labels = [str(v["label"]) for v in verts]
            edges = [(int(a), int(b)) for a, b in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ComplexError(f"malformed complex: {exc}") from exc
        return cls(len(ids), edges, labels)

    def to_dot(self, name: str = "K") -> str:
        lines = [f"graph {name} {{"]
        for i, lab in enumerate(self._labels):
            esc = lab.replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  {i} [label="{esc}"];')
        lines.extend(f"  {a} -- {b};" for a, b in self._edges)
        lines.append("}")
        return "\n".join(lines) + "\n"


def as_permutation(m: Sequence[int] | Mapping[int, int], n: int) -> np.ndarray:
    """Normalize a vertex map to an int64 array of length ``n``."""
    if isinstance(m, Mapping):
        if set(m) != set(range(n)):
            raise ComplexError("vertex map is not total")
        arr = np.array([m[i] for i in range(n)], dtype=np.int64)
    else:
        arr = np.asarray(m, dtype=np.int64)
        if arr.shape != (n,):
            raise ComplexError("vertex map is not total")
    if n and (arr.min() < 0 or arr.max() >= n):
        raise ComplexError("vertex map leaves the vertex set")
    return arr


def flag_from_graph(vertices: Sequence, edges: Iterable[tuple]) -> tuple[FlagComplex, dict]:
    """Build a flag complex from arbitrary hashable vertex labels.

    Vertex ids follow the sorted order of ``repr``-stable keys, so the result
    does not depend on input order.  Returns the complex and the label-to-id map.
    """
    keys = sorted(set(vertices), key=_sort_key)
    if len(keys) != len(list(vertices)):
        raise ComplexError("duplicate vertex labels")
    ids = {v: i for i, v in enumerate(keys)}
    pairs = []
    for a, b in edges:
        if a not in ids or b not in ids:
            raise ComplexError(f"edge ({a!r}, {b!r}) references an undeclared vertex")
        pairs.append((ids[a], ids[b]))
    return FlagComplex(len(keys), pairs, [str(k) for k in keys]), ids


def _sort_key(v):
    return (type(v).__name__, v) if isinstance(v, (int, str, tuple)) else (type(v).__name__, repr(v))


def complete_complex(n: int) -> FlagComplex:
    """The full simplex on ``n`` vertices."""
    return FlagComplex(n, combinations(range(n), 2))
