"""Exhaustive automorphism search and small permutation-group utilities."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .flag import FlagComplex

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """The search produced more elements than the configured budget."""


Perm = tuple[int, ...]


class PermGroup:
    """Explicit finite permutation group on ``0..n-1``.

    Elements are stored sorted; the identity is always present.
    """

    def __init__(self, n: int, elements: Iterable[Sequence[int]], generators: Sequence[int] | None = None):
        elems = sorted({tuple(int(v) for v in e) for e in elements})
        ident = tuple(range(n))
        if ident not in elems:
            elems.insert(0, ident)
            elems.sort()
        self.n = n
        self.elements: list[Perm] = elems
        self._index = {e: i for i, e in enumerate(elems)}
        self.generators: list[int] = list(generators) if generators is not None else _greedy_generators(elems, n)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p) -> bool:
        return tuple(int(v) for v in p) in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def is_closed(self) -> bool:
        """Closure under composition and inverses, checked exhaustively."""
        for f in self.elements:
            if invert(f) not in self._index:
                return False
            for g in self.elements:
                if compose(f, g) not in self._index:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "degree": self.n,
            "generators": self.generators,
            "elements": [list(e) for e in self.elements],
        }


def compose(f: Perm, g: Perm) -> Perm:
    """``f o g``: apply ``g`` first."""
    return tuple(f[i] for i in g)


def invert(f: Perm) -> Perm:
    inv = [0] * len(f)
    for i, v in enumerate(f):
        inv[v] = i
    return tuple(inv)


def _greedy_generators(elems: list[Perm], n: int) -> list[int]:
    gens: list[int] = []
    span = {tuple(range(n))}
    for i, e in enumerate(elems):
        if e in span:
            continue
        gens.append(i)
        span = _closure(span, [elems[j] for j in gens])
    return gens


def _closure(start: set[Perm], gens: list[Perm]) -> set[Perm]:
    seen = set(start)
    frontier = list(seen)
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                h = compose(g, f)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def vertex_invariants(K: FlagComplex) -> list[tuple]:
    """Per-vertex isomorphism invariants used to restrict candidate images.

    Degree, sorted multiset of neighbor degrees, and the size of the vertex's
    equal-star class.
    """
    n = len(K)
    deg = [K.degree(v) for v in range(n)]
    star_count: dict[frozenset, int] = {}
    for v in range(n):
        s = K.star0(v)
        star_count[s] = star_count.get(s, 0) + 1
    return [
        (deg[v], tuple(sorted(deg[u] for u in K.neighbors(v))), star_count[K.star0(v)])
        for v in range(n)
    ]


def _search_order(K: FlagComplex, cells: dict[tuple, list[int]], inv: list[tuple]) -> list[int]:
    # Start from the smallest cell and grow along adjacency so that each new
    # vertex is constrained by already placed neighbors.
    n = len(K)
    placed: list[int] = []
    seen = [False] * n
    remaining = sorted(range(n), key=lambda v: (len(cells[inv[v]]), -K.degree(v), v))
    while len(placed) < n:
        root = next(v for v in remaining if not seen[v])
        seen[root] = True
        queue = [root]
        while queue:
            v = queue.pop(0)
            placed.append(v)
            for u in sorted(K.neighbors(v), key=lambda u: (len(cells[inv[u]]), u)):
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
    return placed


def all_automorphisms(K: FlagComplex, budget: int = DEFAULT_BUDGET, threads: int = 1) -> PermGroup:
    """Every automorphism of ``K`` by exact backtracking.

    Raises :class:`BudgetExceeded` if more than ``budget`` elements are found.
    """
    n = len(K)
    if n == 0:
        return PermGroup(0, [()])
    adj = K.adjacency()
    inv = vertex_invariants(K)
    cells: dict[tuple, list[int]] = {}
    for v in range(n):
        cells.setdefault(inv[v], []).append(v)
    order = _search_order(K, cells, inv)
    candidates = [cells[inv[v]] for v in order]
    # For each position, the earlier positions it must stay consistent with.
    earlier = [order[:i] for i in range(n)]

    def extend(start_image: int) -> list[Perm]:
        found: list[Perm] = []
        image = [-1] * n
        used = [False] * n

        def rec(i: int) -> None:
            if i == n:
                found.append(tuple(image))
                if len(found) > budget:
                    raise BudgetExceeded(f"more than {budget} automorphisms")
                return
            v = order[i]
            cands = [start_image] if i == 0 else candidates[i]
            for u in cands:
                if used[u]:
                    continue
                ok = True
                for w in earlier[i]:
                    if adj[v, w] != adj[u, image[w]]:
                        ok = False
                        break
                if not ok:
                    continue
                image[v] = u
                used[u] = True
                rec(i + 1)
                used[u] = False
                image[v] = -1

        rec(0)
        return found

    firsts = candidates[0]
    if threads > 1 and len(firsts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(extend, firsts))
    else:
        parts = [extend(u) for u in firsts]
    elements = [p for part in parts for p in part]
    if len(elements) > budget:
        raise BudgetExceeded(f"more than {budget} automorphisms")
    return PermGroup(n, elements)


def is_normal(H: PermGroup, G: PermGroup) -> bool:
    """True iff ``g H g^-1 = H`` for every ``g`` in ``G``."""
    if H.n != G.n:
        raise ValueError("groups act on different sets")
    for h in H.elements:
        if h not in G:
            raise ValueError("H is not contained in G")
    hset = set(H.elements)
    for g in G.elements:
        gi = invert(g)
        for h in H.elements:
            if compose(compose(g, h), gi) not in hset:
                return False
    return True


def group_from_permutations(n: int, perms: Iterable[Sequence[int]]) -> PermGroup:
    return PermGroup(n, perms)


def as_perm(arr) -> Perm:
    return tuple(int(v) for v in np.asarray(arr).tolist())
