"""Small named complexes used by tests, the CLI, and the acceptance run."""

from __future__ import annotations

from itertools import combinations

from .flag import FlagComplex, flag_from_graph


def complete(n: int) -> tuple[FlagComplex, dict[int, int]]:
    """Full simplex on labels ``1..n``."""
    labels = list(range(1, n + 1))
    return flag_from_graph(labels, combinations(labels, 2))


def path(labels=("a", "b", "c")) -> tuple[FlagComplex, dict]:
    return flag_from_graph(list(labels), list(zip(labels, labels[1:])))


def line_of_edges(m: int) -> tuple[FlagComplex, dict[tuple[int, int], int]]:
    """Columns ``0..m-1`` of the spine-with-whiskers complex.

    Vertices are ``(i, s)`` with ``s`` in ``{-1, 0, 1}``; edges join
    consecutive spine vertices ``(i, 0), (i + 1, 0)`` and each spine vertex to
    its two whiskers ``(i, -1)`` and ``(i, 1)``.
    """
    if m < 1:
        raise ValueError("need at least one column")
    verts = [(i, s) for i in range(m) for s in (-1, 0, 1)]
    edges = [((i, 0), (i + 1, 0)) for i in range(m - 1)]
    edges += [((i, 0), (i, s)) for i in range(m) for s in (-1, 1)]
    return flag_from_graph(verts, edges)


def column_pairs(ids: dict[tuple[int, int], int], m: int) -> list[tuple[int, int]]:
    """The whisker pair of every column, as sorted vertex-id pairs."""
    return sorted(tuple(sorted((ids[(i, -1)], ids[(i, 1)]))) for i in range(m))


def translation(ids: dict[tuple[int, int], int], m: int, shift: int = 1) -> list[int] | None:
    """Vertex map ``(i, s) -> (i + shift, s)`` when it stays inside the columns, else None."""
    perm = [0] * len(ids)
    for (i, s), v in ids.items():
        if (i + shift, s) not in ids:
            return None
        perm[v] = ids[(i + shift, s)]
    return perm


def line_of_edges_cyclic(m: int) -> tuple[FlagComplex, dict[tuple[int, int], int]]:
    """Spine closed into an ``m``-cycle (``m >= 3``) so that translation is an automorphism."""
    if m < 3:
        raise ValueError("a cyclic spine needs at least three columns")
    verts = [(i, s) for i in range(m) for s in (-1, 0, 1)]
    edges = [((i, 0), ((i + 1) % m, 0)) for i in range(m)]
    edges += [((i, 0), (i, s)) for i in range(m) for s in (-1, 1)]
    return flag_from_graph(verts, edges)


def cyclic_translation(ids: dict[tuple[int, int], int], m: int, shift: int = 1) -> list[int]:
    perm = [0] * len(ids)
    for (i, s), v in ids.items():
        perm[v] = ids[((i + shift) % m, s)]
    return perm
