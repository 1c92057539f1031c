"""Exchangeable vertex pairs and the involutions they generate."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .flag import ComplexError, FlagComplex, as_permutation


class ExchangeError(ValueError):
    """Raised when a pair family does not define an exchange automorphism."""


def is_exchangeable(K: FlagComplex, x: int, y: int) -> bool:
    """True iff swapping ``x`` and ``y`` (fixing all else) is an automorphism.

    Adjacent pairs are exchangeable iff their stars agree, non-adjacent pairs
    iff their links agree.
    """
    if x == y:
        raise ExchangeError("an exchangeable pair needs two distinct vertices")
    if K.adjacent(x, y):
        return K.star0(x) == K.star0(y)
    return K.link0(x) == K.link0(y)


def is_exchangeable_general(K: FlagComplex, x: int, y: int) -> bool:
    """Exchangeability tested against simplices avoiding both vertices.

    Compares ``St(x)`` and ``St(y)`` restricted to the subcomplex of simplices
    containing neither ``x`` nor ``y``.  For a flag complex the restricted
    stars are determined by the neighbor sets with ``x`` and ``y`` removed.
    Kept separate from :func:`is_exchangeable` so the two can be cross-checked.
    """
    if x == y:
        raise ExchangeError("an exchangeable pair needs two distinct vertices")
    return K.link0(x) - {y} == K.link0(y) - {x}


@dataclass(frozen=True)
class ExchangeSet:
    """Vertex-disjoint unordered pairs, stored sorted."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        norm = []
        for p in self.pairs:
            a, b = (int(v) for v in p)
            if a == b:
                raise ExchangeError(f"degenerate pair ({a}, {b})")
            norm.append((min(a, b), max(a, b)))
        norm = tuple(sorted(set(norm)))
        seen: set[int] = set()
        for a, b in norm:
            if a in seen or b in seen:
                raise ExchangeError(f"pair ({a}, {b}) shares a vertex with another pair")
            seen.update((a, b))
        object.__setattr__(self, "pairs", norm)

    @classmethod
    def of(cls, pairs: Iterable[Sequence[int]]) -> "ExchangeSet":
        return cls(tuple(tuple(p) for p in pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __contains__(self, pair) -> bool:
        a, b = pair
        return (min(a, b), max(a, b)) in set(self.pairs)

    def vertices(self) -> frozenset[int]:
        return frozenset(v for p in self.pairs for v in p)

    def subset(self, mask: int) -> "ExchangeSet":
        """Sub-family selected by the bits of ``mask`` (bit i = i-th pair)."""
        return ExchangeSet(tuple(p for i, p in enumerate(self.pairs) if mask >> i & 1))

    def mask_of(self, sub: "ExchangeSet") -> int:
        index = {p: i for i, p in enumerate(self.pairs)}
        mask = 0
        for p in sub.pairs:
            if p not in index:
                raise ExchangeError(f"pair {p} is not in the ambient family")
            mask |= 1 << index[p]
        return mask

    def symmetric_difference(self, other: "ExchangeSet") -> "ExchangeSet":
        return ExchangeSet(tuple(set(self.pairs) ^ set(other.pairs)))

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs]}

    @classmethod
    def from_json(cls, data) -> "ExchangeSet":
        try:
            return cls.of(data["pairs"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ExchangeError(f"malformed exchange set: {exc}") from exc


@dataclass(frozen=True)
class ExchangeAutomorphism:
    """The involution swapping each pair of ``support`` and fixing everything else."""

    support: ExchangeSet
    perm: tuple[int, ...]

    def __call__(self, v: int) -> int:
        return self.perm[v]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.perm, dtype=np.int64)


def _swap_perm(n: int, F: ExchangeSet) -> tuple[int, ...]:
    perm = list(range(n))
    for a, b in F:
        if not (0 <= a < n and 0 <= b < n):
            raise ComplexError(f"unknown vertex in pair ({a}, {b})")
        perm[a], perm[b] = b, a
    return tuple(perm)


def generalized_exchange(K: FlagComplex, F: ExchangeSet | Iterable[Sequence[int]]) -> ExchangeAutomorphism:
    """Exchange automorphism of ``K`` supported on the vertex-disjoint family ``F``."""
    if not isinstance(F, ExchangeSet):
        F = ExchangeSet.of(F)
    for a, b in F:
        if not is_exchangeable(K, a, b):
            raise ExchangeError(f"pair ({a}, {b}) is not exchangeable")
    return ExchangeAutomorphism(F, _swap_perm(len(K), F))


def simple_exchange(K: FlagComplex, x: int, y: int) -> ExchangeAutomorphism:
    return generalized_exchange(K, ExchangeSet(((x, y),)))


def compose_exchanges(f: ExchangeAutomorphism, g: ExchangeAutomorphism) -> ExchangeAutomorphism:
    """``f o g``, computed from supports via symmetric difference."""
    if len(f.perm) != len(g.perm):
        raise ExchangeError("exchanges act on different vertex sets")
    fv, gv = f.support.vertices(), g.support.vertices()
    shared = fv & gv
    fp, gp = set(f.support.pairs), set(g.support.pairs)
    for p in fp ^ gp:
        if p[0] in shared or p[1] in shared:
            raise ExchangeError(f"supports are incompatible at pair {p}")
    sd = ExchangeSet(tuple(fp ^ gp))
    return ExchangeAutomorphism(sd, _swap_perm(len(f.perm), sd))


def compose_maps(f: Sequence[int], g: Sequence[int]) -> np.ndarray:
    """Vertex map ``f o g`` as an array (apply ``g`` first)."""
    f = np.asarray(f, dtype=np.int64)
    g = np.asarray(g, dtype=np.int64)
    return f[g]


def invert_map(f: Sequence[int]) -> np.ndarray:
    f = np.asarray(f, dtype=np.int64)
    inv = np.empty_like(f)
    inv[f] = np.arange(len(f), dtype=np.int64)
    return inv


class BooleanSubgroup:
    """The group of exchanges supported on subsets of a fixed family ``E``.

    Elements are indexed by bit masks over the pairs of ``E``; multiplication
    is symmetric difference of masks.
    """

    def __init__(self, K: FlagComplex, E: ExchangeSet | Iterable[Sequence[int]]):
        if not isinstance(E, ExchangeSet):
            E = ExchangeSet.of(E)
        for a, b in E:
            if not is_exchangeable(K, a, b):
                raise ExchangeError(f"pair ({a}, {b}) is not exchangeable")
        self.K = K
        self.E = E

    @property
    def order(self) -> int:
        return 1 << len(self.E)

    def element(self, mask: int) -> ExchangeAutomorphism:
        if not 0 <= mask < self.order:
            raise ExchangeError(f"mask {mask} out of range")
        F = self.E.subset(mask)
        return ExchangeAutomorphism(F, _swap_perm(len(self.K), F))

    @staticmethod
    def multiply(mask_f: int, mask_g: int) -> int:
        return mask_f ^ mask_g

    def elements(self) -> Iterator[ExchangeAutomorphism]:
        for mask in range(self.order):
            yield self.element(mask)

    def permutations(self) -> list[tuple[int, ...]]:
        return [e.perm for e in self.elements()]


def boolean_subgroup(K: FlagComplex, E) -> BooleanSubgroup:
    return BooleanSubgroup(K, E)


def conjugate_exchange(K: FlagComplex, phi: Sequence[int], F: ExchangeSet) -> ExchangeSet:
    """Image family ``phi(F)``; checks ``phi o Phi_F o phi^-1 == Phi_phi(F)``."""
    perm = as_permutation(phi, len(K))
    if not K.is_automorphism(perm):
        raise ExchangeError("conjugating map is not an automorphism")
    G = ExchangeSet(tuple((int(perm[a]), int(perm[b])) for a, b in F))
    lhs = compose_maps(compose_maps(perm, _swap_perm(len(K), F)), invert_map(perm))
    if tuple(lhs.tolist()) != _swap_perm(len(K), G):
        raise ExchangeError("conjugation law failed")
    return G


def exchangeable_pairs(K: FlagComplex) -> list[tuple[int, int]]:
    """All exchangeable unordered pairs, sorted."""
    n = len(K)
    if n < 2:
        return []
    # Vertices with equal links or equal stars fall in the same bucket.
    by_link: dict[frozenset, list[int]] = {}
    by_star: dict[frozenset, list[int]] = {}
    for v in range(n):
        by_link.setdefault(K.link0(v), []).append(v)
        by_star.setdefault(K.star0(v), []).append(v)
    out = set()
    for bucket in by_link.values():
        for a, b in combinations(bucket, 2):
            if not K.adjacent(a, b):
                out.add((a, b))
    for bucket in by_star.values():
        for a, b in combinations(bucket, 2):
            if K.adjacent(a, b):
                out.add((a, b))
    return sorted(out)
