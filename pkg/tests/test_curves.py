from collections import Counter
from itertools import combinations
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcomplex.curves import CurveClass, InadmissibleWeights, MultiCurve, Surface
from dcomplex.triangulation import standard_triangulation


def surface(g, b):
    return Surface(standard_triangulation(g, b))


def edge_pair_curve(S, e):
    """Boundary of a neighborhood of edge ``e`` and its two end punctures.

    Each other edge is crossed once per end it has at those punctures.
    """
    ends = S.tri.edge_ends
    pair = {int(ends[e, 0]), int(ends[e, 1])}
    w = [int(ends[f, 0] in pair) + int(ends[f, 1] in pair) for f in range(S.n_edges)]
    w[e] = 0
    return S.curve(w)


def slope(coords):
    """Slope (p, q) of a curve with triangle weights (x, y, z) = (|p|, |q|, |p - q|)."""
    x, y, z = coords
    return (x, -y) if z == x + y else (x, y)


def slope_weights(coords, pairs):
    return tuple(coords[a] for a, _ in pairs)


def opposite_pairs(S):
    ends = [set(map(int, e)) for e in S.tri.edge_ends]
    pairs = [(a, b) for a, b in combinations(range(S.n_edges), 2) if not ends[a] & ends[b]]
    assert len(pairs) == 3
    return pairs


def primitive_slopes(W):
    out = set()
    for p in range(0, W + 1):
        for q in range(-W, W + 1):
            if gcd(p, q) != 1 or (p == 0 and q < 0):
                continue
            if max(abs(p), abs(q), abs(p - q)) <= W:
                out.add((p, q))
    return out


# slope-surface oracle: S_{1,1} and S_{0,4}


@pytest.mark.parametrize("W", [1, 2, 3, 4])
def test_one_holed_torus_matches_slopes(W):
    S = surface(1, 1)
    cs = S.enumerate_curves(W)
    assert len(cs) == len(primitive_slopes(W))
    sl = [slope(c.coords) for c in cs]
    for (a, (p, q)), (b, (r, s)) in combinations(zip(cs, sl), 2):
        assert S.disjoint(a, b) == (abs(p * s - q * r) == 0)
    assert all(S.disjoint(c, c) for c in cs)


@pytest.mark.parametrize("W", [1, 2, 3])
def test_four_holed_sphere_matches_slopes(W):
    S = surface(0, 4)
    pairs = opposite_pairs(S)
    cs = S.enumerate_curves(W)
    for c in cs:
        assert all(c.coords[a] == c.coords[b] for a, b in pairs)
    assert len(cs) == len(primitive_slopes(W))
    sl = [slope(slope_weights(c.coords, pairs)) for c in cs]
    for (a, (p, q)), (b, (r, s)) in combinations(zip(cs, sl), 2):
        assert S.disjoint(a, b) == (2 * abs(p * s - q * r) == 0)


def test_enumeration_small_counts():
    # frozen from the enumeration run; see the ledger
    assert len(surface(0, 5).enumerate_curves(2)) == 30
    assert len(surface(1, 2).enumerate_curves(2)) == 21
    assert len(surface(2, 1).enumerate_curves(1)) == 6


@pytest.mark.parametrize("W", [0, -3])
def test_enumeration_empty_at_nonpositive_bound(W):
    assert surface(0, 5).enumerate_curves(W) == []


@pytest.mark.parametrize("g, b, W", [(0, 5, 2), (1, 2, 2), (1, 1, 3), (0, 4, 3), (2, 1, 1)])
def test_enumerated_curves_are_connected_essential_and_bounded(g, b, W):
    S = surface(g, b)
    cs = S.enumerate_curves(W)
    assert cs == sorted(set(cs))
    for c in cs:
        assert S.curve(c.coords) == c
        assert S.is_essential(c) and c.max_weight <= W


# trace


def test_trace_examples():
    S = surface(0, 5)
    assert len(S.trace([0] * S.n_edges)) == 0
    c = S.enumerate_curves(1)[0]
    assert S.trace(c.coords) == MultiCurve(((c, 1),))
    double = S.trace([2 * v for v in c.coords])
    assert double.multiplicity(c) == 2 and len(double) == 2


def test_trace_rejects_inadmissible():
    S = surface(1, 1)
    with pytest.raises(InadmissibleWeights):
        S.trace([1, 0, 0])
    with pytest.raises(InadmissibleWeights):
        S.trace([1, 1])
    assert not S.admissible([2, 0, 0])
    with pytest.raises(InadmissibleWeights):
        S.curve([2, 2, 0])


# essential curves


def test_vertex_linking_curves():
    S = surface(0, 4)
    for h in range(1, 5):
        c = S.linking_curve(h)
        assert not S.is_essential(c)
        assert S.curve(c.coords).linked_hole == h
        assert c.to_json()["vertex_linking"] == h


def test_torus_curves_with_full_support_are_essential():
    S = surface(1, 1)
    full = [c for c in S.enumerate_curves(4) if min(c.coords) > 0]
    assert full
    assert all(S.is_essential(c) for c in full)
    # the only non-essential connected class at small weight is the linking curve
    for w in np.ndindex(5, 5, 5):
        if S.admissible(w) and len(S.trace(w)) == 1:
            c = S.curve(w)
            assert c.essential == (c != S.linking_curve(1))


@pytest.mark.parametrize("e", range(9))
def test_hole_pair_curves_on_five_holed_sphere(e):
    S = surface(0, 5)
    c = edge_pair_curve(S, e)
    assert S.is_essential(c)
    ends = sorted(int(v) + 1 for v in S.tri.edge_ends[e])
    pieces = S.cut([c])
    shapes = sorted((p.genus, p.holes, p.sides) for p in pieces)
    rest = tuple(h for h in range(1, 6) if h not in ends)
    assert shapes == sorted([(0, tuple(ends), (0,)), (0, rest, (0,))])
    assert sum(p.chi for p in pieces) == -3


def test_disjoint_examples():
    S = surface(0, 5)
    ends = [set(map(int, e)) for e in S.tri.edge_ends]
    a = edge_pair_curve(S, 0)  # holes {1, 2}
    b = edge_pair_curve(S, 8)  # holes {4, 5}
    assert ends[0] == {0, 1} and ends[8] == {3, 4}
    assert S.disjoint(a, b) and S.disjoint(b, a)
    assert S.disjoint(a, a)
    c = edge_pair_curve(S, 1)  # holes {2, 3} overlaps {1, 2}
    assert not S.disjoint(a, c)
    T = surface(1, 1)
    p01, p10 = T.curve([1, 0, 1]), T.curve([0, 1, 1])
    assert not T.disjoint(p01, p10)
    with pytest.raises(ValueError):
        S.disjoint(a, p01)


# cut


def test_cut_torus_nonseparating():
    S = surface(1, 1)
    c = S.enumerate_curves(1)[0]
    (piece,) = S.cut([c])
    assert (piece.genus, piece.holes, piece.sides, piece.chi) == (0, (1,), (0, 0), -1)


def test_cut_two_holed_torus_separating():
    S = surface(1, 2)
    c = edge_pair_curve(S, 3)
    shapes = sorted((p.genus, p.holes, p.sides) for p in S.cut([c]))
    assert shapes == [(0, (1, 2), (0,)), (1, (), (0,))]


def test_cut_rejects_bad_systems():
    S = surface(0, 5)
    a, c = edge_pair_curve(S, 0), edge_pair_curve(S, 1)
    with pytest.raises(ValueError):
        S.cut([a, c])
    with pytest.raises(ValueError):
        S.cut([a, a])
    with pytest.raises(ValueError):
        S.cut([S.linking_curve(1)])
    (whole,) = S.cut([])
    assert (whole.genus, whole.holes, whole.chi) == (0, (1, 2, 3, 4, 5), -3)


@pytest.mark.parametrize("g, b, W", [(0, 5, 2), (1, 2, 2), (0, 6, 1), (2, 1, 1), (1, 3, 1)])
def test_chi_and_additivity_on_disjoint_pairs(g, b, W):
    S = surface(g, b)
    cs = S.enumerate_curves(W)
    chi = 2 - 2 * g - b
    mat = S.disjoint_matrix(cs)
    checked = 0
    for i, j in combinations(range(len(cs)), 2):
        if not mat[i, j]:
            continue
        a, c = cs[i], cs[j]
        assert mat[j, i] == S.disjoint(c, a)
        w = [x + y for x, y in zip(a.coords, c.coords)]
        assert S.trace(w) == MultiCurve.of(Counter([a, c]))
        pieces = S.cut([a, c])
        assert sum(p.chi for p in pieces) == chi
        for p in pieces:
            assert p.chi == 2 - 2 * p.genus - p.n_boundary
        # every side of a cut curve is used exactly twice
        assert Counter(s for p in pieces for s in p.sides) == Counter({0: 2, 1: 2})
        checked += 1
    assert checked > 0


# distinguishing curves


def test_find_distinguishing_curve():
    T = surface(1, 1)
    a = T.curve([1, 0, 1])
    g = T.find_distinguishing_curve([a], a, 1)
    assert g is not None and not T.disjoint(g, a)
    assert T.find_distinguishing_curve([a], a, 0) is None
    S = surface(0, 5)
    x, y = edge_pair_curve(S, 0), edge_pair_curve(S, 8)
    for alpha, beta in ((x, y), (y, x)):
        g = S.find_distinguishing_curve([x, y], alpha, 2)
        assert g is not None
        assert not S.disjoint(g, alpha) and S.disjoint(g, beta)
    with pytest.raises(ValueError):
        S.find_distinguishing_curve([x], y, 2)


def test_curve_class_ordering_and_json():
    a, b = CurveClass.make([0, 1, 1]), CurveClass.make([1, 1, 0])
    assert a < b and a.label() == "c(0,1,1)"
    assert a.to_json() == {"coords": [0, 1, 1], "essential": True, "vertex_linking": None}


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_disjoint_is_symmetric_and_trace_inverts_sum(data):
    S = surface(0, 5)
    cs = S.enumerate_curves(2)
    a = data.draw(st.sampled_from(cs))
    b = data.draw(st.sampled_from(cs))
    assert S.disjoint(a, b) == S.disjoint(b, a)
    m = data.draw(st.integers(1, 3))
    w = [m * x for x in a.coords]
    assert S.trace(w).multiplicity(a) == m


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_torus_trace_sums_back(w):
    S = surface(1, 1)
    if not S.admissible(w):
        return
    mc = S.trace(w)
    assert mc.coords(3) == tuple(w)
