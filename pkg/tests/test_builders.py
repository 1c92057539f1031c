import json
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcomplex.builders import (
    BundleError,
    ComplexBundle,
    ExcludedSurface,
    biperipheral_edge_set,
    build,
    build_C,
    build_D,
    build_D2,
    d2_ids,
    enumerate_curves,
    enumerate_domains,
    fibers,
    project,
    push_forward,
    symmetry_map,
)
from dcomplex.domains import DomainClass, SurfaceModel
from dcomplex.exchange import generalized_exchange
from dcomplex.triangulation import UnsupportedSurface


def connected(K):
    if len(K) == 0:
        return True
    seen, todo = {0}, deque([0])
    while todo:
        v = todo.popleft()
        for u in K.neighbors(v):
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return len(seen) == len(K)


# enumeration


def test_enumerate_curves_errors_and_empty():
    with pytest.raises(UnsupportedSurface):
        enumerate_curves((0, 3), 2)
    assert enumerate_curves((0, 5), 0) == []


def test_enumerate_domains_five_holed_sphere(model05):
    doms = enumerate_domains((0, 5), 2, model05)
    bip = [d for d in doms if d.is_biperipheral]
    assert len(bip) >= 10
    # one biperipheral pants over every unordered pair of holes
    assert {d.holes for d in bip} == {(i, j) for i in range(1, 6) for j in range(i + 1, 6)}
    cores = {d.core for d in doms if d.annular}
    assert cores == set(model05.curves(2))
    assert len(doms) == 102 and len(bip) == 30


def test_enumerate_domains_one_holed_torus(model11):
    for W in (1, 2, 3):
        doms = enumerate_domains((1, 1), W, model11)
        pants = [d for d in doms if not d.annular]
        # each curve's complement is a monoperipheral pants with both sides on it
        assert len(pants) == len(model11.curves(W))
        assert all(d.is_monoperipheral and d.sides == (0, 0) for d in pants)


# curve complexes


@pytest.mark.parametrize("sig, W", [((1, 1), 4), ((0, 4), 3)])
def test_curve_complex_has_no_edges_on_slope_surfaces(sig, W):
    C = build_C(sig, W)
    assert len(C) > 0 and C.complex.edges == ()


def test_curve_complex_five_holed_sphere_connected(c05):
    assert len(c05) == 30 and connected(c05.complex)
    assert all(len(c05.complex.link0(v)) > 0 for v in c05.complex.vertices)


# domain complexes


def test_d2_equals_d_when_few_holes(d11):
    D2 = build_D2((1, 1), 3, model=d11.model)
    assert D2.labels == d11.labels and D2.complex == d11.complex
    M = SurfaceModel(2, 1)
    a, b = build_D((2, 1), 1, model=M), build_D2((2, 1), 1, model=M)
    assert a.labels == b.labels and a.complex.edges == b.complex.edges


def test_empty_truncation():
    D = build_D((0, 5), 0)
    assert len(D) == 0 and D.complex.edges == ()
    assert len(build_D2((0, 5), 0)) == 0


def test_biperipheral_edges_present(d05):
    assert d05.biperipheral
    for p, a in d05.biperipheral:
        assert d05.complex.adjacent(p, a)
        assert d05.labels[a] == DomainClass.annulus(d05.labels[p].boundary[0])


def test_fiber_closure(d05, d12):
    for D in (d05, d12):
        M = D.model
        index = D.index()
        for d in D.labels:
            if d.is_biperipheral:
                assert DomainClass.annulus(d.boundary[0]) in index
            if d.annular:
                for piece in M.domains_of_system([d.core]):
                    if piece.is_biperipheral:
                        assert piece in index


def test_biperipheral_edge_set(d05, d11, d04):
    E = biperipheral_edge_set(d05)
    assert len(E) == len(d05.biperipheral) == 30
    assert len(E.vertices()) == 2 * len(E)
    assert len(biperipheral_edge_set(d11)) == 0
    with pytest.raises(ExcludedSurface):
        biperipheral_edge_set(d04)
    with pytest.raises(BundleError):
        biperipheral_edge_set(build_C((0, 5), 1))


def test_projection_five_holed_sphere(d05):
    pi = project(d05)
    fib = fibers(d05)
    shapes = sorted({len(f) for f in fib.values()})
    assert shapes == [1, 2]
    for img, f in fib.items():
        assert pi[img] == img and not d05.labels[img].is_biperipheral
        if len(f) == 2:
            assert d05.complex.is_simplex(f)
            assert sorted(f) == sorted(next(p for p in d05.biperipheral if img in p))
    assert sorted(fib) == d2_ids(d05)


def test_projection_four_holed_sphere_triangles(d04):
    fib = fibers(d04)
    tri = [f for f in fib.values() if len(f) == 3]
    assert tri and len(tri) == len([d for d in d04.labels if d.annular])
    for f in tri:
        assert d04.complex.is_simplex(f)
        kinds = sorted(d04.labels[v].kind() for v in f)
        assert kinds == ["annulus", "pants-2", "pants-2"]
    project(d04)


def test_push_forward(d05):
    n2 = len(d2_ids(d05))
    assert push_forward(d05, list(range(len(d05)))) == list(range(n2))
    E = biperipheral_edge_set(d05)
    phi = generalized_exchange(d05.complex, E).perm
    assert push_forward(d05, phi) == list(range(n2))
    bad = list(range(len(d05)))
    bad[0], bad[1] = 1, 0
    with pytest.raises(BundleError):
        push_forward(d05, bad)


def test_push_forward_of_symmetries(d05, d05_d2):
    M = d05.model
    keep = d2_ids(d05)
    for sym in M.symmetries():
        phi = symmetry_map(d05, sym)
        assert d05.complex.is_automorphism(phi)
        star = push_forward(d05, phi)
        # direct relabeling of the D² vertices
        direct = symmetry_map(d05_d2, sym)
        assert star == direct
        assert d05_d2.complex.is_automorphism(star)
        assert len(star) == len(keep)


def test_symmetry_leaving_truncation_is_reported():
    M = SurfaceModel(1, 2)
    D = build_D((1, 2), 1, model=M)
    for sym in M.symmetries():
        try:
            phi = symmetry_map(D, sym)
        except BundleError:
            continue
        assert D.complex.is_automorphism(phi)


# serialization


@pytest.mark.parametrize("kind", ["C", "D", "D2"])
def test_json_roundtrip_and_determinism(kind, model05):
    a = build(kind, (0, 5), 2, model=model05)
    b = build(kind, (0, 5), 2, threads=3)
    assert a.dumps() == b.dumps()
    back = ComplexBundle.loads(a.dumps())
    assert back.dumps() == a.dumps()
    assert back.labels == a.labels


def test_strict_parse(d05):
    good = json.loads(d05.dumps())
    for mutate in (
        lambda d: d.update(schema_version=7),
        lambda d: d.update(kind="E"),
        lambda d: d["vertices"][0].update(label="nonsense"),
        lambda d: d["vertices"][0].update(id=5),
        lambda d: d.update(projection=d["projection"][:-1]),
        lambda d: d["triangulation"].update(gluings=d["triangulation"]["gluings"][::-1][:-2]),
        lambda d: d.pop("edges"),
        lambda d: d.update(edges=[[0, 0]]),
    ):
        bad = json.loads(json.dumps(good))
        mutate(bad)
        with pytest.raises(BundleError):
            ComplexBundle.from_json(bad)
    with pytest.raises(BundleError):
        ComplexBundle.loads("[1, 2]")
    with pytest.raises(BundleError):
        ComplexBundle.loads("{")


def test_unknown_kind():
    with pytest.raises(ValueError):
        build("X", (0, 5), 1)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_projection_is_simplicial_on_sampled_simplices(d05, data):
    pi = d05.projection
    v = data.draw(st.integers(0, len(d05) - 1))
    nbrs = sorted(d05.complex.link0(v))
    extra = data.draw(st.lists(st.sampled_from(nbrs), max_size=3, unique=True)) if nbrs else []
    s = [v] + [u for u in extra if all(d05.complex.adjacent(u, w) for w in extra if w != u)]
    if d05.complex.is_simplex(s):
        assert d05.complex.is_simplex({pi[u] for u in s})
