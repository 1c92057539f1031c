"""Finite truncations of C(S), D(S) and D²(S).

The truncation parameter ``W`` bounds the largest edge weight of the summed
boundary coordinates of a domain (of the core, for an annulus).  A
biperipheral pants and the annulus over its boundary share the same
boundary sum, so every truncation is closed under the fibers of the
projection to D²; the builder still checks this.
"""

from __future__ import annotations

import json
import os
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .curves import CurveClass
from .domains import DomainClass, DomainError, SurfaceModel
from .exchange import ExchangeSet
from .flag import FlagComplex
from .triangulation import SCHEMA_VERSION, Triangulation, UnsupportedSurface

KINDS = ("C", "D", "D2")


class BundleError(ValueError):
    """A malformed or inconsistent bundle file."""


class ExcludedSurface(ValueError):
    """The operation is not defined on this surface (the four-holed sphere)."""


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("DCOMPLEX_THREADS", "1")))
    except ValueError:
        return 1


def _blocks(n: int, threads: int) -> list[range]:
    step = max(1, -(-n // max(1, threads)))
    return [range(i, min(n, i + step)) for i in range(0, n, step)]


def _pairwise(n: int, pred, threads: int) -> list[tuple[int, int]]:
    """Pairs ``i < j`` with ``pred(i, j)``, row blocks in parallel, merged in order."""

    def rows(block: range) -> list[tuple[int, int]]:
        return [(i, j) for i in block for j in range(i + 1, n) if pred(i, j)]

    blocks = _blocks(n, threads)
    if threads <= 1 or len(blocks) <= 1:
        parts = [rows(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(rows, blocks))
    return [p for part in parts for p in part]


@dataclass
class ComplexBundle:
    """A built truncation with its labels.

    For kind ``D``: ``biperipheral`` lists (pants, annulus) vertex pairs and
    ``projection[v]`` is the D-vertex id of π(v); the image of the
    projection is the D² vertex set.
    """

    kind: str
    surface: tuple[int, int]
    W: int
    complex: FlagComplex
    labels: list
    biperipheral: list[tuple[int, int]] = field(default_factory=list)
    projection: list[int] = field(default_factory=list)
    model: SurfaceModel | None = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.complex)

    @property
    def excluded_s04(self) -> bool:
        return tuple(self.surface) == (0, 4)

    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def get_model(self) -> SurfaceModel:
        if self.model is None:
            self.model = SurfaceModel(*self.surface)
        return self.model

    def to_json(self) -> dict:
        data = {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "surface": list(self.surface),
            "W": self.W,
            "triangulation": self.get_model().tri.to_json(),
            "vertices": [
                {"id": i, "label": self.complex.labels[i], "class": lab.to_json()}
                for i, lab in enumerate(self.labels)
            ],
            "edges": [list(e) for e in self.complex.edges],
        }
        if self.kind == "D":
            data["biperipheral_edges"] = [list(p) for p in self.biperipheral]
            data["projection"] = list(self.projection)
            data["excluded"] = self.excluded_s04
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> "ComplexBundle":
        """Strict parse; the stored triangulation must be the canonical one."""
        try:
            if data["schema_version"] != SCHEMA_VERSION:
                raise BundleError(f"unsupported schema version {data['schema_version']!r}")
            kind = data["kind"]
            if kind not in KINDS:
                raise BundleError(f"unknown bundle kind {kind!r}")
            g, b = (int(v) for v in data["surface"])
            W = int(data["W"])
            tri = Triangulation.from_json(data["triangulation"])
            model = SurfaceModel(g, b)
            if tri.to_json() != model.tri.to_json():
                raise BundleError("bundle triangulation differs from the canonical one")
            verts = data["vertices"]
            if [int(v["id"]) for v in verts] != list(range(len(verts))):
                raise BundleError("vertex ids must be 0..n-1 in order")
            if kind == "C":
                labels = [CurveClass.make(v["class"]["coords"]) for v in verts]
            else:
                labels = [DomainClass.from_json(v["class"]) for v in verts]
            cx = FlagComplex(len(verts), [(int(a), int(c)) for a, c in data["edges"]],
                             [str(v["label"]) for v in verts])
            bip = [(int(p), int(a)) for p, a in data.get("biperipheral_edges", [])]
            proj = [int(v) for v in data.get("projection", [])]
        except BundleError:
            raise
        except (KeyError, TypeError, ValueError, DomainError) as exc:
            raise BundleError(f"malformed bundle: {exc}") from exc
        bundle = cls(kind, (g, b), W, cx, labels, bip, proj, model)
        if kind == "D" and len(proj) != len(labels):
            raise BundleError("projection length does not match the vertex count")
        if [lab.label() for lab in labels] != list(cx.labels):
            raise BundleError("vertex labels do not match their classes")
        return bundle

    @classmethod
    def loads(cls, text: str) -> "ComplexBundle":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise BundleError(f"not JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise BundleError("bundle must be a JSON object")
        return cls.from_json(data)


def _model(sig: Sequence[int], model: SurfaceModel | None) -> SurfaceModel:
    g, b = sig
    if model is not None:
        if model.signature != (g, b):
            raise UnsupportedSurface("model does not match the requested surface")
        return model
    return SurfaceModel(g, b)


def enumerate_curves(sig: Sequence[int], W: int, model: SurfaceModel | None = None) -> list[CurveClass]:
    """Essential curves with every coordinate at most ``W``, sorted."""
    return list(_model(sig, model).curves(W))


def enumerate_domains(sig: Sequence[int], W: int, model: SurfaceModel | None = None) -> list[DomainClass]:
    """Annuli over curves of weight ``<= W`` and pieces of boundary systems whose summed weight is ``<= W``."""
    model = _model(sig, model)
    curves = model.curves(W)
    if not curves:
        return []
    mat = model.prime_disjoint(curves)
    coords = np.array([c.coords for c in curves], dtype=np.int64)
    found: set[DomainClass] = {DomainClass.annulus(c) for c in curves}
    n = len(curves)
    # Depth-first over cliques of the disjointness graph, pruned by the weight of the sum.
    stack: list[tuple[tuple[int, ...], np.ndarray]] = [((i,), coords[i]) for i in reversed(range(n))]
    while stack:
        clique, total = stack.pop()
        found.update(model.domains_of_system([curves[i] for i in clique]))
        last = clique[-1]
        for j in reversed(range(last + 1, n)):
            if not all(mat[i, j] for i in clique):
                continue
            s = total + coords[j]
            if s.max() <= W:
                stack.append((clique + (j,), s))
    return sorted(found)


def build_C(sig: Sequence[int], W: int, model: SurfaceModel | None = None, threads: int | None = None) -> ComplexBundle:
    """Curve complex truncation: an edge joins distinct disjoint curves."""
    model = _model(sig, model)
    curves = model.curves(W)
    mat = model.prime_disjoint(curves)
    edges = [(i, j) for i in range(len(curves)) for j in range(i + 1, len(curves)) if mat[i, j]]
    cx = FlagComplex(len(curves), edges, [c.label() for c in curves])
    return ComplexBundle("C", model.signature, W, cx, list(curves), model=model)


def _domain_complex(model: SurfaceModel, doms: list[DomainClass], threads: int) -> FlagComplex:
    edges = _pairwise(len(doms), lambda i, j: model.domains_disjoint(doms[i], doms[j]), threads)
    return FlagComplex(len(doms), edges, [d.label() for d in doms])


def biperipheral_pairs(doms: Sequence[DomainClass]) -> list[tuple[int, int]]:
    """``(pants id, annulus id)`` for each biperipheral pants and its boundary annulus."""
    index = {d: i for i, d in enumerate(doms)}
    out = []
    for i, d in enumerate(doms):
        if d.is_biperipheral:
            a = index.get(DomainClass.annulus(d.boundary[0]))
            if a is None:
                raise BundleError(f"truncation is not fiber-closed at {d.label()}")
            out.append((i, a))
    return out


def build_D(sig: Sequence[int], W: int, model: SurfaceModel | None = None, threads: int | None = None) -> ComplexBundle:
    """Complex-of-domains truncation with its biperipheral pairs and projection."""
    model = _model(sig, model)
    threads = threads or default_threads()
    doms = enumerate_domains(model.signature, W, model)
    cx = _domain_complex(model, doms, threads)
    bip = biperipheral_pairs(doms)
    proj = list(range(len(doms)))
    for p, a in bip:
        proj[p] = a
    _check_fiber_closed(model, doms, bip)
    return ComplexBundle("D", model.signature, W, cx, doms, bip, proj, model)


def _check_fiber_closed(model: SurfaceModel, doms: Sequence[DomainClass], bip: Sequence[tuple[int, int]]) -> None:
    present = set(doms)
    for d in doms:
        if d.annular:
            for piece in model.domains_of_system([d.core]):
                if piece.is_biperipheral and piece not in present:
                    raise BundleError(f"truncation is not fiber-closed at {d.label()}")


def build_D2(sig: Sequence[int], W: int, model: SurfaceModel | None = None, threads: int | None = None) -> ComplexBundle:
    """Induced subcomplex of D on vertices that are not biperipheral pants."""
    return d2_of(build_D(sig, W, model, threads))


def d2_of(D: ComplexBundle) -> ComplexBundle:
    _require(D, "D")
    keep = [i for i, d in enumerate(D.labels) if not d.is_biperipheral]
    sub, _ = D.complex.induced(keep)
    return ComplexBundle("D2", D.surface, D.W, sub, [D.labels[i] for i in keep], model=D.model)


def d2_ids(D: ComplexBundle) -> list[int]:
    """D-vertex ids of the D² vertices, in D² id order."""
    _require(D, "D")
    return [i for i, d in enumerate(D.labels) if not d.is_biperipheral]


def _require(bundle: ComplexBundle, kind: str) -> None:
    if bundle.kind != kind:
        raise BundleError(f"expected a {kind} bundle, got {bundle.kind}")


def biperipheral_edge_set(D: ComplexBundle) -> ExchangeSet:
    """The biperipheral edges as a vertex-disjoint family.

    Raises ``ExcludedSurface`` on the four-holed sphere, where pairs share
    their annulus vertex.
    """
    _require(D, "D")
    if D.excluded_s04:
        raise ExcludedSurface("biperipheral edges share vertices on S_(0,4)")
    return ExchangeSet.of(D.biperipheral)


def fibers(D: ComplexBundle) -> dict[int, list[int]]:
    """π-fibers keyed by D-vertex id of the image."""
    _require(D, "D")
    out: dict[int, list[int]] = {}
    for v, img in enumerate(D.projection):
        out.setdefault(img, []).append(v)
    return out


def project(D: ComplexBundle) -> list[int]:
    """π as D-vertex ids; checks idempotence and that it is simplicial."""
    _require(D, "D")
    pi = D.projection
    if any(pi[pi[v]] != pi[v] for v in range(len(pi))):
        raise BundleError("projection is not idempotent")
    adj = D.complex.adjacency()
    for a, b in D.complex.edges:
        u, v = pi[a], pi[b]
        if u != v and not adj[u, v]:
            raise BundleError(f"projection is not simplicial on edge ({a}, {b})")
    return list(pi)


def push_forward(D: ComplexBundle, phi: Sequence[int]) -> list[int]:
    """The induced map on D² (in D² ids) with ``phi_* o π = π o phi``.

    Raises ``BundleError`` if ``phi`` does not carry fibers to fibers or
    biperipheral edges to biperipheral edges.
    """
    _require(D, "D")
    phi = [int(v) for v in phi]
    if not D.complex.is_automorphism(phi):
        raise BundleError("map is not an automorphism of D")
    bip = {frozenset(p) for p in D.biperipheral}
    if {frozenset((phi[a], phi[b])) for a, b in D.biperipheral} != bip:
        raise BundleError("map does not preserve the biperipheral edges")
    pi = D.projection
    image: dict[int, int] = {}
    for v in range(len(phi)):
        u, w = pi[v], pi[phi[v]]
        if image.setdefault(u, w) != w:
            raise BundleError("map does not carry fibers to fibers")
    keep = d2_ids(D)
    pos = {v: i for i, v in enumerate(keep)}
    return [pos[image[v]] for v in keep]


def symmetry_map(bundle: ComplexBundle, sym) -> list[int]:
    """Vertex map induced by a triangulation symmetry; raises if it leaves the truncation."""
    model = bundle.get_model()
    index = bundle.index()
    out = []
    for lab in bundle.labels:
        img = model.map_curve(sym, lab) if bundle.kind == "C" else model.map_domain(sym, lab)
        if img not in index:
            raise BundleError(f"symmetry image of {lab.label()} is outside the truncation")
        out.append(index[img])
    return out


def build(kind: str, sig: Sequence[int], W: int, model: SurfaceModel | None = None,
          threads: int | None = None) -> ComplexBundle:
    builders = {"C": build_C, "D": build_D, "D2": build_D2}
    if kind not in builders:
        raise ValueError(f"unknown kind {kind!r}")
    return builders[kind](sig, W, model, threads)
