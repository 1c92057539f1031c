"""Machine checks of the star, annular-link and exchange characterizations.

Each check returns a ``CheckReport``.  Directions whose witnesses provably
lie inside the truncation are reported as ``verified``; universal
directions are bounded scans and report ``no-counterexample-within-bound``.
A pair that looks like a counterexample inside the truncation is first
handed to a witness search over a larger weight bound: a domain outside the
truncation may break the containment, in which case the pair is a
truncation artifact and is listed as such.
"""

from __future__ import annotations

import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .builders import (
    BundleError,
    ComplexBundle,
    biperipheral_edge_set,
    d2_of,
    enumerate_domains,
    push_forward,
    symmetry_map,
)
from .domains import DomainClass, SurfaceModel
from .exchange import ExchangeSet, compose_maps, conjugate_exchange, is_exchangeable

VERIFIED = "verified"
NO_CEX = "no-counterexample-within-bound"
COUNTEREXAMPLE = "counterexample"
SKIPPED = "skipped"

_RANK = {VERIFIED: 0, NO_CEX: 1, SKIPPED: 2, COUNTEREXAMPLE: 3}

SUITES = ("annular", "annlink", "star", "boolean")


@dataclass
class CheckReport:
    """Outcome of one check; ``parts`` hold per-direction results."""

    check: str
    proposition: str
    status: str
    details: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    parts: list["CheckReport"] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != COUNTEREXAMPLE

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "check": self.check,
            "proposition": self.proposition,
            "status": self.status,
            "details": self.details,
            "witnesses": self.witnesses,
        }
        if self.parts:
            out["parts"] = [p.to_json(timing) for p in self.parts]
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def _combine(check: str, proposition: str, parts: list[CheckReport], t0: float) -> CheckReport:
    status = max((p.status for p in parts), key=_RANK.__getitem__) if parts else VERIFIED
    if status == SKIPPED and any(p.status != SKIPPED for p in parts):
        status = max((p.status for p in parts if p.status != SKIPPED), key=_RANK.__getitem__)
    return CheckReport(check, proposition, status, parts=parts, seconds=time.perf_counter() - t0)


def _skip(check: str, proposition: str, reason: str) -> CheckReport:
    return CheckReport(check, proposition, SKIPPED, details={"reason": reason})


def _vertex(bundle: ComplexBundle, v: int) -> dict:
    return {"id": v, "label": bundle.complex.labels[v], "class": bundle.labels[v].to_json()}


def star_matrix(bundle: ComplexBundle) -> np.ndarray:
    """``C[x, y]`` is True iff ``star0(x)`` is contained in ``star0(y)``."""
    n = len(bundle)
    S = bundle.complex.adjacency().astype(np.int32) + np.eye(n, dtype=np.int32)
    return (S @ (1 - S).T) == 0


def _nested_matrix(member: np.ndarray) -> np.ndarray:
    M = member.astype(np.int32)
    return (M @ (1 - M).T) == 0


# configuration classifiers


def star_case(model: SurfaceModel, X: DomainClass, Y: DomainClass) -> str | None:
    """Which of the seven equal-star configurations ``(X, Y)`` realizes, if any."""
    if X == Y or not model.domains_disjoint(X, Y):
        return None
    cods = model.codomains(X, Y)
    n = len(cods)
    join = sum(1 for c in cods if c.joins("X", "Y"))
    sig = model.signature
    if X.is_biperipheral and Y.annular and n == 2 and join == 1:
        return "a"
    if Y.is_biperipheral and X.annular and n == 2 and join == 1:
        return "b"
    if sig == (0, 4) and X.is_biperipheral and Y.is_biperipheral and n == 1 and join == 1:
        return "c"
    if sig == (1, 2) and X.is_monoperipheral and Y.is_monoperipheral and n == 2 and join == 2:
        return "d"
    if sig == (2, 0) and X.is_pants and Y.is_pants and n == 3 and join == 3:
        return "e"
    if sig == (1, 1) and X.is_monoperipheral and Y.annular and n == 2 and join == 2:
        return "f"
    if sig == (1, 1) and Y.is_monoperipheral and X.annular and n == 2 and join == 2:
        return "g"
    return None


def nested_case(model: SurfaceModel, X: DomainClass, Y: DomainClass) -> str | None:
    """Which of the five nested-star configurations ``(X, Y)`` realizes, if any."""
    if X == Y or not model.domains_disjoint(X, Y):
        return None
    if not (Y.annular or Y.is_pants):
        return None
    join = model.n_joining(X, Y)
    if Y.annular and not X.annular:
        return {1: "a", 2: "b"}.get(join)
    if Y.is_biperipheral and join == 1:
        return "c"
    if Y.is_monoperipheral and join == 2:
        return "d"
    if Y.is_nonperipheral and join == 3:
        return "e"
    return None


def ann3_case(model: SurfaceModel, X: DomainClass, Y: DomainClass) -> str | None:
    if X == Y or not model.domains_disjoint(X, Y):
        return None
    cods = model.codomains(X, Y)
    join = sum(1 for c in cods if c.joins("X", "Y"))
    if model.signature == (1, 2) and X.is_monoperipheral and Y.is_monoperipheral and len(cods) == 2 and join == 2:
        return "a"
    if model.signature == (2, 0) and X.is_pants and Y.is_pants and len(cods) == 3 and join == 3:
        return "b"
    return None


def nestedann3_config(model: SurfaceModel, X: DomainClass, Y: DomainClass) -> bool:
    if not (X.annular and Y.is_biperipheral) or not model.domains_disjoint(X, Y):
        return False
    cods = model.codomains(X, Y)
    return len(cods) == 2 and sum(1 for c in cods if c.joins("X", "Y")) == 1


def nestedann4_config(model: SurfaceModel, X: DomainClass, Y: DomainClass) -> bool:
    """``Y`` is a pants each of whose essential boundary circles is joined to ``X`` by an annulus."""
    if not Y.is_pants or X == Y or not model.domains_disjoint(X, Y):
        return False
    return model.n_joining(X, Y) == Y.n_essential


# witness search


class WitnessSearch:
    """Domains beyond the truncation used to break spurious containments.

    Annuli are tried first, over curves of weight ``W + 2``, ``W + 4``, ...
    up to ``max_bound``; then non-annular domains of boundary weight at
    most ``domain_bound``.
    """

    def __init__(self, bundle: ComplexBundle, max_bound: int | None = None, domain_bound: int | None = None,
                 allow: Callable[[DomainClass], bool] | None = None):
        self.model = bundle.get_model()
        self.sig = bundle.surface
        W = self.W = bundle.W
        self.max_bound = max_bound if max_bound is not None else 2 * W + 2
        self.levels = list(range(W + 2, self.max_bound + 1, 2)) or [self.max_bound]
        if self.levels[-1] != self.max_bound:
            self.levels.append(self.max_bound)
        self.domain_bound = domain_bound if domain_bound is not None else W + 1
        self.allow = allow or (lambda d: True)
        self._annuli: dict[int, list[DomainClass]] = {}
        self._domains: list[DomainClass] | None = None

    def annuli(self, level: int) -> list[DomainClass]:
        """Annuli whose core first appears at this bound."""
        if level not in self._annuli:
            prev = max((b for b in self.levels if b < level), default=self.W)
            self._annuli[level] = [DomainClass.annulus(c) for c in self.model.curves(level) if c.max_weight > prev]
        return self._annuli[level]

    def domains(self) -> list[DomainClass]:
        if self._domains is None:
            doms = enumerate_domains(self.sig, self.domain_bound, self.model)
            self._domains = [d for d in doms if not d.annular and self.allow(d)]
        return self._domains

    def find(self, good: Callable[[DomainClass], bool], annular_only: bool = False) -> DomainClass | None:
        for level in self.levels:
            for z in self.annuli(level):
                if self.allow(z) and good(z):
                    return z
        if annular_only:
            return None
        for z in self.domains():
            if good(z):
                return z
        return None

    def star_breaker(self, X: DomainClass, Y: DomainClass, annular_only: bool = False) -> DomainClass | None:
        """A domain in ``St(X)`` but not in ``St(Y)``."""
        m = self.model
        return self.find(lambda z: z != X and z != Y and m.domains_disjoint(z, X) and not m.domains_disjoint(z, Y),
                         annular_only)

    def ann_breaker(self, X: DomainClass, Y: DomainClass) -> DomainClass | None:
        """An annulus in ``Ann(X)`` but not in ``Ann(Y)``."""
        m = self.model
        return self.find(lambda z: z != X and m.domains_disjoint(z, X) and (z == Y or not m.domains_disjoint(z, Y)),
                         annular_only=True)


def _scan(bundle, pairs, classify, breaker, check, proposition, key="case"):
    """Universal-direction scan: classify each pair, try to break the unclassified ones."""
    t0 = time.perf_counter()
    counts: dict[str, int] = {}
    artifacts, cex = [], []
    for x, y in pairs:
        X, Y = bundle.labels[x], bundle.labels[y]
        case = classify(X, Y)
        if case is not None:
            counts[case] = counts.get(case, 0) + 1
            continue
        z = breaker(X, Y)
        if z is None:
            cex.append({"x": _vertex(bundle, x), "y": _vertex(bundle, y), "note": "no listed configuration and no witness found"})
        else:
            artifacts.append({"x": x, "y": y, "witness": z.to_json()})
    details = {"pairs": len(pairs), key + "s": dict(sorted(counts.items())), "truncation_artifacts": len(artifacts)}
    status = COUNTEREXAMPLE if cex else NO_CEX
    return CheckReport(check, proposition, status, details, cex + artifacts, seconds=time.perf_counter() - t0)


# checks


def check_annular_characterization(bundle: ComplexBundle, witness_bound: int | None = None) -> CheckReport:
    """Annular vertices of D² are exactly those whose star lies in no other star."""
    t0 = time.perf_counter()
    prop = "D2annuli"
    if bundle.kind == "D":
        bundle = d2_of(bundle)
    if bundle.kind != "D2":
        raise BundleError("the annular characterization needs a D or D2 bundle")
    if tuple(bundle.surface) == (1, 1):
        return _skip("annular", prop, "torus with one hole")
    C = star_matrix(bundle)
    n = len(bundle)
    index = bundle.index()
    # (2) => (1): a non-annular vertex has its star inside the star of a boundary annulus.
    fails, used = [], 0
    for x in range(n):
        X = bundle.labels[x]
        if X.annular:
            continue
        ys = [index.get(DomainClass.annulus(c)) for c in X.boundary]
        ys = [y for y in ys if y is not None]
        used += 1
        if not any(C[x, y] for y in ys):
            fails.append({"x": _vertex(bundle, x), "note": "no boundary annulus contains its star"})
    exact = CheckReport("annular.nonannular-witness", prop, COUNTEREXAMPLE if fails else VERIFIED,
                        {"non_annular_vertices": used}, fails)
    # (1) => (2): no annular vertex has its star inside another star.
    search = WitnessSearch(bundle, witness_bound, allow=lambda d: not d.is_biperipheral)
    pairs = [(x, y) for x in range(n) if bundle.labels[x].annular for y in range(n) if y != x and C[x, y]]
    scan = _scan(bundle, pairs, lambda X, Y: None, search.star_breaker, "annular.annular-maximal", prop)
    annular = sum(1 for d in bundle.labels if d.annular)
    touched = {x for x, _ in pairs}
    # Coverage: annular vertices whose maximality is settled inside the truncation.
    scan.details.update({
        "annular_vertices": annular,
        "settled_inside_truncation": annular - len(touched),
        "settled_by_witness": len(touched - {w["x"]["id"] for w in scan.witnesses if "note" in w}),
        "witness_bound": search.max_bound,
    })
    return _combine("annular", prop, [exact, scan], t0)


def _ann_members(bundle: ComplexBundle) -> np.ndarray:
    adj = bundle.complex.adjacency()
    ann = np.array([d.annular for d in bundle.labels], dtype=np.bool_)
    return adj & ann[None, :]


def check_ann_link_suite(bundle: ComplexBundle, witness_bound: int | None = None) -> CheckReport:
    """Annular-link containments and equalities in D."""
    t0 = time.perf_counter()
    props = "nestedann3,ann2,nestedann4,nestedann5,ann3"
    if bundle.kind != "D":
        raise BundleError("the annular-link suite needs a D bundle")
    g, b = bundle.surface
    if (g, b) == (0, 4) or (g == 1 and b <= 1):
        return _skip("annlink", props, "sphere with four holes or torus with at most one hole")
    model = bundle.get_model()
    n = len(bundle)
    L = _ann_members(bundle)
    N = _nested_matrix(L)
    adj = bundle.complex.adjacency()
    labels = bundle.labels
    search = WitnessSearch(bundle, witness_bound)
    parts = []

    # Constructive directions, exact on the truncation.
    def exact(name, prop, cond, pairs):
        bad = [{"x": _vertex(bundle, x), "y": _vertex(bundle, y)} for x, y in pairs if cond(x, y) and not N[x, y]]
        hits = sum(1 for x, y in pairs if cond(x, y))
        return CheckReport(name, prop, COUNTEREXAMPLE if bad else VERIFIED, {"configured_pairs": hits}, bad)

    edges = [(x, y) for x in range(n) for y in range(n) if x != y and adj[x, y]]
    non_edges = [(x, y) for x in range(n) for y in range(n) if x != y and not adj[x, y]]
    parts.append(exact("annlink.nestedann3.if", "nestedann3",
                       lambda x, y: nestedann3_config(model, labels[x], labels[y]), edges))
    parts.append(exact("annlink.nestedann4.if", "nestedann4",
                       lambda x, y: nestedann4_config(model, labels[x], labels[y]), edges))
    parts.append(exact("annlink.nestedann5.if", "nestedann5",
                       lambda x, y: model.subdomain_of(labels[y], labels[x]), non_edges))
    # Universal directions, bounded scans.
    contained = [(x, y) for x in range(n) for y in range(n) if x != y and N[x, y]]
    ann_x = [(x, y) for x, y in contained if labels[x].annular]
    parts.append(_scan(bundle, ann_x,
                       lambda X, Y: "biperipheral" if nestedann3_config(model, X, Y) else None,
                       search.ann_breaker, "annlink.nestedann3.only-if", "nestedann3"))

    def break_either(X, Y):
        return search.ann_breaker(X, Y) or search.ann_breaker(Y, X)

    equal_ann = [(x, y) for x, y in ann_x if N[y, x]]
    parts.append(_scan(bundle, equal_ann, lambda X, Y: None, break_either, "annlink.ann2", "ann2"))
    parts.append(_scan(bundle, [(x, y) for x, y in contained if adj[x, y]],
                       lambda X, Y: "pants-joined" if nestedann4_config(model, X, Y) else None,
                       search.ann_breaker, "annlink.nestedann4.only-if", "nestedann4"))
    parts.append(_scan(bundle, [(x, y) for x, y in contained if not adj[x, y]],
                       lambda X, Y: "subdomain" if model.subdomain_of(Y, X) else None,
                       search.ann_breaker, "annlink.nestedann5.only-if", "nestedann5"))
    equal = [(x, y) for x, y in contained if N[y, x]]
    parts.append(_scan(bundle, equal, lambda X, Y: ann3_case(model, X, Y), break_either, "annlink.ann3", "ann3"))
    return _combine("annlink", props, parts, t0)


def check_star_suite(bundle: ComplexBundle, witness_bound: int | None = None) -> CheckReport:
    """Nested and equal stars in D match the listed configurations."""
    t0 = time.perf_counter()
    props = "nestedstars,star"
    if bundle.kind != "D":
        raise BundleError("the star suite needs a D bundle")
    model = bundle.get_model()
    n = len(bundle)
    C = star_matrix(bundle)
    adj = bundle.complex.adjacency()
    labels = bundle.labels
    search = WitnessSearch(bundle, witness_bound)
    parts = []
    # Constructive directions: every configured pair has nested (resp. equal) stars.
    bad_nested, bad_equal, n_nested, n_equal = [], [], 0, 0
    for x in range(n):
        for y in range(n):
            if x == y or not adj[x, y]:
                continue
            X, Y = labels[x], labels[y]
            if nested_case(model, X, Y) is not None:
                n_nested += 1
                if not C[x, y]:
                    bad_nested.append({"x": _vertex(bundle, x), "y": _vertex(bundle, y)})
            if star_case(model, X, Y) is not None:
                n_equal += 1
                if not (C[x, y] and C[y, x]):
                    bad_equal.append({"x": _vertex(bundle, x), "y": _vertex(bundle, y)})
    parts.append(CheckReport("star.nestedstars.if", "nestedstars", COUNTEREXAMPLE if bad_nested else VERIFIED,
                             {"configured_pairs": n_nested}, bad_nested))
    parts.append(CheckReport("star.star.if", "star", COUNTEREXAMPLE if bad_equal else VERIFIED,
                             {"configured_pairs": n_equal}, bad_equal))
    contained = [(x, y) for x in range(n) for y in range(n) if x != y and C[x, y]]
    parts.append(_scan(bundle, contained, lambda X, Y: nested_case(model, X, Y),
                       lambda X, Y: search.star_breaker(X, Y), "star.nestedstars.only-if", "nestedstars"))
    equal = [(x, y) for x, y in contained if C[y, x]]

    def break_either(X, Y):
        return search.star_breaker(X, Y) or search.star_breaker(Y, X)

    parts.append(_scan(bundle, equal, lambda X, Y: star_case(model, X, Y), break_either,
                       "star.star.only-if", "star"))
    return _combine("star", props, parts, t0)


def _random_subsets(rng: np.random.Generator, k: int, count: int) -> list[frozenset[int]]:
    return [frozenset(np.flatnonzero(rng.random(k) < 0.5).tolist()) for _ in range(count)]


def _swap(n: int, pairs: Sequence[tuple[int, int]]) -> np.ndarray:
    perm = np.arange(n, dtype=np.int64)
    for a, b in pairs:
        perm[a], perm[b] = b, a
    return perm


def check_boolean_and_kernel(bundle: ComplexBundle, sample: int = 100, seed: int = 0,
                             symmetries: int | None = None) -> CheckReport:
    """Exchange group on biperipheral edges: laws, kernel of π_*, conjugation by symmetries."""
    t0 = time.perf_counter()
    props = "Dboolean,DBooleanconjugation,Dphi-star,Dexactsequence,exchangegeom"
    if bundle.kind != "D":
        raise BundleError("the Boolean check needs a D bundle")
    if bundle.excluded_s04:
        return _skip("boolean", props, "sphere with four holes")
    K = bundle.complex
    n = len(K)
    E = biperipheral_edge_set(bundle)
    pairs = list(E)
    k = len(pairs)
    rng = np.random.default_rng(seed)
    ident = np.arange(n, dtype=np.int64)
    d2_ident = list(range(n - k))
    parts = []

    # Biperipheral edges are exchangeable (equal stars).
    bad = [{"pair": list(p)} for p in pairs if not (K.stars_equal(*p) and is_exchangeable(K, *p))]
    parts.append(CheckReport("boolean.biperipheral-exchangeable", "star,xyanedge",
                             COUNTEREXAMPLE if bad else VERIFIED, {"edges": k}, bad))

    def phi(F: frozenset[int]) -> np.ndarray:
        return _swap(n, [pairs[i] for i in sorted(F)])

    subsets = [frozenset(), frozenset(range(k))] + _random_subsets(rng, k, 2 * sample)
    bad = []
    for F in subsets:
        p = phi(F)
        if not K.is_automorphism(p):
            bad.append({"F": sorted(F), "failure": "not an automorphism"})
        elif not np.array_equal(compose_maps(p, p), ident):
            bad.append({"F": sorted(F), "failure": "not an involution"})
        elif push_forward(bundle, p) != d2_ident:
            bad.append({"F": sorted(F), "failure": "push-forward is not the identity"})
    parts.append(CheckReport("boolean.exchange-kernel", "Dboolean,Dexactsequence",
                             COUNTEREXAMPLE if bad else VERIFIED, {"subsets": len(subsets)}, bad))

    bad = []
    for i in range(sample):
        F, G = subsets[2 + 2 * i], subsets[3 + 2 * i]
        if not np.array_equal(compose_maps(phi(F), phi(G)), phi(F ^ G)):
            bad.append({"F": sorted(F), "G": sorted(G)})
    parts.append(CheckReport("boolean.composition", "Dboolean", COUNTEREXAMPLE if bad else VERIFIED,
                             {"pairs": sample}, bad))

    # Geometric automorphisms from triangulation symmetries.
    model = bundle.get_model()
    syms = model.symmetries()
    if symmetries is not None:
        syms = syms[:symmetries]
    hs, bad = [], []
    for s in syms:
        try:
            h = np.asarray(symmetry_map(bundle, s), dtype=np.int64)
        except BundleError as exc:
            bad.append({"symmetry": list(s.edge_perm), "failure": str(exc)})
            continue
        if not K.is_automorphism(h):
            bad.append({"symmetry": list(s.edge_perm), "failure": "not an automorphism"})
            continue
        hs.append(h)
    distinct = {tuple(h.tolist()) for h in hs}
    bad_conj = []
    pair_index = {p: i for i, p in enumerate(pairs)}
    for h in hs:
        for F in subsets[: 2 + min(sample, 20)]:
            Fs = ExchangeSet(tuple(pairs[i] for i in F))
            try:
                G = conjugate_exchange(K, h, Fs)
            except ValueError as exc:
                bad_conj.append({"F": sorted(F), "failure": str(exc)})
                continue
            if any(p not in pair_index for p in G):
                bad_conj.append({"F": sorted(F), "failure": "conjugate leaves the biperipheral edges"})
    parts.append(CheckReport("boolean.conjugation", "DBooleanconjugation,DBooleannormal",
                             COUNTEREXAMPLE if bad or bad_conj else VERIFIED,
                             {"symmetries": len(hs), "distinct_vertex_maps": len(distinct)}, bad + bad_conj))

    # Kernel and unique factorization among the sampled products h o Phi_F.
    bad = []
    seen: dict[tuple, tuple] = {}
    kernel = 0
    for hi, h in enumerate(hs):
        for fi, F in enumerate(subsets[: 2 + min(sample, 20)]):
            g = compose_maps(h, phi(F))
            key = tuple(g.tolist())
            tag = (tuple(h.tolist()), F)
            if key in seen and seen[key] != tag:
                bad.append({"symmetry": hi, "F": sorted(F), "failure": "factorization is not unique"})
            seen.setdefault(key, tag)
            if push_forward(bundle, g) == d2_ident:
                kernel += 1
                moved = [(v, int(g[v])) for v in range(n) if g[v] != v]
                if any(tuple(sorted(p)) not in pair_index for p in moved):
                    bad.append({"symmetry": hi, "F": sorted(F), "failure": "kernel element outside the exchange group"})
    parts.append(CheckReport("boolean.factorization", "Dexactsequence,exchangegeom",
                             COUNTEREXAMPLE if bad else VERIFIED,
                             {"products": len(seen), "kernel_members": kernel}, bad))
    rep = _combine("boolean", props, parts, t0)
    rep.details = {"seed": seed, "sample": sample, "biperipheral_edges": k}
    return rep


def run_suite(bundle: ComplexBundle, suite: str = "all", seed: int = 0, sample: int = 100,
              witness_bound: int | None = None) -> list[CheckReport]:
    """Run one suite (or ``all``) and return its reports in a fixed order."""
    if suite not in SUITES + ("all",):
        raise ValueError(f"unknown suite {suite!r}")
    chosen = SUITES if suite == "all" else (suite,)
    out = []
    for name in chosen:
        if name == "annular":
            if bundle.kind not in ("D", "D2"):
                out.append(_skip("annular", "D2annuli", f"needs a D or D2 bundle, got {bundle.kind}"))
            else:
                out.append(check_annular_characterization(bundle, witness_bound))
            continue
        if bundle.kind != "D":
            out.append(_skip(name, name, f"needs a D bundle, got {bundle.kind}"))
        elif name == "annlink":
            out.append(check_ann_link_suite(bundle, witness_bound))
        elif name == "star":
            out.append(check_star_suite(bundle, witness_bound))
        else:
            out.append(check_boolean_and_kernel(bundle, sample, seed))
    return out
