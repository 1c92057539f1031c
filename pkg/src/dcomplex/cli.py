"""Command-line front end: build, query, verify, export-dot.

Exit codes: 0 success, 1 counterexample found by ``verify``, 2 unsupported
surface or bad arguments, 3 unreadable or corrupt input and write failures,
4 unknown vertex.
"""

from __future__ import annotations

import json
import sys

import click

from . import __version__
from .builders import BundleError, ComplexBundle, build, default_threads, fibers
from .exchange import is_exchangeable
from .flag import ComplexError
from .triangulation import UnsupportedSurface
from .verifier import SUITES, run_suite

EXIT_COUNTEREXAMPLE = 1
EXIT_UNSUPPORTED = 2
EXIT_IO = 3
EXIT_UNKNOWN_VERTEX = 4


def _emit(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True, indent=2))


def _fail(msg: str, code: int) -> None:
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _parse_surface(text: str) -> tuple[int, int]:
    try:
        g, b = (int(v) for v in text.split(","))
    except ValueError:
        _fail(f"surface must be 'genus,holes', got {text!r}", EXIT_UNSUPPORTED)
    return g, b


def _load(path: str) -> ComplexBundle:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        _fail(f"cannot read {path}: {exc.strerror}", EXIT_IO)
    try:
        return ComplexBundle.loads(text)
    except (UnsupportedSurface, BundleError, ComplexError, ValueError) as exc:
        _fail(f"corrupt bundle {path}: {exc}", EXIT_IO)


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        _fail(f"cannot write {path}: {exc.strerror}", EXIT_IO)


def _vertex(bundle: ComplexBundle, text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        _fail(f"unknown vertex {text!r}", EXIT_UNKNOWN_VERTEX)
    if not 0 <= v < len(bundle):
        _fail(f"unknown vertex {v}", EXIT_UNKNOWN_VERTEX)
    return v


@click.group()
@click.version_option(version=__version__, prog_name="dcomplex")
def main() -> None:
    """Build and check truncations of curve and domain complexes."""


@main.command("build")
@click.option("--surface", "surface", required=True, help="genus,holes, e.g. 0,5")
@click.option("--weight", "W", type=int, required=True, help="truncation weight bound")
@click.option("--kind", type=click.Choice(["C", "D", "D2"]), default="D", show_default=True)
@click.option("--out", "out", required=True, help="output bundle path")
@click.option("--threads", type=int, default=None, help="worker cap (default: $DCOMPLEX_THREADS or 1)")
def cmd_build(surface: str, W: int, kind: str, out: str, threads: int | None) -> None:
    """Write a ComplexBundle JSON file."""
    g, b = _parse_surface(surface)
    if W < 0:
        _fail("weight must be non-negative", EXIT_UNSUPPORTED)
    try:
        bundle = build(kind, (g, b), W, threads=threads or default_threads())
    except UnsupportedSurface as exc:
        _fail(str(exc), EXIT_UNSUPPORTED)
    _write(out, bundle.dumps())
    click.echo(f"{kind} S_({g},{b}) W={W}: {len(bundle)} vertices, {len(bundle.complex.edges)} edges")


@main.command("query")
@click.option("--bundle", "-b", "path", required=True, help="bundle JSON path")
@click.argument("op", type=click.Choice(["star", "link", "exchangeable", "fibers"]))
@click.argument("args", nargs=-1)
def cmd_query(path: str, op: str, args: tuple[str, ...]) -> None:
    """Print a star, link, exchangeability test, or the projection fibers."""
    bundle = _load(path)
    K = bundle.complex
    need = {"star": 1, "link": 1, "exchangeable": 2, "fibers": 0}[op]
    if len(args) != need:
        _fail(f"{op} takes {need} vertex argument(s)", EXIT_UNSUPPORTED)
    vs = [_vertex(bundle, a) for a in args]
    if op == "star":
        _emit({"vertex": vs[0], "star": sorted(K.star0(vs[0]))})
    elif op == "link":
        _emit({"vertex": vs[0], "link": sorted(K.link0(vs[0]))})
    elif op == "exchangeable":
        x, y = vs
        if x == y:
            _fail("an exchangeable pair needs two distinct vertices", EXIT_UNSUPPORTED)
        _emit({"x": x, "y": y, "adjacent": K.adjacent(x, y), "exchangeable": is_exchangeable(K, x, y)})
    else:
        if bundle.kind != "D":
            _fail("fibers need a D bundle", EXIT_UNSUPPORTED)
        table = [
            {"image": img, "fiber": fib, "shape": {1: "vertex", 2: "edge", 3: "triangle"}.get(len(fib), "other")}
            for img, fib in sorted(fibers(bundle).items())
        ]
        _emit({"fibers": table, "excluded": bundle.excluded_s04})


@main.command("verify")
@click.argument("path")
@click.option("--suite", type=click.Choice(("all",) + SUITES), default="all", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--sample", type=int, default=100, show_default=True, help="random exchange subsets to test")
@click.option("--witness-bound", type=int, default=None, help="largest curve weight for witness searches")
@click.option("--out", "out", default=None, help="also write the report here")
@click.option("--timing/--no-timing", default=False, help="include wall-clock seconds (not reproducible)")
def cmd_verify(path: str, suite: str, seed: int, sample: int, witness_bound: int | None,
               out: str | None, timing: bool) -> None:
    """Run verification suites; exit 1 if any counterexample is found."""
    bundle = _load(path)
    reports = run_suite(bundle, suite, seed=seed, sample=sample, witness_bound=witness_bound)
    doc = {
        "surface": list(bundle.surface),
        "kind": bundle.kind,
        "W": bundle.W,
        "suite": suite,
        "seed": seed,
        "reports": [r.to_json(timing) for r in reports],
    }
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out:
        _write(out, text)
    click.echo(text, nl=False)
    if any(not r.ok for r in reports):
        sys.exit(EXIT_COUNTEREXAMPLE)


@main.command("export-dot")
@click.argument("path")
@click.option("--out", "out", default=None, help="output .dot path (default: stdout)")
def cmd_export_dot(path: str, out: str | None) -> None:
    """Graphviz rendering of the 1-skeleton."""
    bundle = _load(path)
    text = bundle.complex.to_dot(f"{bundle.kind}_{bundle.surface[0]}_{bundle.surface[1]}")
    if out:
        _write(out, text)
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":  # pragma: no cover
    main()
