"""Compare the numba kernels against the plain numpy/Python fallback.

Each path runs in its own interpreter because the switch
(``DCOMPLEX_DISABLE_NUMBA``) is read at import time.  Usage::

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

The first numba call compiles (or loads the on-disk cache); that cost is
reported separately as ``warmup`` and excluded from the timed repeats.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

CASES = {
    "enumerate S_(0,5) W=5": lambda: _enumerate((0, 5), 5),
    "enumerate S_(1,2) W=5": lambda: _enumerate((1, 2), 5),
    "disjoint matrix S_(0,5) W=4": lambda: _disjoint((0, 5), 4),
    "build D S_(0,5) W=4": lambda: _build((0, 5), 4),
    "build D S_(1,2) W=3": lambda: _build((1, 2), 3),
}
QUICK = ("enumerate S_(0,5) W=5", "disjoint matrix S_(0,5) W=4")


def _enumerate(sig, W):
    from dcomplex.curves import Surface
    from dcomplex.triangulation import standard_triangulation

    return len(Surface(standard_triangulation(*sig)).enumerate_curves(W))


def _disjoint(sig, W):
    from dcomplex.curves import Surface
    from dcomplex.triangulation import standard_triangulation

    S = Surface(standard_triangulation(*sig))
    return int(S.disjoint_matrix(S.enumerate_curves(W)).sum())


def _build(sig, W):
    from dcomplex.builders import build_D

    return len(build_D(sig, W).complex.edges)


def worker(names, repeat):
    from dcomplex._jit import NUMBA_ENABLED

    t0 = time.perf_counter()
    _enumerate((0, 5), 1)
    _build((0, 5), 1)
    out = {"numba": NUMBA_ENABLED, "warmup": time.perf_counter() - t0, "cases": {}}
    for name in names:
        times, result = [], None
        for _ in range(repeat):
            t = time.perf_counter()
            result = CASES[name]()
            times.append(time.perf_counter() - t)
        out["cases"][name] = {"best": min(times), "result": result}
    json.dump(out, sys.stdout)


def run_path(disable, names, repeat):
    env = dict(os.environ)
    env["DCOMPLEX_DISABLE_NUMBA"] = "1" if disable else "0"
    cmd = [sys.executable, __file__, "--worker", "--repeat", str(repeat), "--cases", json.dumps(names)]
    res = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="run only the two kernel-level cases")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    ap.add_argument("--cases", default=None, help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    names = json.loads(args.cases) if args.cases else list(QUICK if args.quick else CASES)
    if args.worker:
        worker(names, args.repeat)
        return 0
    jit = run_path(False, names, args.repeat)
    py = run_path(True, names, args.repeat)
    if not jit["numba"]:
        print("numba is not available; both columns use the fallback")
    print(f"{'case':32s} {'numba s':>10s} {'fallback s':>11s} {'speedup':>8s}  result")
    for name in names:
        a, b = jit["cases"][name], py["cases"][name]
        if a["result"] != b["result"]:
            print(f"{name}: paths disagree ({a['result']} vs {b['result']})")
            return 1
        print(f"{name:32s} {a['best']:10.4f} {b['best']:11.4f} {b['best'] / a['best']:7.1f}x  {a['result']}")
    print(f"{'warmup (compile or cache load)':32s} {jit['warmup']:10.4f} {py['warmup']:11.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
