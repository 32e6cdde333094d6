"""Compiled vs pure-Python kernels.

Kernel level: the phase-one tableaux recorded during a real mixed-cell
search, and homotopy evaluations of a Kuramoto system, run through both
backends on identical inputs.  End to end: the same commands in
subprocesses with and without ``KURAMOTO_BKK_PURE=1``.

    python3 benchmarks/bench_kernels.py [--n 4] [--json out.json]
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import subprocess
import sys
import time

import numpy as np

from kuramoto_bkk import _kernels_py, kernels
from kuramoto_bkk.kuramoto import OscillatorNetwork, build_spaces, instantiate
from kuramoto_bkk.mixed_volume import mixed_volume_audit
from kuramoto_bkk.oracle import homotopy
from kuramoto_bkk.polynomial import space_newton_polytope

try:
    from kuramoto_bkk import _kernels as compiled
except ImportError:
    compiled = None


def record_tableaux(n: int) -> list:
    polys = [space_newton_polytope(L) for L in build_spaces(OscillatorNetwork.complete(n))]
    seen = []
    real = kernels.phase_one

    def spy(T, basis, n_struct):
        seen.append((copy.deepcopy(T), list(basis), n_struct))
        return real(T, basis, n_struct)

    kernels.phase_one = spy
    try:
        mixed_volume_audit(polys, 0)
    finally:
        kernels.phase_one = real
    return seen


def time_phase_one(fn, cases, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        work = [(copy.deepcopy(T), list(b), k) for T, b, k in cases]
        t = time.perf_counter()
        for T, b, k in work:
            fn(T, b, k)
        best = min(best, time.perf_counter() - t)
    return best


def homotopy_table(n: int):
    inst = instantiate(OscillatorNetwork.complete(n), 0, "complex")
    f = homotopy.as_complex_system(list(inst.complex_terms))
    start = homotopy.polyhedral_start([list(e) for e in f], 0)
    return homotopy._linear_table(start.coefficients, f, 1j)


def time_eval(table, evals: int) -> tuple[float, float | None]:
    rng = np.random.default_rng(0)
    xs = rng.normal(size=(evals, table.n)) + 1j * rng.normal(size=(evals, table.n))
    ts = rng.random(evals)
    t = time.perf_counter()
    for x, s in zip(xs, ts):
        _kernels_py.eval_terms(list(x), float(s), *table.lists, table.n)
    pure = time.perf_counter() - t
    fast = None
    if compiled is not None:
        t = time.perf_counter()
        for x, s in zip(xs, ts):
            compiled.eval_terms(x, float(s), table.exps, table.eq, table.c0, table.c1, table.texp, table.n)
        fast = time.perf_counter() - t
        a = _kernels_py.eval_terms(list(xs[0]), float(ts[0]), *table.lists, table.n)
        b = compiled.eval_terms(xs[0], float(ts[0]), table.exps, table.eq, table.c0, table.c1, table.texp, table.n)
        assert all(np.allclose(np.array(u), v) for u, v in zip(a, b)), "backends disagree"
    return pure, fast


def end_to_end(n: int) -> dict:
    code = (
        "import time;from kuramoto_bkk.kuramoto import *;from kuramoto_bkk.mixed_volume import mixed_volume_audit;"
        "from kuramoto_bkk.polynomial import space_newton_polytope;"
        "from kuramoto_bkk.oracle.homotopy import count_torus_roots_homotopy;"
        f"net=OscillatorNetwork.complete({n});P=[space_newton_polytope(L) for L in build_spaces(net)];"
        "t=time.perf_counter();mixed_volume_audit(P,0);a=time.perf_counter()-t;"
        "s=instantiate(net,0,'complex');t=time.perf_counter();"
        "r=count_torus_roots_homotopy(list(s.complex_terms),0);b=time.perf_counter()-t;"
        "print(a,b,r.count)"
    )
    out = {}
    for label, env in (("compiled", {}), ("python", {"KURAMOTO_BKK_PURE": "1"})):
        res = subprocess.run(
            [sys.executable, "-c", code], env={**os.environ, **env}, capture_output=True, text=True, check=True
        )
        cells, track, count = res.stdout.split()
        out[label] = {"mixedCells": float(cells), "homotopy": float(track), "count": int(count)}
    return out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--evals", type=int, default=20000)
    ap.add_argument("--json")
    args = ap.parse_args()

    report: dict = {"n": args.n, "compiledAvailable": compiled is not None}
    cases = record_tableaux(args.n)
    pure = time_phase_one(_kernels_py.phase_one, cases, args.repeat)
    report["phaseOne"] = {"calls": len(cases), "python": pure}
    if compiled is not None:
        fast = time_phase_one(kernels.phase_one, cases, args.repeat)
        report["phaseOne"]["compiled"] = fast
        agree = all(
            _kernels_py.phase_one(copy.deepcopy(T), list(b), k) == kernels.phase_one(copy.deepcopy(T), list(b), k)
            for T, b, k in cases
        )
        report["phaseOne"]["agree"] = agree
    table = homotopy_table(args.n)
    p, f = time_eval(table, args.evals)
    report["evalTerms"] = {"evals": args.evals, "terms": len(table.eq), "python": p, "compiled": f}
    report["endToEnd"] = end_to_end(args.n)

    po, ev = report["phaseOne"], report["evalTerms"]
    print(f"phase_one   {po['calls']:6d} calls  python {po['python']:.3f}s", end="")
    print(f"  compiled {po['compiled']:.3f}s  x{po['python'] / po['compiled']:.1f}" if compiled else "")
    print(f"eval_terms  {ev['evals']:6d} evals  python {ev['python']:.3f}s", end="")
    print(f"  compiled {ev['compiled']:.3f}s  x{ev['python'] / ev['compiled']:.1f}" if compiled else "")
    for label, r in report["endToEnd"].items():
        print(f"{label:9s} K{args.n + 1}: mixed cells {r['mixedCells']:.2f}s, homotopy {r['homotopy']:.2f}s ({r['count']} roots)")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2)


if __name__ == "__main__":
    main()
