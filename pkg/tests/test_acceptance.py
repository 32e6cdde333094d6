"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
"""

import math
import random
import sys
import time

import numpy as np
import pytest

from kuramoto_bkk.certify import (
    Status,
    check_main_condition,
    intersection_index,
    relevant_directions,
    restricted_support,
)
from kuramoto_bkk.kuramoto import OscillatorNetwork, build_spaces, instantiate
from kuramoto_bkk.mixed_volume import mixed_volume, mv_via_interpolation
from kuramoto_bkk.oracle.homotopy import (
    binomial_start_solutions,
    count_torus_roots_homotopy,
    polyhedral_start,
    track_all_paths,
)
from kuramoto_bkk.oracle.resultant import count_torus_roots_bivariate, count_torus_roots_univariate
from kuramoto_bkk.polynomial import SpanSpace, space_newton_polytope
from kuramoto_bkk.polytope import Meet, convex_hull, minkowski_sum, volume


@pytest.fixture
def report(capsys):
    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {k}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return emit


def random_support(rng, n, k=None):
    k = k or rng.randint(1, 6)
    return [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(k)]


def random_polys(rng, n):
    return [convex_hull(random_support(rng, n), n) for _ in range(n)]


def test_criterion_1_dual_algorithms(report):
    t = time.perf_counter()
    bad = []
    total = 0
    for n in (2, 3, 4):
        rng = random.Random(f"acceptance-1:{n}")
        for _ in range(50):
            polys = random_polys(rng, n)
            a, b = mixed_volume(polys), mv_via_interpolation(polys)
            total += 1
            if a != b:
                bad.append((n, a, b))
    elapsed = time.perf_counter() - t
    report(1, not bad and elapsed < 120, f"{total} tuples, {len(bad)} mismatches, {elapsed:.1f}s")


def test_criterion_2_identities(report):
    rng = random.Random("acceptance-2")
    counts = dict.fromkeys(("symmetry", "translation", "multilinearity", "monotonicity", "diagonal"), 0)
    failures = []
    for _ in range(20):
        n = rng.choice([2, 3])
        polys = random_polys(rng, n)
        mv = mixed_volume(polys)
        perm = rng.sample(range(n), n)
        if mixed_volume([polys[i] for i in perm]) != mv:
            failures.append("symmetry")
        counts["symmetry"] += 1
        shift = [tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(n)]
        if mixed_volume([P.translate(s) for P, s in zip(polys, shift)]) != mv:
            failures.append("translation")
        counts["translation"] += 1
        Q = convex_hull(random_support(rng, n), n)
        i = rng.randrange(n)
        summed = list(polys)
        summed[i] = minkowski_sum(polys[i], Q)
        other = list(polys)
        other[i] = Q
        if mixed_volume(summed) != mv + mixed_volume(other):
            failures.append("multilinearity")
        counts["multilinearity"] += 1
        bigger = [convex_hull(list(P.vertices) + random_support(rng, n, 2), n) for P in polys]
        if not mixed_volume(bigger) >= mv:
            failures.append("monotonicity")
        counts["monotonicity"] += 1
        P = convex_hull(random_support(rng, n, 6), n)
        if mixed_volume([P] * n) != math.factorial(n) * volume(P):
            failures.append("diagonal")
        counts["diagonal"] += 1
    detail = ", ".join(f"{k} {v}" for k, v in counts.items())
    report(2, not failures and min(counts.values()) >= 20, f"{detail}; failures {failures}")


def test_criterion_3_triangle(report):
    net = OscillatorNetwork.complete(2)
    spaces = build_spaces(net)
    certified = check_main_condition(spaces).overall
    res = intersection_index(spaces)
    resultant = [count_torus_roots_bivariate(*instantiate(net, s).rational).count for s in range(20)]
    homotopy = []
    for s in range(5):
        rep = count_torus_roots_homotopy(list(instantiate(net, s, "complex").complex_terms), s)
        homotopy.append((rep.count, rep.failures))
    ok = (
        certified
        and res.status is Status.CERTIFIED
        and res.value == 6
        and resultant == [6] * 20
        and homotopy == [(6, 0)] * 5
    )
    report(3, ok, f"index {res.value}, resultant {set(resultant)} x20, homotopy {set(homotopy)} x5")


def test_criterion_4_single_edge(report):
    net = OscillatorNetwork(2, ((0, 1),))
    res = intersection_index(build_spaces(net))
    counts = [count_torus_roots_univariate(instantiate(net, s).rational[0]).count for s in range(10)]
    ok = res.status is Status.CERTIFIED and res.value == 2 and counts == [2] * 10
    report(4, ok, f"certified {res.value}, univariate counts {set(counts)}")


def test_criterion_5_negative_controls(report):
    diag = [SpanSpace.parse(["1", "x1 + x2"], 2), SpanSpace.parse(["1", "x1", "x2"], 2)]
    r1 = intersection_index(diag)
    witness = r1.report.per_space[0].violations
    ok1 = r1.status is Status.REFUSED and len(witness) == 1 and witness[0].classification is Meet.POSITIVE_DIM
    r2 = intersection_index(build_spaces(OscillatorNetwork.path(2)))
    leaf = r2.report.per_space[1]
    ok2 = r2.status is Status.REFUSED and r2.report.dim_failures == [1] and leaf.dim == 1
    report(5, ok1 and ok2, f"span{{1,x1+x2}} refused with {witness[0].classification.name if witness else None}; "
           f"path graph refused, dim failures {r2.report.dim_failures}")


def test_criterion_6_complete_graphs(report):
    results = {}
    for n in (2, 3, 4, 5):
        spaces = build_spaces(OscillatorNetwork.complete(n))
        t = time.perf_counter()
        results[n] = (check_main_condition(spaces).overall, time.perf_counter() - t)
    ok = all(c for c, _ in results.values()) and results[5][1] < 60
    detail = ", ".join(f"n={n} {'certified' if c else 'refused'} {dt:.1f}s" for n, (c, dt) in results.items())
    report(6, ok, detail)


def test_criterion_7_restricted_support(report):
    instances = [build_spaces(OscillatorNetwork.complete(n)) for n in (1, 2, 3, 4)]
    instances.append(build_spaces(OscillatorNetwork.complete(3).relabel([3, 1, 2])))
    instances.append([SpanSpace.parse(["1", "x1", "x2"], 2), SpanSpace.parse(["1", "x1 - x1^-1", "x2 - 2*x2^-1"], 2)])
    checked = 0
    bad = []
    for spaces in instances:
        assert check_main_condition(spaces).overall
        for v in relevant_directions([space_newton_polytope(L) for L in spaces]):
            rs = restricted_support(spaces, v)
            checked += 1
            if not rs.coefficients_independent():
                bad.append(v)
    report(7, not bad, f"{len(instances)} certified instances, {checked} directions, {len(bad)} failures")


def test_criterion_8_homotopy_bookkeeping(report):
    rng = random.Random("acceptance-8")
    cells_checked = paths_ok = self_ok = 0
    problems = []
    for trial in range(12):
        n = 2 if trial < 8 else 3
        supports = [sorted(set(random_support(rng, n, rng.randint(2, 5)))) for _ in range(n)]
        polys = [convex_hull(s, n) for s in supports]
        mv = mixed_volume(polys)
        if mv == 0:
            continue
        start = polyhedral_start(supports, trial)
        for cell in start.cells:
            sols = binomial_start_solutions(cell, start.lifting, start.coefficients)
            M = []
            for (p, q), ls in zip(cell.pairs, start.lifting):
                M.append([x - y for x, y in zip(ls.points[q], ls.points[p])])
            if len(sols) != abs(round(np.linalg.det(np.array(M, dtype=float)))):
                problems.append(("cell", trial))
            cells_checked += 1
        if start.paths != mv:
            problems.append(("paths", trial))
        paths_ok += 1
        rep = track_all_paths(start.coefficients, start=start, seed=trial)
        if rep.failures or rep.count != start.paths:
            problems.append(("self-start", trial, rep.failures))
        self_ok += 1
    ok = not problems and cells_checked > 0 and self_ok >= 5
    report(8, ok, f"{cells_checked} cells, {paths_ok} path totals, {self_ok} self-start systems; problems {problems}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
