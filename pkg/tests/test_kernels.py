import copy
import os
import random
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from kuramoto_bkk import _kernels_py, kernels, lp
from kuramoto_bkk.kuramoto import OscillatorNetwork, build_spaces, instantiate
from kuramoto_bkk.mixed_volume import mixed_volume_audit
from kuramoto_bkk.oracle import homotopy
from kuramoto_bkk.polynomial import space_newton_polytope

try:
    from kuramoto_bkk import _kernels as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="extension not built")


@pytest.fixture(scope="module")
def tableaux():
    polys = [space_newton_polytope(L) for L in build_spaces(OscillatorNetwork.complete(3))]
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


def test_recorded_tableaux_nonempty(tableaux):
    assert len(tableaux) > 50
    assert {_kernels_py.phase_one(copy.deepcopy(T), list(b), k) for T, b, k in tableaux} == {True, False}


@needs_compiled
def test_phase_one_backends_agree(tableaux):
    for T, b, k in tableaux:
        T1, b1 = copy.deepcopy(T), list(b)
        T2, b2 = copy.deepcopy(T), list(b)
        assert _kernels_py.phase_one(T1, b1, k) == compiled.phase_one(T2, b2, k)
        assert b1 == b2 and T1 == T2


@needs_compiled
def test_overflow_falls_back_without_touching_input():
    big = 2**40
    T = [[big, 1, big + 1], [1, big, big - 3], [-big - 1, -big - 1, -2 * big + 2]]
    basis = [-1, -1]
    T0, b0 = copy.deepcopy(T), list(basis)
    with pytest.raises(OverflowError):
        compiled.phase_one(T, basis, 2)
    assert T == T0 and basis == b0
    assert kernels.phase_one(copy.deepcopy(T), list(basis), 2) == _kernels_py.phase_one(T, basis, 2)


def test_eval_terms_backends_agree():
    inst = instantiate(OscillatorNetwork.complete(2), 0, "complex")
    f = homotopy.as_complex_system(list(inst.complex_terms))
    start = homotopy.polyhedral_start([list(e) for e in f], 0)
    table = homotopy._linear_table(start.coefficients, f, 0.6 + 0.8j)
    rng = np.random.default_rng(1)
    for _ in range(20):
        x = rng.normal(size=2) + 1j * rng.normal(size=2)
        t = float(rng.random())
        ref = _kernels_py.eval_terms(list(x), t, *table.lists, table.n)
        got = kernels.eval_terms(x, t, table)
        for a, b in zip(ref, got):
            assert np.allclose(np.array(a), b, rtol=1e-12, atol=1e-12)
        # direct evaluation of the homotopy
        H = [
            sum(c * (0.6 + 0.8j) * (1 - t) * np.prod(x ** np.array(a)) for a, c in g.items())
            + sum(c * t * np.prod(x ** np.array(a)) for a, c in fi.items())
            for g, fi in zip(start.coefficients, f)
        ]
        assert np.allclose(got[0], H)


def _scipy_feasible(A, b, C, d, k):
    res = linprog(
        np.zeros(k),
        A_ub=-np.array(A, dtype=float) if A else None,
        b_ub=-np.array(b, dtype=float) if A else None,
        A_eq=np.array(C, dtype=float) if C else None,
        b_eq=np.array(d, dtype=float) if C else None,
        bounds=[(None, None)] * k,
        method="highs",
    )
    return res.status == 0


@pytest.mark.parametrize("seed", range(150))
def test_feasible_matches_scipy(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 4)
    m = rng.randint(1, 7)
    e = rng.randint(0, 2)
    A = [[rng.randint(-3, 3) for _ in range(k)] for _ in range(m)]
    b = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(m)]
    C = [[rng.randint(-2, 2) for _ in range(k)] for _ in range(e)]
    d = [rng.randint(-3, 3) for _ in range(e)]
    assert lp.feasible(A, b, C, d, k) == _scipy_feasible(A, b, C, d, k)


def test_feasible_edge_cases():
    assert lp.feasible([[1, 0]], [1], nvars=2)
    assert not lp.feasible([[1], [-1]], [1, 0])
    assert lp.feasible([[1], [-1]], [1, -1])
    assert not lp.feasible([[0, 0]], [1])
    assert not lp.feasible([], [], [[0, 0]], [1], nvars=2)
    assert lp.feasible([], [], [[1, 1]], [Fraction(1, 3)], nvars=2)
    assert not lp.feasible([[1, 1]], [1], [[1, 1]], [0])


def test_pure_backend_env_switch():
    code = "from kuramoto_bkk import kernels; print(kernels.BACKEND)"
    env = {**os.environ, "KURAMOTO_BKK_PURE": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True,
                         env={k: v for k, v in os.environ.items() if k != "KURAMOTO_BKK_PURE"})
    assert out.stdout.strip() == ("compiled" if compiled else "python")


def test_pure_backend_end_to_end():
    code = (
        "from kuramoto_bkk.kuramoto import *;from kuramoto_bkk.certify import intersection_index;"
        "print(intersection_index(build_spaces(OscillatorNetwork.complete(3))).value)"
    )
    env = {**os.environ, "KURAMOTO_BKK_PURE": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "20"
