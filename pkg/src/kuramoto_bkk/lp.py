"""Exact LP feasibility for small systems over Q.

Decides whether ``{v : A v >= b, C v = d}`` (``v`` free) is nonempty.
Rows are scaled to integers and fed, equalities included, to an
integer-preserving phase-one simplex with Bland's rule, so the answer is a
proof, not an estimate.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence

from . import kernels


def _integer_row(coeffs: Sequence, rhs) -> tuple[list[int], int]:
    if type(rhs) is int and all(type(c) is int for c in coeffs):
        return list(coeffs), rhs
    coeffs = [Fraction(c) for c in coeffs]
    rhs = Fraction(rhs)
    den = reduce(lcm, (c.denominator for c in coeffs), rhs.denominator)
    row = [int(c * den) for c in coeffs]
    b = int(rhs * den)
    g = reduce(gcd, (abs(x) for x in row), abs(b))
    if g > 1:
        row = [x // g for x in row]
        b //= g
    return row, b


def feasible(
    ineq_rows: Sequence[Sequence],
    ineq_rhs: Sequence,
    eq_rows: Sequence[Sequence] = (),
    eq_rhs: Sequence = (),
    nvars: int | None = None,
) -> bool:
    if nvars is None:
        sample = ineq_rows[0] if ineq_rows else eq_rows[0]
        nvars = len(sample)
    ineq = [_integer_row(a, b) for a, b in zip(ineq_rows, ineq_rhs)]
    eqs = [_integer_row(a, b) for a, b in zip(eq_rows, eq_rhs)]
    for a, b in eqs:
        if not any(a) and b:
            return False
    ineq = [(a, b) for a, b in ineq if any(a) or b > 0]
    if any(not any(a) for a, _ in ineq):
        return False
    eqs = [(a, b) for a, b in eqs if any(a)]
    if not eqs and all(b <= 0 for _, b in ineq):
        return True  # v = 0 works
    return _phase_one(ineq, eqs, nvars)


def _phase_one(ineq: list[tuple[list[int], int]], eqs: list[tuple[list[int], int]], k: int) -> bool:
    # columns: v+ (k), v- (k), slack per inequality, artificials, rhs
    m = len(ineq) + len(eqs)
    n_struct = 2 * k + len(ineq)
    n_art = len(eqs) + sum(1 for _, b in ineq if b > 0)
    ncols = n_struct + n_art + 1
    T = []
    basis = []
    art = n_struct
    needs_art = []
    for r, (a, b) in enumerate(ineq):
        # a.v - s = b
        row = [0] * ncols
        sign = 1 if b > 0 else -1
        for j in range(k):
            row[j] = sign * a[j]
            row[k + j] = -sign * a[j]
        row[2 * k + r] = -sign
        row[-1] = sign * b
        if b > 0:
            row[art] = 1
            basis.append(art)
            art += 1
            needs_art.append(len(T))
        else:
            basis.append(2 * k + r)
        T.append(row)
    for a, b in eqs:
        row = [0] * ncols
        sign = 1 if b >= 0 else -1
        for j in range(k):
            row[j] = sign * a[j]
            row[k + j] = -sign * a[j]
        row[art] = 1
        row[-1] = sign * b
        basis.append(art)
        art += 1
        needs_art.append(len(T))
        T.append(row)
    obj = [0] * ncols
    for r in needs_art:
        for j in range(n_struct):
            obj[j] -= T[r][j]
        obj[-1] -= T[r][-1]
    T.append(obj)
    assert len(T) == m + 1
    return kernels.phase_one(T, basis, n_struct)
