"""Exact integer/rational linear algebra used across the package.

Everything here works on plain Python ``int`` and :class:`fractions.Fraction`
values, so results are exact regardless of magnitude.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError(f"refusing inexact float {x!r}; pass a Fraction or string")
    return Fraction(x)


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = reduce(gcd, (abs(int(a)) for a in v), 0)
    if g <= 1:
        return tuple(int(a) for a in v)
    return tuple(int(a) // g for a in v)


def primitive_rational(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    den = reduce(lcm, (Fraction(a).denominator for a in v), 1)
    return primitive([int(Fraction(a) * den) for a in v])


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def integerize(points: Iterable[Sequence]) -> tuple[list[tuple[int, ...]], int]:
    """Scale rational points by a common denominator.

    Returns the integer points and the scale factor ``d`` such that
    ``point == int_point / d``.
    """
    pts = [tuple(as_fraction(c) for c in p) for p in points]
    d = reduce(lcm, (c.denominator for p in pts for c in p), 1)
    return [tuple(int(c * d) for c in p) for p in pts], d


def det(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    m = [list(r) for r in rows]
    k = len(m)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for i in range(k - 1):
        if m[i][i] == 0:
            for r in range(i + 1, k):
                if m[r][i] != 0:
                    m[i], m[r] = m[r], m[i]
                    sign = -sign
                    break
            else:
                return 0
        piv = m[i][i]
        for r in range(i + 1, k):
            mr = m[r]
            f = mr[i]
            mi = m[i]
            for c in range(i + 1, k):
                mr[c] = (mr[c] * piv - f * mi[c]) // prev
        prev = piv
    return sign * m[k - 1][k - 1]


def row_echelon(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of an integer matrix (fraction-free elimination)."""
    m = [list(map(int, r)) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rk = 0
    for c in range(ncols):
        p = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[rk], m[p] = m[p], m[rk]
        piv = m[rk]
        for i in range(rk + 1, len(m)):
            f = m[i][c]
            if f:
                row = m[i]
                a = piv[c]
                m[i] = [a * x - f * y for x, y in zip(row, piv)]
        rk += 1
        if rk == len(m):
            break
    return rk


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine span of integer points (-1 for no points)."""
    if not points:
        return -1
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of the right null space of a rational matrix."""
    red, piv = row_echelon(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in zip(red, piv):
            v[pc] = -r[f]
        basis.append(primitive_rational(v))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve the square system ``a x = b`` exactly; None if singular."""
    k = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(a, b)]
    red, piv = row_echelon(aug)
    if len(piv) < k or piv[-1] >= k:
        return None
    return [red[i][k] for i in range(k)]


def hyperplane_through(points: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Primitive normal of the hyperplane through ``dim`` affinely independent points.

    Returns the zero-free null vector of the difference matrix; the caller is
    responsible for passing points spanning a hyperplane.
    """
    p0 = points[0]
    diffs = [sub(p, p0) for p in points[1:]]
    ns = nullspace(diffs, len(p0))
    if len(ns) != 1:
        raise ValueError("points do not span a hyperplane")
    return ns[0]
