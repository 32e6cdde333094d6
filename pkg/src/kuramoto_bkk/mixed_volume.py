"""Mixed volumes of lattice polytopes, computed two independent ways.

Normalization: ``Mvol(P_1, ..., P_n)`` is the coefficient of
``l_1 * ... * l_n`` in ``Vol(l_1 P_1 + ... + l_n P_n)``, *not* divided by
``n!``.  Hence ``Mvol(P, ..., P) == n! * Vol(P)``, and Mvol equals the generic
number of torus roots of a Laurent system with these Newton polytopes.

* :func:`mixed_volume` sums ``|det|`` over the mixed cells of a random
  lifting (depth-first enumeration with exact LP pruning).
* :func:`mv_via_interpolation` interpolates the volume polynomial of the
  Minkowski sum on an integer grid and reads off the mixed coefficient.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from . import lp
from .linalg import det, dot, solve, sub
from .polytope import Polytope, _canonical_normal, minkowski_sum_all, pulling_triangulation

LIFT_BITS = 20
MAX_LIFT_ATTEMPTS = 5


class DegenerateLifting(RuntimeError):
    """The lifting is not generic enough; a new one must be sampled."""


@dataclass(frozen=True)
class LiftedSupport:
    points: tuple[tuple[int, ...], ...]
    lifts: tuple[int, ...]

    def __post_init__(self):
        if len(self.points) != len(self.lifts):
            raise ValueError("one lift per point")


@dataclass(frozen=True)
class MixedCell:
    """One point pair per support; ``normal`` is the cell's inner normal ``v``.

    The lifted points of every pair minimize ``<a, v> + lift(a)`` over their
    support, strictly below every other point of that support.
    """

    pairs: tuple[tuple[int, int], ...]
    volume_contribution: int
    normal: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "det": self.volume_contribution}


@dataclass(frozen=True)
class MixedVolumeAudit:
    total: int
    cells: tuple[MixedCell, ...]
    lifting: tuple[LiftedSupport, ...]
    seed: int
    attempts: int

    def to_json(self) -> dict:
        return {
            "cells": [c.to_json() for c in self.cells],
            "total": self.total,
            "liftingSeed": self.seed,
        }


def _as_lattice_points(points, n) -> list[tuple[int, ...]]:
    out = []
    for p in points:
        if len(p) != n:
            raise ValueError("point dimension mismatch")
        q = tuple(Fraction(c) for c in p)
        if any(c.denominator != 1 for c in q):
            raise ValueError("mixed volumes are computed for lattice polytopes only")
        out.append(tuple(int(c) for c in q))
    return sorted(set(out))


def sample_lifting(supports: Sequence[Sequence[tuple[int, ...]]], rng: random.Random, bits: int = LIFT_BITS) -> list[LiftedSupport]:
    return [
        LiftedSupport(tuple(pts), tuple(rng.randrange(2**bits) for _ in pts))
        for pts in supports
    ]


def _pair_constraints(ls: LiftedSupport, p: int, q: int):
    """Constraints on v making lifted points p, q tie for the minimum."""
    pts, w = ls.points, ls.lifts
    ap = pts[p]
    eq = (sub(pts[q], ap), w[p] - w[q])
    ineq = [(sub(pts[r], ap), w[p] - w[r]) for r in range(len(pts)) if r != p and r != q]
    return eq, ineq


def _lower_edges(ls: LiftedSupport) -> list[tuple[int, int]]:
    out = []
    for p, q in itertools.combinations(range(len(ls.points)), 2):
        eq, ineq = _pair_constraints(ls, p, q)
        if lp.feasible([a for a, _ in ineq], [b for _, b in ineq], [eq[0]], [eq[1]], nvars=len(eq[0])):
            out.append((p, q))
    return out


def mixed_cells(supports: Sequence[Sequence[tuple[int, ...]]], lifting: Sequence[LiftedSupport]) -> list[MixedCell]:
    """All mixed cells of type (1, ..., 1) for the given lifting.

    Raises :class:`DegenerateLifting` when a tie shows the lifting is not
    generic (a candidate normal attains the minimum on a third point, or a
    singular pair tuple is feasible).
    """
    n = len(supports)
    if len(lifting) != n:
        raise ValueError("one lifted support per support")
    for s, ls in zip(supports, lifting):
        if tuple(s) != ls.points:
            raise ValueError("lifting does not match supports")
    if n == 0 or any(len(s) < 2 for s in supports):
        return []
    edges = [_lower_edges(ls) for ls in lifting]
    order = sorted(range(n), key=lambda i: (len(edges[i]), i))
    cells: list[MixedCell] = []

    def recurse(level: int, chosen: dict[int, tuple[int, int]], eqs: list, ineqs: list):
        if level == n:
            _finish(chosen, eqs, ineqs)
            return
        i = order[level]
        for p, q in edges[i]:
            eq, ineq = _pair_constraints(lifting[i], p, q)
            eqs2 = eqs + [eq]
            ineqs2 = ineqs + ineq
            if level + 1 < n and not lp.feasible(
                [a for a, _ in ineqs2], [b for _, b in ineqs2],
                [a for a, _ in eqs2], [b for _, b in eqs2], nvars=n,
            ):
                continue
            chosen[i] = (p, q)
            recurse(level + 1, chosen, eqs2, ineqs2)
            del chosen[i]

    def _finish(chosen, eqs, ineqs):
        # eqs are listed in DFS order; rebuild in support order for the det sign
        mat = [sub(lifting[i].points[chosen[i][1]], lifting[i].points[chosen[i][0]]) for i in range(n)]
        v = solve([a for a, _ in eqs], [b for _, b in eqs])
        if v is None:
            if lp.feasible([a for a, _ in ineqs], [b for _, b in ineqs], [a for a, _ in eqs], [b for _, b in eqs], nvars=n):
                raise DegenerateLifting("a singular pair tuple supports a lower face")
            return
        for a, b in ineqs:
            s = dot(a, v) - b
            if s < 0:
                return
            if s == 0:
                raise DegenerateLifting("lifted minimum attained by more than two points")
        pairs = tuple(chosen[i] for i in range(n))
        cells.append(MixedCell(pairs, abs(det(mat)), tuple(v)))

    recurse(0, {}, [], [])
    cells.sort(key=lambda c: c.pairs)
    return cells


def _check_input(polytopes: Sequence[Polytope]) -> int:
    n = len(polytopes)
    if n == 0:
        raise ValueError("need at least one polytope")
    for P in polytopes:
        if P.n != n:
            raise ValueError(f"expected {n} polytopes in R^{n}, got one in R^{P.n}")
    return n


def mixed_volume_audit(polytopes: Sequence[Polytope], seed: int = 0) -> MixedVolumeAudit:
    n = _check_input(polytopes)
    supports = [_as_lattice_points(P.vertices, n) for P in polytopes]
    rng = random.Random(f"{seed}:lifting")
    for attempt in range(1, MAX_LIFT_ATTEMPTS + 1):
        lifting = sample_lifting(supports, rng)
        try:
            cells = mixed_cells(supports, lifting)
        except DegenerateLifting:
            continue
        total = sum(c.volume_contribution for c in cells)
        return MixedVolumeAudit(total, tuple(cells), tuple(lifting), seed, attempt)
    raise DegenerateLifting(f"no generic lifting found in {MAX_LIFT_ATTEMPTS} attempts")


def mixed_volume(polytopes: Sequence[Polytope], seed: int = 0) -> int:
    return mixed_volume_audit(polytopes, seed).total


# -- interpolation oracle --------------------------------------------------------


def _homogeneous_monomials(n: int) -> list[tuple[int, ...]]:
    out = []
    for combo in itertools.combinations_with_replacement(range(n), n):
        e = [0] * n
        for k in combo:
            e[k] += 1
        out.append(tuple(e))
    return sorted(out)


def _eval_monomial(e, lam) -> int:
    out = 1
    for k, x in zip(e, lam):
        out *= x**k
    return out


_GRID_PRIME = (1 << 61) - 1


@lru_cache(maxsize=None)
def interpolation_grid(n: int) -> tuple[tuple[int, ...], ...]:
    """Points of {1..n}^n, in lexicographic order, that make the degree-n
    homogeneous interpolation problem uniquely solvable.

    Independence is tested modulo a prime, which is enough: a nonzero
    determinant mod p is nonzero over Q.
    """
    P = _GRID_PRIME
    monos = _homogeneous_monomials(n)
    chosen: list[tuple[int, ...]] = []
    basis: list[tuple[int, list[int]]] = []
    for lam in itertools.product(range(1, n + 1), repeat=n):
        row = [_eval_monomial(e, lam) % P for e in monos]
        for pc, b in basis:
            f = row[pc]
            if f:
                row = [(x - f * y) % P for x, y in zip(row, b)]
        pc = next((k for k, x in enumerate(row) if x), None)
        if pc is None:
            continue
        inv = pow(row[pc], -1, P)
        basis.append((pc, [x * inv % P for x in row]))
        chosen.append(lam)
        if len(chosen) == len(monos):
            return tuple(chosen)
    raise ArithmeticError(f"grid {{1..{n}}}^{n} is not unisolvent")


def _last_unknown(A: list[list[int]], b: list[int]) -> Fraction:
    """Last coordinate of the solution of the nonsingular integer system ``A x = b``.

    Bareiss elimination leaves ``det(A) * x_last`` and ``det(A)`` (up to a
    common sign) in the final row.
    """
    m = [list(r) + [bi] for r, bi in zip(A, b)]
    k = len(m)
    prev = 1
    for i in range(k):
        if m[i][i] == 0:
            r = next((r for r in range(i + 1, k) if m[r][i]), None)
            if r is None:
                raise ArithmeticError("singular interpolation matrix")
            m[i], m[r] = m[r], m[i]
        piv = m[i][i]
        mi = m[i]
        for r in range(i + 1, k):
            mr = m[r]
            f = mr[i]
            for c in range(i + 1, k + 1):
                mr[c] = (mr[c] * piv - f * mi[c]) // prev
            mr[i] = 0
        prev = piv
    return Fraction(m[k - 1][k], m[k - 1][k - 1])


def _vertex_labels(S: Polytope, polytopes: Sequence[Polytope]) -> list[tuple[int, ...]]:
    """Decompose each vertex of the Minkowski sum ``S`` into summand vertices."""
    labels = []
    for i, s in enumerate(S.vertices):
        u = _canonical_normal(S, frozenset({i}))
        lab = []
        for P in polytopes:
            vals = [dot(u, p) for p in P.vertices]
            m = min(vals)
            arg = [k for k, x in enumerate(vals) if x == m]
            if len(arg) != 1:
                raise ArithmeticError("vertex normal does not isolate a summand vertex")
            lab.append(arg[0])
        check = tuple(sum(P.vertices[k][c] for P, k in zip(polytopes, lab)) for c in range(S.n))
        if check != s:
            raise ArithmeticError("vertex decomposition mismatch")
        labels.append(tuple(lab))
    return labels


def minkowski_volume_function(polytopes: Sequence[Polytope]):
    """Return ``vol(lams)`` giving Vol(sum lam_i P_i) exactly for positive lams.

    The sum's combinatorial type does not depend on positive weights, so one
    triangulation of the unweighted sum serves every weight vector.
    """
    n = _check_input(polytopes)
    S = minkowski_sum_all(polytopes)
    if S.dim < n:
        return lambda lams: Fraction(0)
    labels = _vertex_labels(S, polytopes)
    simplices = pulling_triangulation(S)

    verts = [[tuple(int(c) for c in v) for v in P.vertices] for P in polytopes]

    def vol(lams: Sequence) -> Fraction:
        lams = [Fraction(x) for x in lams]
        if any(x <= 0 for x in lams):
            raise ValueError("weights must be positive")
        if all(x.denominator == 1 for x in lams):
            ilams = [int(x) for x in lams]
            icoords = [
                tuple(sum(l * vs[k][c] for l, vs, k in zip(ilams, verts, lab)) for c in range(n))
                for lab in labels
            ]
            itotal = 0
            for s in simplices:
                p0 = icoords[s[0]]
                itotal += abs(det([sub(icoords[j], p0) for j in s[1:]]))
            return Fraction(itotal, factorial(n))
        coords = [
            tuple(sum(l * P.vertices[k][c] for l, P, k in zip(lams, polytopes, lab)) for c in range(n))
            for lab in labels
        ]
        total = Fraction(0)
        for s in simplices:
            p0 = coords[s[0]]
            rows = [sub(coords[j], p0) for j in s[1:]]
            total += abs(_fdet(rows))
        return total / factorial(n)

    return vol


def _fdet(rows):
    if all(x.denominator == 1 for r in rows for x in r):
        return Fraction(det([[int(x) for x in r] for r in rows]))
    red = [list(r) for r in rows]
    k = len(red)
    out = Fraction(1)
    for c in range(k):
        p = next((r for r in range(c, k) if red[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            red[c], red[p] = red[p], red[c]
            out = -out
        out *= red[c][c]
        for r in range(c + 1, k):
            f = red[r][c] / red[c][c]
            red[r] = [a - f * b for a, b in zip(red[r], red[c])]
    return out


def mv_via_interpolation(polytopes: Sequence[Polytope]) -> int:
    n = _check_input(polytopes)
    for P in polytopes:
        _as_lattice_points(P.vertices, n)
    vol = minkowski_volume_function(polytopes)
    target = (1,) * n
    monos = [e for e in _homogeneous_monomials(n) if e != target] + [target]
    grid = interpolation_grid(n)
    A = [[_eval_monomial(e, lam) for e in monos] for lam in grid]
    # n! Vol is an integer at integer weights
    b = [int(vol(lam) * factorial(n)) for lam in grid]
    c = _last_unknown(A, b) / factorial(n)
    if c.denominator != 1:
        raise ArithmeticError(f"non-integral mixed volume {c}")
    return int(c)
