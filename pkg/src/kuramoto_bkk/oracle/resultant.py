"""Exact torus root counts by elimination (n = 1 and n = 2).

For two Laurent polynomials in (x1, x2): clear denominators with monomials,
eliminate x2 by a resultant, drop the factor x1, and take the squarefree
part ``r``.  Each root of ``r`` is then lifted symbolically: a gcd of the two
polynomials is computed in ``(Q[x1]/(r))[x2]``, splitting ``r`` whenever a
leading coefficient is a zero divisor.  Every branch must end with a gcd of
degree 1 in x2 (one point above each of its x1 roots; it counts when that
point has x2 != 0) or degree 0 (nothing above those x1).  Anything else is
reported as indeterminate rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy as sp

from ..polynomial import LaurentPolynomial

X1, X2 = sp.symbols("x1 x2")


class NonFiniteRootSet(ValueError):
    pass


@dataclass
class RootCountReport:
    count: int | None
    method: str
    status: str = "exact"  # exact | indeterminate | numerical
    paths: int = 0
    failures: int = 0
    residual_max: float = 0.0
    seed: int | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "count": self.count,
            "status": self.status,
            "paths": self.paths,
            "failures": self.failures,
            "residualMax": self.residual_max,
            "seed": self.seed,
            "diagnostics": self.diagnostics,
        }


def _cleared(f: LaurentPolynomial, gens) -> sp.Poly:
    lo = [min(a[k] for a in f.terms) for k in range(f.n)]
    expr = 0
    for a, c in f.terms.items():
        mono = sp.Rational(c.numerator, c.denominator)
        for g, e, m in zip(gens, a, lo):
            mono *= g ** (e - m)
        expr += mono
    return sp.Poly(expr, *gens, domain="QQ")


def count_torus_roots_univariate(f: LaurentPolynomial) -> RootCountReport:
    if f.n != 1:
        raise ValueError("univariate count needs n = 1")
    if f.is_zero():
        raise NonFiniteRootSet("zero polynomial vanishes everywhere")
    p = _cleared(f, [X1])
    sqf = sp.quo(p, sp.gcd(p, p.diff(X1)))
    defect = p.degree() - sqf.degree()
    if defect:
        return RootCountReport(None, "resultant", "indeterminate", diagnostics={"squarefreeDefect": defect})
    return RootCountReport(sqf.degree(), "resultant", paths=sqf.degree())


# -- arithmetic in (Q[x1]/(r))[x2]; polys in x2 are coefficient lists, highest first


def _normalize(r: sp.Poly, coeffs: list):
    """Yield ``(r_k, coeffs_k)`` with leading coefficient a unit mod ``r_k``.

    ``r`` is squarefree, so a zero-divisor leading coefficient splits it into
    coprime parts; on the part where it vanishes the coefficient is dropped.
    """
    coeffs = [c.rem(r) for c in coeffs]
    while coeffs and coeffs[0].is_zero:
        coeffs.pop(0)
    if not coeffs:
        yield r, []
        return
    g = sp.gcd(coeffs[0], r)
    if g.degree() <= 0:
        yield r, coeffs
        return
    yield from _normalize(g, coeffs[1:])
    yield from _normalize(sp.quo(r, g), coeffs)


def _rem(f: list, g: list, r: sp.Poly) -> list:
    inv = g[0].invert(r)
    f = list(f)
    while len(f) >= len(g):
        q = (f[0] * inv).rem(r)
        for k in range(len(g)):
            f[k] = (f[k] - q * g[k]).rem(r)
        f.pop(0)
    return f


def _gcd_branches(r: sp.Poly, f: list, g: list):
    for r1, fn in _normalize(r, f):
        for r2, gn in _normalize(r1, g):
            fn2 = [c.rem(r2) for c in fn]
            if not fn2 and not gn:
                raise NonFiniteRootSet("both equations vanish identically above some x1 roots")
            if not gn or not fn2:
                h = gn or fn2
                # leading coefficient of fn is a unit mod r1, hence mod r2
                yield from _monic(r2, h)
                continue
            if len(fn2) < len(gn):
                fn2, gn = gn, fn2
            yield from _gcd_branches(r2, gn, _rem(fn2, gn, r2))


def _monic(r: sp.Poly, h: list):
    for rk, hk in _normalize(r, h):
        inv = hk[0].invert(rk)
        yield rk, [(c * inv).rem(rk) for c in hk]


def _as_x2_coeffs(p: sp.Poly) -> list:
    d = p.degree(X2)
    out = [sp.Poly(0, X1, domain="QQ") for _ in range(d + 1)]
    for (e1, e2), c in p.terms():
        out[d - e2] += sp.Poly(c * X1**e1, X1, domain="QQ")
    return out


def count_torus_roots_bivariate(f1: LaurentPolynomial, f2: LaurentPolynomial) -> RootCountReport:
    """Exact number of common zeros of ``f1, f2`` in (C*)^2."""
    if f1.n != 2 or f2.n != 2:
        raise ValueError("bivariate count needs n = 2")
    if f1.is_zero() or f2.is_zero():
        raise NonFiniteRootSet("zero polynomial in the system")
    if len(f1) == 1 or len(f2) == 1:
        return RootCountReport(0, "resultant", diagnostics={"unitComponent": True})
    F1 = _cleared(f1, [X1, X2])
    F2 = _cleared(f2, [X1, X2])
    if F1.degree(X2) == 0 and F2.degree(X2) == 0:
        raise NonFiniteRootSet("neither equation involves x2")
    R = sp.Poly(sp.resultant(F1.as_expr(), F2.as_expr(), X2), X1, domain="QQ")
    if R.is_zero:
        raise NonFiniteRootSet("resultant vanishes identically (common factor)")
    while R.degree() > 0 and R.eval(0) == 0:
        R = sp.quo(R, sp.Poly(X1, X1, domain="QQ"))
    r = sp.quo(R, sp.gcd(R, R.diff(X1)))
    diag = {"resultantDegree": R.degree(), "squarefreeDegree": r.degree()}
    if r.degree() < R.degree():
        diag["squarefreeDefect"] = R.degree() - r.degree()
        return RootCountReport(None, "resultant", "indeterminate", diagnostics=diag)
    if r.degree() == 0:
        return RootCountReport(0, "resultant", diagnostics=diag)
    count = 0
    branches = 0
    for rk, h in _gcd_branches(r, _as_x2_coeffs(F1), _as_x2_coeffs(F2)):
        branches += 1
        deg = len(h) - 1
        if deg == 0:
            continue
        if deg > 1:
            diag["fiberDegree"] = deg
            return RootCountReport(None, "resultant", "indeterminate", diagnostics=diag)
        # x2 = -h[1]; it is a torus point unless h[1] vanishes at the x1 root
        zero_part = sp.gcd(h[1], rk)
        count += rk.degree() - max(zero_part.degree(), 0)
    diag["branches"] = branches
    return RootCountReport(count, "resultant", paths=count, diagnostics=diag)
