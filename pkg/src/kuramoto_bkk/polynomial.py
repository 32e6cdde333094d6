"""Laurent polynomials with exact rational coefficients, and span spaces."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .linalg import as_fraction, dot

Exponent = tuple[int, ...]


class PolynomialSyntaxError(ValueError):
    """Raised for malformed polynomial text; ``pos`` is the 0-based offset."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


class CancellationError(RuntimeError):
    pass


@dataclass(frozen=True)
class LaurentPolynomial:
    """Finite map from integer exponent vectors to nonzero rationals.

    The empty map is the zero polynomial.
    """

    n: int
    terms: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[Exponent, Fraction] = {}
        for a, c in dict(self.terms).items():
            a = tuple(int(x) for x in a)
            if len(a) != self.n:
                raise ValueError(f"exponent {a} has length {len(a)}, expected {self.n}")
            c = as_fraction(c)
            if c != 0:
                clean[a] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def monomial(cls, a: Sequence[int], c=1) -> "LaurentPolynomial":
        return cls(len(a), {tuple(a): c})

    @classmethod
    def constant(cls, n: int, c=1) -> "LaurentPolynomial":
        return cls(n, {(0,) * n: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.terms.items())))

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, Fraction(0)) + c
        return LaurentPolynomial(self.n, out)

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial(self.n, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def scale(self, c) -> "LaurentPolynomial":
        c = as_fraction(c)
        return LaurentPolynomial(self.n, {a: c * v for a, v in self.terms.items()})

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.n}, {format_polynomial(self)!r})"

    def evaluate(self, x: Sequence[complex]) -> complex:
        total = 0
        for a, c in self.terms.items():
            term = complex(c)
            for xi, ai in zip(x, a):
                term *= xi**ai
            total += term
        return total


def support(f: LaurentPolynomial) -> frozenset[Exponent]:
    return frozenset(f.terms)


def initial_form(f: LaurentPolynomial, v: Sequence) -> LaurentPolynomial:
    """Restriction of ``f`` to the support points minimizing ``<v, .>``."""
    if f.is_zero():
        raise ValueError("initial form of the zero polynomial is undefined")
    if len(v) != f.n:
        raise ValueError("direction has wrong length")
    v = [as_fraction(x) for x in v]
    vals = {a: dot(v, a) for a in f.terms}
    m = min(vals.values())
    return LaurentPolynomial(f.n, {a: c for a, c in f.terms.items() if vals[a] == m})


def is_monomial_unit(f: LaurentPolynomial) -> bool:
    return len(f.terms) == 1


# -- text format -----------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x\d+)|(?P<op>[-+*^/]))"
)


def parse_polynomial(text: str, n: int) -> LaurentPolynomial:
    """Parse e.g. ``"3*x1^2*x2^-1 - 5 + x2"``.

    A term is an optional coefficient (integer or ``p/q``), an optional
    ``*``, then ``x<k>[^<int>]`` factors joined by ``*``.  ``x1/x2`` is accepted as
    ``x1*x2^-1``.
    """
    toks: list[tuple[str, str, int]] = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError("unexpected character", text, pos)
        start = m.start(m.lastgroup)
        toks.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    if not toks:
        raise PolynomialSyntaxError("empty polynomial", text, 0)

    i = 0
    terms: dict[Exponent, Fraction] = {}

    def peek():
        return toks[i] if i < len(toks) else ("end", "", len(text))

    def read_int() -> int:
        nonlocal i
        sign = 1
        kind, val, p = peek()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            kind, val, p = peek()
        if kind != "num" or "/" in val:
            raise PolynomialSyntaxError("expected integer exponent", text, p)
        i += 1
        return sign * int(val)

    first = True
    while i < len(toks):
        sign = 1
        kind, val, p = peek()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
        elif not first:
            raise PolynomialSyntaxError("expected '+' or '-'", text, p)
        first = False
        coeff = Fraction(sign)
        expo = [0] * n
        divide = False
        while True:
            kind, val, p = peek()
            if kind == "num":
                num, _, den = val.partition("/")
                if den and int(den) == 0:
                    raise PolynomialSyntaxError("zero denominator", text, p)
                c = Fraction(int(num), int(den or 1))
                if c == 0 and divide:
                    raise PolynomialSyntaxError("division by zero", text, p)
                coeff = coeff / c if divide else coeff * c
                i += 1
            elif kind == "var":
                k = int(val[1:])
                if not 1 <= k <= n:
                    raise PolynomialSyntaxError(f"variable x{k} out of range [1..{n}]", text, p)
                i += 1
                e = 1
                if peek()[0] == "op" and peek()[1] == "^":
                    i += 1
                    e = read_int()
                expo[k - 1] += -e if divide else e
            else:
                raise PolynomialSyntaxError("expected coefficient or variable", text, p)
            divide = False
            was_num = kind == "num"
            kind, val, p = peek()
            if kind == "op" and val in "*/":
                divide = val == "/"
                i += 1
                continue
            if was_num and kind == "var":
                continue  # "3 x1": the '*' after a coefficient is optional
            break
        a = tuple(expo)
        terms[a] = terms.get(a, Fraction(0)) + coeff
    return LaurentPolynomial(n, terms)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(f: LaurentPolynomial) -> str:
    if f.is_zero():
        return "0"
    parts = []
    # constant last, higher total degree first reads naturally
    for a, c in sorted(f.terms.items(), key=lambda t: (-sum(t[0]), [-x for x in t[0]])):
        factors = []
        for k, e in enumerate(a, start=1):
            if e == 1:
                factors.append(f"x{k}")
            elif e != 0:
                factors.append(f"x{k}^{e}")
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(mag) + "*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- span spaces -------------------------------------------------------------


@dataclass(frozen=True)
class SpanSpace:
    """The space spanned by an ordered list of nonzero Laurent polynomials."""

    n: int
    generators: tuple[LaurentPolynomial, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("a span space needs at least one generator")
        for g in gens:
            if g.n != self.n:
                raise ValueError("generator dimension mismatch")
            if g.is_zero():
                raise ValueError("zero generator")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def parse(cls, texts: Iterable[str], n: int) -> "SpanSpace":
        return cls(n, tuple(parse_polynomial(t, n) for t in texts))

    @property
    def m(self) -> int:
        return len(self.generators)

    def union_support(self) -> frozenset[Exponent]:
        out: set[Exponent] = set()
        for g in self.generators:
            out |= g.terms.keys()
        return frozenset(out)


Sampler = Callable[[random.Random], Fraction]


def uniform_rational(rng: random.Random, bits: int = 31) -> Fraction:
    """Random signed rational with numerator and denominator in [1, 2**bits]."""
    num = rng.randint(1, 2**bits)
    den = rng.randint(1, 2**bits)
    return Fraction(num if rng.random() < 0.5 else -num, den)


@dataclass(frozen=True)
class GenericElement:
    polynomial: LaurentPolynomial
    coefficients: tuple[Fraction, ...]
    seed: int
    attempts: int


def combine(space: SpanSpace, coeffs: Sequence) -> LaurentPolynomial:
    out = LaurentPolynomial(space.n, {})
    for c, g in zip(coeffs, space.generators):
        out = out + g.scale(c)
    return out


def random_element(
    space: SpanSpace,
    seed: int,
    sampler: Sampler = uniform_rational,
    max_attempts: int = 8,
    stream: int = 0,
) -> GenericElement:
    """Random linear combination of the generators, resampled on cancellation.

    The returned support always equals the union of the generator supports.
    Use a distinct ``stream`` per space of a system so coefficients differ.
    """
    rng = random.Random(f"{seed}:coefficients:{stream}")
    want = space.union_support()
    for attempt in range(1, max_attempts + 1):
        coeffs = tuple(sampler(rng) for _ in space.generators)
        f = combine(space, coeffs)
        if support(f) == want:
            return GenericElement(f, coeffs, seed, attempt)
    raise CancellationError(f"cancellation persisted after {max_attempts} samples")


def space_newton_polytope(space: SpanSpace):
    from .polytope import convex_hull

    pts = sorted(space.union_support())
    if not pts:
        raise ValueError("all generators are zero")
    return convex_hull(pts, space.n)


def newton_polytope(f: LaurentPolynomial):
    from .polytope import convex_hull

    if f.is_zero():
        raise ValueError("zero polynomial has no Newton polytope")
    return convex_hull(sorted(f.terms), f.n)
