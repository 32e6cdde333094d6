"""Algebraic Kuramoto systems and their certified generic root counts.

For a network of ``n + 1`` oscillators with node 0 as reference (``x_0 = 1``)
the equations are

    f_i(x) = w_i - sum_j a_ij (x_i / x_j - x_j / x_i),   i = 1..n,

so ``f_i`` lies in ``L_i = span({1} | {P_ij : j adjacent to i})`` with
``P_ij = x_i/x_j - x_j/x_i``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .certify import IntersectionIndexResult, intersection_index
from .linalg import as_fraction
from .polynomial import LaurentPolynomial, SpanSpace, support, uniform_rational


class NetworkError(ValueError):
    pass


class DegenerateNetwork(NetworkError):
    """A non-reference node has no incident edge."""

    def __init__(self, nodes: Sequence[int]):
        self.nodes = tuple(nodes)
        super().__init__(f"isolated oscillator(s) {list(self.nodes)}: span{{1}} has no roots")


@dataclass(frozen=True)
class OscillatorNetwork:
    """Undirected coupling graph on nodes 0..n; ``weight`` None means random."""

    node_count: int
    edges: tuple[tuple[int, int, Fraction | None], ...]
    frequencies: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.node_count < 2:
            raise NetworkError("need at least two oscillators")
        seen = set()
        clean = []
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            w = e[2] if len(e) > 2 else None
            if i == j:
                raise NetworkError(f"self-loop at node {i}")
            if not (0 <= i < self.node_count and 0 <= j < self.node_count):
                raise NetworkError(f"edge ({i}, {j}) out of range 0..{self.node_count - 1}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise NetworkError(f"duplicate edge {key}")
            seen.add(key)
            if w is not None:
                w = as_fraction(w)
                if w == 0:
                    raise NetworkError(f"zero weight on edge {key}")
            clean.append((key[0], key[1], w))
        object.__setattr__(self, "edges", tuple(sorted(clean)))
        if self.frequencies is not None:
            if len(self.frequencies) != self.n:
                raise NetworkError("need one frequency per non-reference node")
            object.__setattr__(self, "frequencies", tuple(as_fraction(w) for w in self.frequencies))

    @property
    def n(self) -> int:
        return self.node_count - 1

    def neighbours(self, i: int) -> list[int]:
        out = []
        for a, b, _ in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)

    def weight(self, i: int, j: int) -> Fraction | None:
        key = (min(i, j), max(i, j))
        for a, b, w in self.edges:
            if (a, b) == key:
                return w
        raise KeyError(key)

    @classmethod
    def complete(cls, n: int) -> "OscillatorNetwork":
        return cls(n + 1, tuple((i, j, None) for i, j in itertools.combinations(range(n + 1), 2)))

    @classmethod
    def path(cls, n: int) -> "OscillatorNetwork":
        return cls(n + 1, tuple((i, i + 1, None) for i in range(n)))

    def relabel(self, perm: Sequence[int]) -> "OscillatorNetwork":
        """Apply ``perm`` (a permutation of 1..n, as a list) to nodes 1..n."""
        mapping = {0: 0, **{k + 1: p for k, p in enumerate(perm)}}
        return OscillatorNetwork(self.node_count, tuple((mapping[i], mapping[j], w) for i, j, w in self.edges))


def parse_graph(text: str) -> OscillatorNetwork:
    """Parse ``nodes <n+1>`` followed by ``i j [weight]`` lines (``#`` comments)."""
    nodes = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "nodes":
            if nodes is not None or len(parts) != 2:
                raise NetworkError(f"line {lineno}: bad header {raw!r}")
            nodes = int(parts[1])
            continue
        if nodes is None:
            raise NetworkError(f"line {lineno}: edge before 'nodes' header")
        if len(parts) not in (2, 3):
            raise NetworkError(f"line {lineno}: expected 'i j [weight]', got {raw!r}")
        try:
            w = Fraction(parts[2]) if len(parts) == 3 else None
            edges.append((int(parts[0]), int(parts[1]), w))
        except ValueError as exc:
            raise NetworkError(f"line {lineno}: {exc}") from None
    if nodes is None:
        raise NetworkError("missing 'nodes <count>' header")
    return OscillatorNetwork(nodes, tuple(edges))


def read_graph(path: str | Path) -> OscillatorNetwork:
    return parse_graph(Path(path).read_text())


def format_graph(net: OscillatorNetwork) -> str:
    lines = [f"nodes {net.node_count}"]
    for i, j, w in net.edges:
        lines.append(f"{i} {j}" if w is None else f"{i} {j} {w}")
    return "\n".join(lines) + "\n"


def coupling_polynomial(i: int, j: int, n: int) -> LaurentPolynomial:
    """``x_i/x_j - x_j/x_i`` in variables x_1..x_n, with ``x_0 = 1``."""
    if i == j:
        raise ValueError("coupling needs two distinct nodes")
    if not (1 <= i <= n and 0 <= j <= n):
        raise ValueError(f"indices ({i}, {j}) out of range for n = {n}")
    e = [0] * n
    e[i - 1] += 1
    if j:
        e[j - 1] -= 1
    return LaurentPolynomial(n, {tuple(e): 1, tuple(-x for x in e): -1})


def build_spaces(net: OscillatorNetwork) -> list[SpanSpace]:
    n = net.n
    isolated = [i for i in range(1, n + 1) if not net.neighbours(i)]
    if isolated:
        raise DegenerateNetwork(isolated)
    one = LaurentPolynomial.constant(n)
    return [
        SpanSpace(n, (one, *(coupling_polynomial(i, j, n) for j in net.neighbours(i))))
        for i in range(1, n + 1)
    ]


def kuramoto_root_count(net: OscillatorNetwork, seed: int = 0) -> IntersectionIndexResult:
    return intersection_index(build_spaces(net), seed)


@dataclass(frozen=True)
class KuramotoSystem:
    spaces: tuple[SpanSpace, ...]
    frequencies: tuple
    couplings: dict  # (i, j) -> a_ij, directed
    seed: int
    sampler: str
    rational: tuple[LaurentPolynomial, ...] | None = None
    complex_terms: tuple[dict, ...] | None = None

    @property
    def polynomials(self):
        return self.rational if self.rational is not None else self.complex_terms


def _complex_sample(rng: random.Random) -> complex:
    return complex(rng.gauss(0, 1), rng.gauss(0, 1))


def instantiate(
    net: OscillatorNetwork,
    seed: int = 0,
    sampler: str = "rational",
    symmetric: bool = False,
    max_attempts: int = 8,
) -> KuramotoSystem:
    """Concrete Kuramoto system with random frequencies and couplings.

    ``sampler`` is ``"rational"`` (exact, for elimination) or ``"complex"``
    (floating, for homotopy continuation).  Given weights and frequencies
    in ``net`` are used as-is; ``symmetric`` forces ``a_ij == a_ji`` for the
    random ones.
    """
    if sampler not in ("rational", "complex"):
        raise ValueError(f"unknown sampler {sampler!r}")
    spaces = tuple(build_spaces(net))
    n = net.n
    rng = random.Random(f"{seed}:coefficients")
    draw = uniform_rational if sampler == "rational" else _complex_sample
    for _ in range(max_attempts):
        freqs = tuple(net.frequencies) if net.frequencies is not None else tuple(draw(rng) for _ in range(n))
        coup: dict[tuple[int, int], object] = {}
        for i, j, w in net.edges:
            for a, b in ((i, j), (j, i)):
                if a == 0:
                    continue
                if w is not None:
                    coup[(a, b)] = w
                elif symmetric and (b, a) in coup:
                    coup[(a, b)] = coup[(b, a)]
                else:
                    coup[(a, b)] = draw(rng)
        if sampler == "rational":
            polys = []
            for i in range(1, n + 1):
                f = LaurentPolynomial.constant(n, freqs[i - 1])
                for j in net.neighbours(i):
                    f = f - coupling_polynomial(i, j, n).scale(coup[(i, j)])
                polys.append(f)
            if all(support(f) == L.union_support() for f, L in zip(polys, spaces)):
                return KuramotoSystem(spaces, freqs, coup, seed, sampler, rational=tuple(polys))
        else:
            systems = []
            for i in range(1, n + 1):
                terms: dict[tuple[int, ...], complex] = {(0,) * n: complex(freqs[i - 1])}
                for j in net.neighbours(i):
                    for a, c in coupling_polynomial(i, j, n).terms.items():
                        terms[a] = terms.get(a, 0) - complex(coup[(i, j)]) * float(c)
                systems.append(terms)
            if all(set(k for k, c in t.items() if c != 0) == L.union_support() for t, L in zip(systems, spaces)):
                return KuramotoSystem(spaces, freqs, coup, seed, sampler, complex_terms=tuple(systems))
    raise RuntimeError("coefficient cancellation persisted; network weights may be degenerate")

