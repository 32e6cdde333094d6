"""Exact convex polytopes in arbitrary dimension.

Hulls are computed by incremental beneath-beyond insertion on integer
coordinates (rational inputs are scaled by a common denominator first).
Non-simplicial facets are kept as such: points coplanar with a facet are
merged into it, so degenerate lattice point sets need no perturbation.
Lower-dimensional point sets are hulled in coordinates of their affine span.

All faces use the minimization convention: the face of ``P`` in direction
``v`` is the set of points minimizing ``<v, .>``, and facet inequalities
read ``<a, x> >= b`` with ``a`` a primitive integer inner normal.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterable, Sequence

from .linalg import (
    affine_rank,
    as_fraction,
    det,
    dot,
    integerize,
    nullspace,
    primitive,
    primitive_rational,
    rank,
    row_echelon,
    sub,
)

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]
    offset: Fraction
    vertices: frozenset[int]


class Polytope:
    """A convex polytope with matching V- and H-representations.

    ``vertices`` are sorted lexicographically; ``facets`` sorted by normal.
    For ``dim < n`` the affine hull is stored in ``equations`` as pairs
    ``(a, b)`` meaning ``<a, x> == b``, and facet normals are relative
    (they vanish on coordinates outside the chart used for the hull).
    """

    def __init__(self, n, vertices, facets, dim, equations, chart, scale, local):
        self.n: int = n
        self.vertices: tuple[Point, ...] = vertices
        self.facets: tuple[Facet, ...] = facets
        self.dim: int = dim
        self.equations: tuple[tuple[tuple[int, ...], Fraction], ...] = equations
        # integer coordinates of vertices in the affine chart (scaled by `scale`)
        self._chart = chart
        self._scale = scale
        self._local: tuple[tuple[int, ...], ...] = local

    def __repr__(self) -> str:
        return f"Polytope(n={self.n}, dim={self.dim}, vertices={len(self.vertices)}, facets={len(self.facets)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.n == other.n and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.n, self.vertices))

    @property
    def incidence(self) -> tuple[frozenset[int], ...]:
        """Facet -> vertex-index incidence, one set per facet."""
        return tuple(f.vertices for f in self.facets)

    @cached_property
    def _vertex_facets(self) -> tuple[frozenset[int], ...]:
        vf = [set() for _ in self.vertices]
        for k, f in enumerate(self.facets):
            for v in f.vertices:
                vf[v].add(k)
        return tuple(frozenset(s) for s in vf)

    def support_value(self, v: Sequence) -> Fraction:
        v = [as_fraction(x) for x in v]
        return min(dot(v, p) for p in self.vertices)

    def contains_point(self, x: Sequence) -> bool:
        x = [as_fraction(c) for c in x]
        if any(dot(a, x) != b for a, b in self.equations):
            return False
        if self.dim == 0:
            return tuple(x) == self.vertices[0]
        return all(dot(f.normal, x) >= f.offset for f in self.facets)

    def contains(self, other: "Polytope") -> bool:
        """Containment of ``other`` checked against this H-representation."""
        if other.n != self.n:
            return False
        return all(self.contains_point(p) for p in other.vertices)

    def translate(self, t: Sequence) -> "Polytope":
        t = [as_fraction(c) for c in t]
        return convex_hull([tuple(a + b for a, b in zip(p, t)) for p in self.vertices], self.n)

    def scaled(self, lam) -> "Polytope":
        lam = as_fraction(lam)
        return convex_hull([tuple(lam * a for a in p) for p in self.vertices], self.n)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertices": [[_q(c) for c in p] for p in self.vertices],
            "facets": [{"normal": list(f.normal), "offset": _q(f.offset)} for f in self.facets],
            "dim": self.dim,
            "equations": [{"normal": list(a), "offset": _q(b)} for a, b in self.equations],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Polytope":
        return convex_hull([[Fraction(c) for c in p] for p in data["vertices"]], int(data["n"]))


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# -- hull ---------------------------------------------------------------------


def _normal_through(points: Sequence[tuple[int, ...]]) -> tuple[int, ...]:
    """Primitive normal of the hyperplane through ``d`` independent points in Z^d."""
    p0 = points[0]
    rows = [sub(p, p0) for p in points[1:]]
    d = len(p0)
    if d == 2:
        (a, b), = rows
        return primitive((b, -a))
    if d == 3:
        (a0, a1, a2), (b0, b1, b2) = rows
        return primitive((a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0))
    out = []
    for k in range(d):
        minor = [r[:k] + r[k + 1:] for r in rows]
        out.append((-1) ** k * det(minor))
    return primitive(out)


def _independent_subset(points: Sequence[tuple[int, ...]], k: int) -> list[tuple[int, ...]]:
    """Greedily pick ``k + 1`` affinely independent points (k = affine rank)."""
    chosen = [points[0]]
    for p in points[1:]:
        if len(chosen) == k + 1:
            break
        if affine_rank(chosen + [p]) == len(chosen):
            chosen.append(p)
    return chosen


def _hull_full(pts: list[tuple[int, ...]], d: int):
    """Beneath-beyond hull of distinct integer points spanning Z^d (d >= 2).

    Returns (vertex indices, [(normal, offset, point-index set), ...]).
    """
    # insertion order: far from the centroid first, so most points test inside
    m = len(pts)
    cen = [sum(p[k] for p in pts) for k in range(d)]
    order = sorted(range(m), key=lambda i: (-sum((m * pts[i][k] - cen[k]) ** 2 for k in range(d)), pts[i]))

    simplex = [order[0]]
    for i in order[1:]:
        if affine_rank([pts[j] for j in simplex] + [pts[i]]) == len(simplex):
            simplex.append(i)
            if len(simplex) == d + 1:
                break

    facets: dict[int, list] = {}
    vert_facets: dict[int, set[int]] = defaultdict(set)
    next_id = 0

    def add_facet(normal, offset, verts):
        nonlocal next_id
        fid = next_id
        next_id += 1
        facets[fid] = [normal, offset, set(verts)]
        for v in verts:
            vert_facets[v].add(fid)
        return fid

    for omit in simplex:
        rest = [j for j in simplex if j != omit]
        a = _normal_through([pts[j] for j in rest])
        b = dot(a, pts[rest[0]])
        if dot(a, pts[omit]) < b:
            a = tuple(-x for x in a)
            b = -b
        add_facet(a, b, rest)

    in_simplex = set(simplex)
    for i in order:
        if i in in_simplex:
            continue
        p = pts[i]
        visible = []
        coplanar = []
        for fid, (a, b, _) in facets.items():
            s = dot(a, p) - b
            if s < 0:
                visible.append(fid)
            elif s == 0:
                coplanar.append(fid)
        if not visible:
            continue
        vis = set(visible)
        new: dict[tuple, set[int]] = {}
        for fid in visible:
            fverts = facets[fid][2]
            counts: dict[int, int] = defaultdict(int)
            for v in fverts:
                for g in vert_facets[v]:
                    if g not in vis:
                        counts[g] += 1
            for g, c in counts.items():
                if c < d - 1:
                    continue
                ridge = fverts & facets[g][2]
                rpts = [pts[v] for v in ridge]
                if affine_rank(rpts) != d - 2:
                    continue
                ga, gb, gverts = facets[g]
                if dot(ga, p) == gb:
                    continue  # g is coplanar with p and simply absorbs it
                base = _independent_subset(rpts, d - 2)
                a = _normal_through(base + [p])
                b = dot(a, p)
                witness = next(v for v in gverts if v not in ridge)
                if dot(a, pts[witness]) < b:
                    a = tuple(-x for x in a)
                    b = -b
                new.setdefault((a, b), set()).update(ridge)
        for fid in visible:
            for v in facets[fid][2]:
                vert_facets[v].discard(fid)
            del facets[fid]
        for fid in coplanar:
            facets[fid][2].add(i)
            vert_facets[i].add(fid)
        for (a, b), verts in new.items():
            verts.add(i)
            add_facet(a, b, verts)
        for v in [v for v, fs in vert_facets.items() if not fs]:
            del vert_facets[v]

    # keep only extreme points: tight facet normals must span R^d
    verts = []
    for v, fs in vert_facets.items():
        if rank([facets[f][0] for f in fs]) == d:
            verts.append(v)
    vset = set(verts)
    out = [(a, b, frozenset(vs & vset)) for a, b, vs in facets.values()]
    return sorted(verts), out


def convex_hull(points: Iterable[Sequence], n: int) -> Polytope:
    """Convex hull of a nonempty finite set of rational points in R^n."""
    raw = [tuple(as_fraction(c) for c in p) for p in points]
    if not raw:
        raise ValueError("convex hull of an empty point set")
    for p in raw:
        if len(p) != n:
            raise ValueError(f"point {p} is not in R^{n}")
    raw = sorted(set(raw))
    ipts, scale = integerize(raw)
    p0 = ipts[0]
    diffs = [sub(p, p0) for p in ipts[1:]]
    _, chart = row_echelon(diffs) if diffs else ([], [])
    d = len(chart)
    eq_normals = nullspace(diffs, n) if d < n else []
    if d < n and not diffs:
        eq_normals = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    equations = tuple(sorted((a, Fraction(dot(a, p0), scale)) for a in eq_normals))
    local = [tuple(p[k] for k in chart) for p in ipts]

    def lift(a_local):
        full = [0] * n
        for k, c in zip(chart, a_local):
            full[k] = c
        return tuple(full)

    if d == 0:
        return Polytope(n, (raw[0],), (), 0, equations, tuple(chart), scale, ((),))
    if d == 1:
        xs = [p[0] for p in local]
        lo, hi = xs.index(min(xs)), xs.index(max(xs))
        vidx = sorted({lo, hi})
        hull_facets = [((1,), min(xs), frozenset({lo})), ((-1,), -max(xs), frozenset({hi}))]
    else:
        vidx, hull_facets = _hull_full(local, d)

    remap = {old: new for new, old in enumerate(vidx)}
    facets = []
    for a, b, vs in hull_facets:
        facets.append(Facet(lift(a), Fraction(b, scale), frozenset(remap[v] for v in vs)))
    facets.sort(key=lambda f: (f.normal, f.offset))
    return Polytope(
        n,
        tuple(raw[i] for i in vidx),
        tuple(facets),
        d,
        equations,
        tuple(chart),
        scale,
        tuple(local[i] for i in vidx),
    )


def dim(P: Polytope) -> int:
    return P.dim


def support_value(P: Polytope, v: Sequence) -> Fraction:
    return P.support_value(v)


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    if P.n != Q.n:
        raise ValueError("dimension mismatch in Minkowski sum")
    return convex_hull([tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices], P.n)


def minkowski_sum_all(polys: Sequence[Polytope]) -> Polytope:
    out = polys[0]
    for P in polys[1:]:
        out = minkowski_sum(out, P)
    return out


# -- faces --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Face:
    """A face of ``parent``; ``vertex_set`` indexes ``parent.vertices``."""

    parent: Polytope
    normal: tuple[int, ...]
    vertex_set: frozenset[int]
    dim: int

    @property
    def key(self) -> tuple[int, tuple[int, ...]]:
        return (self.dim, tuple(sorted(self.vertex_set)))

    @property
    def vertices(self) -> tuple[Point, ...]:
        return tuple(self.parent.vertices[i] for i in sorted(self.vertex_set))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Face):
            return NotImplemented
        return self.parent is other.parent and self.vertex_set == other.vertex_set

    def __hash__(self) -> int:
        return hash(self.vertex_set)

    def __repr__(self) -> str:
        return f"Face(dim={self.dim}, vertices={[list(map(str, v)) for v in self.vertices]})"


def _face_dim(P: Polytope, vs: Iterable[int]) -> int:
    return affine_rank([P._local[i] for i in vs])


def face_in_direction(P: Polytope, v: Sequence) -> Face:
    v = [as_fraction(x) for x in v]
    if len(v) != P.n:
        raise ValueError("direction has wrong length")
    if all(x == 0 for x in v):
        raise ValueError("zero direction does not select a face")
    vals = [dot(v, p) for p in P.vertices]
    m = min(vals)
    vs = frozenset(i for i, x in enumerate(vals) if x == m)
    return Face(P, primitive_rational(v), vs, _face_dim(P, vs))


def _canonical_normal(P: Polytope, vs: frozenset[int]) -> tuple[int, ...]:
    total = [0] * P.n
    for f in P.facets:
        if vs <= f.vertices:
            total = [a + b for a, b in zip(total, f.normal)]
    return primitive(total)


def _subfaces(P: Polytope, face: frozenset[int], k: int) -> set[frozenset[int]]:
    """Facets (dimension k-1) of a k-dimensional face of P."""
    if k == P.dim:
        return {f.vertices for f in P.facets}
    vf = P._vertex_facets
    counts: dict[int, int] = defaultdict(int)
    for v in face:
        for g in vf[v]:
            counts[g] += 1
    out = set()
    for g, c in counts.items():
        if c < k or c == len(face):
            continue
        inter = face & P.facets[g].vertices
        if inter not in out and _face_dim(P, inter) == k - 1:
            out.add(inter)
    return out


def face_lattice(P: Polytope, min_dim: int = 0) -> list[frozenset[int]]:
    """All proper faces of dimension >= min_dim as vertex-index sets."""
    if P.dim < 1:
        return []
    faces: set[frozenset[int]] = set()
    level = {f.vertices for f in P.facets}
    k = P.dim - 1
    while k >= max(min_dim, 0):
        faces |= level
        if k == 0:
            break
        nxt: set[frozenset[int]] = set()
        for F in level:
            nxt |= _subfaces(P, F, k)
        level = nxt
        k -= 1
    return list(faces)


def enumerate_proper_faces(P: Polytope, min_dim: int = 1) -> list[Face]:
    """Every proper face of dimension >= ``min_dim``, canonically ordered.

    Each face carries the sum of the primitive normals of the facets
    containing it, which lies in the relative interior of its normal cone.
    """
    if P.dim < 1:
        raise ValueError("a point has no proper faces to enumerate")
    out = []
    for vs in face_lattice(P, min_dim):
        d = _face_dim(P, vs)
        if d < min_dim:
            continue
        out.append(Face(P, _canonical_normal(P, vs), vs, d))
    out.sort(key=lambda f: f.key)
    return out


class Meet(enum.Enum):
    EMPTY = "Empty"
    POINT = "Point"
    POSITIVE_DIM = "PositiveDim"


def face_meets_subpolytope(F: Face, Q: Polytope) -> tuple[Meet, Face | None]:
    """Classify ``F ∩ Q`` for ``Q`` contained in ``F.parent``.

    Returns the classification and the witness face of ``Q`` (None if empty).
    """
    P = F.parent
    if not P.contains(Q):
        raise ValueError("subpolytope is not contained in the face's parent")
    v = F.normal
    if Q.support_value(v) > P.support_value(v):
        return Meet.EMPTY, None
    G = face_in_direction(Q, v)
    return (Meet.POINT if G.dim == 0 else Meet.POSITIVE_DIM), G


# -- volume -------------------------------------------------------------------


def pulling_triangulation(P: Polytope) -> list[tuple[int, ...]]:
    """Pulling triangulation of P as tuples of vertex indices.

    The result depends only on the face lattice and the vertex order, so it
    stays valid for every polytope with the same combinatorial type.
    """
    if P.dim < 1:
        return [tuple(range(len(P.vertices)))]
    memo: dict[frozenset[int], list[tuple[int, ...]]] = {}

    def tri(face: frozenset[int], k: int) -> list[tuple[int, ...]]:
        if len(face) == k + 1:
            return [tuple(sorted(face))]
        if face in memo:
            return memo[face]
        apex = min(face)
        out = []
        for sub_face in sorted(_subfaces(P, face, k), key=sorted):
            if apex in sub_face:
                continue
            out.extend((apex,) + s for s in tri(sub_face, k - 1))
        memo[face] = out
        return out

    return tri(frozenset(range(len(P.vertices))), P.dim)


def simplex_volume_times_factorial(pts: Sequence[Sequence]) -> Fraction:
    """|det(p_i - p_0)| for a full-dimensional simplex, i.e. d! times its volume."""
    p0 = pts[0]
    rows = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    if all(isinstance(x, int) for r in rows for x in r):
        return Fraction(abs(det(rows)))
    ints, s = integerize(rows)
    return Fraction(abs(det(ints)), s ** len(rows))


def volume(P: Polytope) -> Fraction:
    """Exact n-dimensional Euclidean volume (0 unless full-dimensional)."""
    if P.dim < P.n:
        return Fraction(0)
    if P.n == 0:
        return Fraction(1)
    total = 0
    for s in pulling_triangulation(P):
        p0 = P._local[s[0]]
        total += abs(det([sub(P._local[i], p0) for i in s[1:]]))
    return Fraction(total, factorial(P.n) * P._scale ** P.n)
