"""Certify that a tuple of span spaces has intersection index = mixed volume.

The sufficient condition checked here: every Newton polytope Newt(L_i) is
full-dimensional, and each of its positive-dimensional proper faces meets
the Newton polytope of every generator of L_i in at most one point.  When it
holds, generic members of the spaces have exactly Mvol(Newt(L_1), ...,
Newt(L_n)) common zeros in the torus.  A refusal means "not certified"; it
makes no claim that the index differs from the mixed volume.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import primitive
from .mixed_volume import MixedVolumeAudit, mixed_volume_audit, mv_via_interpolation
from .polynomial import (
    LaurentPolynomial,
    SpanSpace,
    initial_form,
    is_monomial_unit,
    newton_polytope,
    space_newton_polytope,
)
from .polytope import (
    Meet,
    Polytope,
    enumerate_proper_faces,
    face_in_direction,
    face_meets_subpolytope,
    minkowski_sum_all,
)


class ConsistencyError(RuntimeError):
    """Two independent computations disagreed: a bug, never an input problem."""


class ConditionViolated(ValueError):
    pass


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Violation:
    face_id: int
    face_dim: int
    face_vertices: tuple[tuple[Fraction, ...], ...]
    generator: int
    normal: tuple[int, ...]
    classification: Meet
    intersection_dim: int
    intersection_vertices: tuple[tuple[Fraction, ...], ...]

    def to_json(self) -> dict:
        return {
            "faceId": self.face_id,
            "faceDim": self.face_dim,
            "faceVertices": [[_frac(c) for c in p] for p in self.face_vertices],
            "generator": self.generator,
            "normal": list(self.normal),
            "classification": self.classification.value,
            "intersectionDim": self.intersection_dim,
            "intersectionVertices": [[_frac(c) for c in p] for p in self.intersection_vertices],
        }


@dataclass(frozen=True)
class SpaceReport:
    index: int
    dim: int
    n: int
    faces_checked: int
    violations: tuple[Violation, ...]

    @property
    def dim_ok(self) -> bool:
        return self.dim == self.n

    @property
    def ok(self) -> bool:
        return self.dim_ok and not self.violations

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "dim": self.dim,
            "dimVerdict": "pass" if self.dim_ok else "fail",
            "facesChecked": self.faces_checked,
            "violations": [v.to_json() for v in self.violations],
        }


@dataclass(frozen=True)
class ConditionReport:
    n: int
    per_space: tuple[SpaceReport, ...]

    @property
    def overall(self) -> bool:
        return all(s.ok for s in self.per_space)

    @property
    def dim_failures(self) -> list[int]:
        return [s.index for s in self.per_space if not s.dim_ok]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "overall": self.overall,
            "perSpace": [s.to_json() for s in self.per_space],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _check_spaces(spaces: Sequence[SpanSpace]) -> int:
    if not spaces:
        raise ValueError("no spaces given")
    n = spaces[0].n
    for L in spaces:
        if L.n != n:
            raise ValueError("span spaces have different ambient dimensions")
    if len(spaces) != n:
        raise ValueError(f"need exactly {n} spaces in {n} variables, got {len(spaces)}")
    return n


def check_space(L: SpanSpace, index: int = 0) -> SpaceReport:
    P = space_newton_polytope(L)
    gens = [newton_polytope(g) for g in L.generators]
    faces = enumerate_proper_faces(P, 1) if P.dim >= 1 else []
    violations = []
    for fid, F in enumerate(faces):
        for j, Q in enumerate(gens):
            meet, witness = face_meets_subpolytope(F, Q)
            if meet is Meet.POSITIVE_DIM:
                violations.append(
                    Violation(
                        fid, F.dim, F.vertices, j, F.normal, meet, witness.dim, witness.vertices
                    )
                )
    return SpaceReport(index, P.dim, L.n, len(faces), tuple(violations))


def check_main_condition(spaces: Sequence[SpanSpace]) -> ConditionReport:
    n = _check_spaces(spaces)
    return ConditionReport(n, tuple(check_space(L, i) for i, L in enumerate(spaces)))


class Status(enum.Enum):
    CERTIFIED = "certified"
    REFUSED = "refused"


@dataclass(frozen=True)
class IntersectionIndexResult:
    status: Status
    report: ConditionReport
    value: int | None = None
    audit: MixedVolumeAudit | None = None
    interpolation_value: int | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out: dict = {"status": self.status.value, "report": self.report.to_json()}
        if self.status is Status.CERTIFIED:
            out["value"] = self.value
            out["mixedVolumeAudit"] = {
                "cells": self.audit.to_json()["cells"],
                "total": self.audit.total,
                "liftingSeed": self.audit.seed,
                "interpolationValue": self.interpolation_value,
            }
        else:
            out["reason"] = self.reason
        return out


def _refusal_reason(report: ConditionReport) -> str:
    parts = []
    for s in report.per_space:
        if not s.dim_ok:
            parts.append(f"space {s.index}: dim(Newt) = {s.dim} < {s.n}")
        if s.violations:
            parts.append(f"space {s.index}: {len(s.violations)} face(s) meet a generator polytope in a segment or more")
    return "; ".join(parts)


def intersection_index(spaces: Sequence[SpanSpace], seed: int = 0) -> IntersectionIndexResult:
    report = check_main_condition(spaces)
    if not report.overall:
        return IntersectionIndexResult(Status.REFUSED, report, reason=_refusal_reason(report))
    polys = [space_newton_polytope(L) for L in spaces]
    audit = mixed_volume_audit(polys, seed)
    interp = mv_via_interpolation(polys)
    if interp != audit.total:
        raise ConsistencyError(f"mixed cells give {audit.total}, interpolation gives {interp}")
    return IntersectionIndexResult(Status.CERTIFIED, report, audit.total, audit, interp)


# -- proof mechanism ------------------------------------------------------------------


def relevant_directions(polytopes: Sequence[Polytope]) -> list[tuple[int, ...]]:
    """Primitive inner facet normals of the Minkowski sum, sorted."""
    S = minkowski_sum_all(list(polytopes))
    return sorted({primitive(f.normal) for f in S.facets})


@dataclass(frozen=True)
class RestrictedSupport:
    """Per space, the face points hit by generator polytopes in direction v.

    ``points[i]`` lists ``(a, generators)`` with ``generators`` the indices
    ``j`` whose polytope meets the face of Newt(L_i) exactly at ``a``.
    """

    direction: tuple[int, ...]
    points: tuple[tuple[tuple[tuple[Fraction, ...], tuple[int, ...]], ...], ...]

    def coefficients_independent(self) -> bool:
        """Each face point comes from exactly one generator, all distinct."""
        for per_space in self.points:
            seen: set[int] = set()
            for _, gens in per_space:
                if len(gens) != 1 or gens[0] in seen:
                    return False
                seen.add(gens[0])
        return True

    def counts(self) -> list[int]:
        return [len(p) for p in self.points]


def restricted_support(spaces: Sequence[SpanSpace], v: Sequence[int]) -> RestrictedSupport:
    _check_spaces(spaces)
    if not any(v):
        raise ValueError("direction must be nonzero")
    out = []
    for i, L in enumerate(spaces):
        P = space_newton_polytope(L)
        face = face_in_direction(P, v)
        h = P.support_value(v)
        hits: dict[tuple[Fraction, ...], list[int]] = {}
        for j, g in enumerate(L.generators):
            Q = newton_polytope(g)
            if Q.support_value(v) != h:
                continue
            G = face_in_direction(Q, v)
            if G.dim > 0:
                raise ConditionViolated(
                    f"space {i}: generator {j} meets the face in direction {tuple(v)} in a {G.dim}-dimensional set"
                )
            a = G.vertices[0]
            assert face.parent.contains_point(a)
            hits.setdefault(a, []).append(j)
        out.append(tuple(sorted((a, tuple(js)) for a, js in hits.items())))
    return RestrictedSupport(tuple(int(x) for x in v), tuple(out))


@dataclass(frozen=True)
class InitialSystem:
    forms: tuple[LaurentPolynomial, ...]
    has_unit: bool


def initial_system(fs: Sequence[LaurentPolynomial], v: Sequence) -> InitialSystem:
    if not any(Fraction(x) for x in v):
        raise ValueError("direction must be nonzero")
    forms = tuple(initial_form(f, v) for f in fs)
    return InitialSystem(forms, any(is_monomial_unit(f) for f in forms))
