"""Polyhedral homotopy continuation for small square Laurent systems.

Two stages.  First, a start system ``g`` with the target's supports and
random complex coefficients is solved by the polyhedral homotopy: each mixed
cell of a random lifting gives a binomial system, solved exactly via an
integer Hermite normal form, whose ``|det|`` solutions are tracked to
``g``.  Second, the gamma trick ``(1 - t) gamma g + t f`` carries those roots
to the target ``f``.  The number of paths is the mixed volume of the
target's Newton polytopes.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .. import kernels
from ..linalg import dot
from ..mixed_volume import DegenerateLifting, LiftedSupport, MixedCell, mixed_cells, sample_lifting
from ..polynomial import LaurentPolynomial
from .resultant import RootCountReport

ComplexSystem = list[dict[tuple[int, ...], complex]]

HOMOTOPY_LIFT_BITS = 5


@dataclass
class PathTrackerConfig:
    initial_step: float = 0.1
    min_step: float = 1e-12
    max_step: float = 0.1
    corrector_tol: float = 1e-10
    max_corrector_iters: int = 3
    refine_factor: float = 8.0
    torus_threshold: float = 1e-8
    residual_tol: float = 1e-8
    divergence_threshold: float = 1e8
    gamma: complex | None = None

    def __post_init__(self):
        for name in ("initial_step", "min_step", "max_step", "corrector_tol", "torus_threshold", "residual_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.gamma is not None:
            self.gamma = complex(self.gamma)
            if abs(abs(self.gamma) - 1) > 1e-12:
                raise ValueError("gamma must have modulus 1")

    @classmethod
    def from_dict(cls, data: Mapping) -> "PathTrackerConfig":
        data = dict(data)
        if isinstance(data.get("gamma"), (list, tuple)):
            data["gamma"] = complex(*data["gamma"])
        return cls(**data)

    def to_json(self) -> dict:
        out = asdict(self)
        if self.gamma is not None:
            out["gamma"] = [self.gamma.real, self.gamma.imag]
        return out


def as_complex_system(polys: Sequence) -> ComplexSystem:
    out = []
    for f in polys:
        if isinstance(f, LaurentPolynomial):
            out.append({a: complex(c) for a, c in f.terms.items()})
        else:
            out.append({tuple(a): complex(c) for a, c in f.items() if c != 0})
    return out


# -- binomial systems -------------------------------------------------------------


def hermite_lower(M: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Unimodular ``K`` with ``M K = H`` lower triangular, positive diagonal."""
    n = len(M)
    H = [list(map(int, r)) for r in M]
    K = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(j, k, a, b, c, d):
        # (col_j, col_k) <- (a col_j + b col_k, c col_j + d col_k)
        for A in (H, K):
            for row in A:
                x, y = row[j], row[k]
                row[j], row[k] = a * x + b * y, c * x + d * y

    for i in range(n):
        for k in range(i + 1, n):
            if H[i][k] == 0:
                continue
            x, y = H[i][i], H[i][k]
            g, s, t = _egcd(x, y)
            # new col_i = s col_i + t col_k ; new col_k = (-y/g) col_i + (x/g) col_k
            colop(i, k, s, t, -y // g, x // g)
        if H[i][i] == 0:
            raise ValueError("singular exponent matrix")
        if H[i][i] < 0:
            for A in (H, K):
                for row in A:
                    row[i] = -row[i]
    return H, K


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def solve_binomial(M: Sequence[Sequence[int]], b: Sequence[complex]) -> list[np.ndarray]:
    """All solutions of ``y^{M_i} = b_i`` in (C*)^n; there are ``|det M|``."""
    n = len(M)
    H, K = hermite_lower(M)
    sols: list[list[complex]] = [[]]
    for i in range(n):
        nxt = []
        d = H[i][i]
        for z in sols:
            rhs = complex(b[i])
            for j in range(i):
                rhs /= z[j] ** H[i][j]
            r = abs(rhs) ** (1.0 / d)
            th = cmath.phase(rhs)
            for k in range(d):
                nxt.append(z + [cmath.rect(r, (th + 2 * math.pi * k) / d)])
        sols = nxt
    out = []
    for z in sols:
        y = np.ones(n, dtype=complex)
        for k in range(n):
            for j in range(n):
                if K[k][j]:
                    y[k] *= z[j] ** K[k][j]
        out.append(y)
    return out


def binomial_start_solutions(
    cell: MixedCell, lifting: Sequence[LiftedSupport], coefficients: ComplexSystem
) -> list[np.ndarray]:
    """Solve the binomial system selected by ``cell`` (one edge per equation)."""
    M, b = [], []
    for (p, q), ls, coeffs in zip(cell.pairs, lifting, coefficients):
        ap, aq = ls.points[p], ls.points[q]
        M.append([x - y for x, y in zip(aq, ap)])
        b.append(-coeffs[ap] / coeffs[aq])
    sols = solve_binomial(M, b)
    if len(sols) != cell.volume_contribution:
        raise AssertionError("start solution count differs from the cell volume")
    return sols


# -- evaluation tables ------------------------------------------------------------------


@dataclass
class TermTable:
    """Flattened terms ``(c0 + c1 t) t**texp x**exp`` of a parametrized system."""

    n: int
    exps: np.ndarray
    eq: np.ndarray
    c0: np.ndarray
    c1: np.ndarray
    texp: np.ndarray
    lists: tuple = field(init=False)

    def __post_init__(self):
        self.exps = np.ascontiguousarray(self.exps, dtype=np.int64).reshape(-1, self.n)
        self.eq = np.ascontiguousarray(self.eq, dtype=np.int64)
        self.c0 = np.ascontiguousarray(self.c0, dtype=np.complex128)
        self.c1 = np.ascontiguousarray(self.c1, dtype=np.complex128)
        self.texp = np.ascontiguousarray(self.texp, dtype=np.float64)
        self.lists = (
            [tuple(r) for r in self.exps.tolist()],
            self.eq.tolist(),
            self.c0.tolist(),
            self.c1.tolist(),
            self.texp.tolist(),
        )

    def evaluate(self, x: np.ndarray, t: float):
        return kernels.eval_terms(x, t, self)


def _linear_table(g: ComplexSystem, f: ComplexSystem, gamma: complex) -> TermTable:
    n = len(f)
    rows = []
    for i in range(n):
        keys = sorted(set(g[i]) | set(f[i]))
        for a in keys:
            gc = gamma * g[i].get(a, 0)
            rows.append((a, i, gc, f[i].get(a, 0) - gc, 0.0))
    return _table(n, rows)


def _table(n, rows) -> TermTable:
    return TermTable(
        n,
        np.array([r[0] for r in rows], dtype=np.int64).reshape(-1, n),
        [r[1] for r in rows],
        [r[2] for r in rows],
        [r[3] for r in rows],
        [r[4] for r in rows],
    )


def _cell_table(cell: MixedCell, lifting: Sequence[LiftedSupport], g: ComplexSystem) -> TermTable:
    n = len(g)
    alpha = cell.normal
    rows = []
    for i, ((p, q), ls) in enumerate(zip(cell.pairs, lifting)):
        beta = dot(ls.points[p], alpha) + ls.lifts[p]
        for a, w in zip(ls.points, ls.lifts):
            rows.append([a, i, g[i][a], 0, dot(a, alpha) + w - beta])
    positive = [r[4] for r in rows if r[4] > 0]
    delta = min(positive) if positive else Fraction(1)
    for r in rows:
        r[4] = float(Fraction(r[4]) / delta)
    return _table(n, rows)


# -- tracking ---------------------------------------------------------------------


@dataclass
class PathResult:
    x: np.ndarray | None
    status: str
    steps: int
    residual: float = math.inf


def _newton(table: TermTable, x: np.ndarray, t: float, tol: float, iters: int):
    for _ in range(iters):
        H, Hx, _ = table.evaluate(x, t)
        try:
            dx = np.linalg.solve(Hx, -H)
        except np.linalg.LinAlgError:
            return None
        x = x + dx
        if not np.all(np.isfinite(x)):
            return None
        if np.linalg.norm(dx) <= tol * max(1.0, np.linalg.norm(x)):
            return x
    return None


def _velocity(table: TermTable, x: np.ndarray, t: float) -> np.ndarray:
    _, Hx, Ht = table.evaluate(x, t)
    return np.linalg.solve(Hx, -Ht)


def track_path(table: TermTable, x0: np.ndarray, cfg: PathTrackerConfig, t0: float = 0.0, t1: float = 1.0) -> PathResult:
    """RK4 predictor, Newton corrector, step halving/doubling."""
    x = np.array(x0, dtype=complex)
    t = t0
    h = cfg.initial_step
    streak = 0
    steps = 0
    while t1 - t > 1e-15:
        h = min(h, t1 - t)
        steps += 1
        xc = None
        try:
            k1 = _velocity(table, x, t)
            k2 = _velocity(table, x + 0.5 * h * k1, t + 0.5 * h)
            k3 = _velocity(table, x + 0.5 * h * k2, t + 0.5 * h)
            k4 = _velocity(table, x + h * k3, t + h)
            xp = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            if np.all(np.isfinite(xp)):
                xc = _newton(table, xp, t + h, cfg.corrector_tol, cfg.max_corrector_iters)
        except np.linalg.LinAlgError:
            xc = None
        if xc is None:
            h *= 0.5
            streak = 0
            if h < cfg.min_step:
                return PathResult(x, "step-failure", steps)
            continue
        x = xc
        t = t + h
        if np.max(np.abs(x)) > cfg.divergence_threshold:
            return PathResult(x, "diverged", steps)
        streak += 1
        if streak >= 3:
            h = min(2 * h, cfg.max_step)
            streak = 0
    polished = _newton(table, x, t1, cfg.corrector_tol, 10)
    if polished is not None:
        x = polished
    return PathResult(x, "ok", steps)


def _relative_residual(system: ComplexSystem, x: np.ndarray) -> float:
    worst = 0.0
    for eqn in system:
        val = 0j
        scale = 0.0
        for a, c in eqn.items():
            m = c * np.prod(x ** np.array(a))
            val += m
            scale += abs(m)
        worst = max(worst, abs(val) / scale if scale else abs(val))
    return float(worst)


@dataclass
class PolyhedralStart:
    coefficients: ComplexSystem
    lifting: tuple[LiftedSupport, ...]
    cells: tuple[MixedCell, ...]

    @property
    def paths(self) -> int:
        return sum(c.volume_contribution for c in self.cells)


def polyhedral_start(
    supports: Sequence[Sequence[tuple[int, ...]]],
    seed: int = 0,
    coefficients: ComplexSystem | None = None,
    max_attempts: int = 10,
) -> PolyhedralStart:
    sup = [sorted(set(map(tuple, s))) for s in supports]
    if coefficients is None:
        rng = random.Random(f"{seed}:start")
        coefficients = [{a: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for a in s} for s in sup]
    rng = random.Random(f"{seed}:lifting")
    # small lifts keep the t-exponents tame; widen the range on each retry
    for attempt in range(max_attempts):
        lifting = sample_lifting(sup, rng, HOMOTOPY_LIFT_BITS + attempt)
        try:
            cells = mixed_cells(sup, lifting)
        except DegenerateLifting:
            continue
        return PolyhedralStart(coefficients, tuple(lifting), tuple(cells))
    raise DegenerateLifting("no generic homotopy lifting found")


def start_paths(start: PolyhedralStart) -> list[tuple[TermTable, np.ndarray]]:
    """``(cell homotopy, binomial start point)`` for every path."""
    out = []
    for cell in start.cells:
        table = _cell_table(cell, start.lifting, start.coefficients)
        for y0 in binomial_start_solutions(cell, start.lifting, start.coefficients):
            out.append((table, y0))
    return out


def _refined(cfg: PathTrackerConfig) -> PathTrackerConfig:
    k = cfg.refine_factor
    return replace(cfg, initial_step=cfg.initial_step / k, max_step=cfg.max_step / k, refine_factor=1.0)


def track_all_paths(
    system: Sequence,
    start: PolyhedralStart | None = None,
    config: PathTrackerConfig | None = None,
    seed: int = 0,
) -> RootCountReport:
    """Count torus roots of ``system`` numerically; never raises on bad paths.

    ``count + failures == paths`` always; failure reasons are tallied in the
    diagnostics.
    """
    cfg = config or PathTrackerConfig()
    f = as_complex_system(system)
    n = len(f)
    for eqn in f:
        for a in eqn:
            if len(a) != n:
                raise ValueError("system is not square")
    if start is None:
        start = polyhedral_start([list(e) for e in f], seed)
    gamma = cfg.gamma
    if gamma is None:
        gamma = cmath.exp(2j * math.pi * random.Random(f"{seed}:gamma").random())
    table = _linear_table(start.coefficients, f, gamma)

    def run(path, c):
        cell_table, y0 = path
        res = track_path(cell_table, y0, c)
        if res.status != "ok":
            return "start-" + res.status, None
        end = track_path(table, res.x, c)
        if end.status != "ok":
            return end.status, None
        mags = np.abs(end.x)
        if np.min(mags) <= c.torus_threshold:
            return "off-torus", None
        if _relative_residual(f, end.x) > c.residual_tol:
            return "residual", None
        return "ok", end.x

    paths = start_paths(start)
    results = [run(p, cfg) for p in paths]
    # one retry with smaller steps for failed paths and colliding endpoints
    if cfg.refine_factor > 1:
        retry = {k for k, (st, _) in enumerate(results) if st != "ok"}
        retry |= _colliding([x for _, x in results])
        fine = _refined(cfg)
        for k in sorted(retry):
            results[k] = run(paths[k], fine)
    reasons: dict[str, int] = {}
    roots: list[np.ndarray] = []
    residual_max = 0.0
    near = 0
    for st, x in results:
        if st != "ok":
            reasons[st] = reasons.get(st, 0) + 1
            continue
        if any(_same(x, r) for r in roots):
            reasons["duplicate"] = reasons.get("duplicate", 0) + 1
            continue
        if np.min(np.abs(x)) <= 1e3 * cfg.torus_threshold:
            near += 1
        roots.append(x)
        residual_max = max(residual_max, _relative_residual(f, x))
    failures = sum(reasons.values())
    return RootCountReport(
        len(roots),
        "homotopy",
        "numerical",
        paths=start.paths,
        failures=failures,
        residual_max=residual_max,
        seed=seed,
        diagnostics={
            "failureReasons": dict(sorted(reasons.items())),
            "nearThreshold": near,
            "cells": len(start.cells),
            "roots": [[[float(z.real), float(z.imag)] for z in r] for r in sorted(roots, key=_root_key)],
        },
    )


def _same(x: np.ndarray, y: np.ndarray) -> bool:
    return bool(np.linalg.norm(x - y) <= 1e-6 * max(1.0, np.linalg.norm(y)))


def _colliding(xs: list) -> set[int]:
    out = set()
    for i, x in enumerate(xs):
        for j in range(i):
            if x is not None and xs[j] is not None and _same(x, xs[j]):
                out.update((i, j))
    return out


def _root_key(x: np.ndarray):
    return tuple(round(float(v), 8) for z in x for v in (z.real, z.imag))


def count_torus_roots_homotopy(
    system: Sequence, seed: int = 0, config: PathTrackerConfig | None = None
) -> RootCountReport:
    return track_all_paths(system, None, config, seed)
