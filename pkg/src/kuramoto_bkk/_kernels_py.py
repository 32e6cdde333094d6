"""Pure-Python reference kernels.

These define the semantics of the compiled versions in ``_kernels.pyx``;
``kernels.py`` picks one of the two at import time.
"""

from __future__ import annotations


def phase_one(T: list[list[int]], basis: list[int], n_struct: int) -> bool:
    """Fraction-free phase-one simplex with Bland's rule.

    ``T`` holds ``m`` constraint rows followed by the objective row; the last
    column is the right-hand side.  All entries are integers and the true
    tableau is ``T / D`` for the running pivot ``D``.  ``basis[r]`` is the
    basic column of row ``r``.  Only the first ``n_struct`` columns (the
    non-artificial ones) may enter.  Returns True iff the optimum of the
    artificial objective is zero, i.e. the original system is feasible.
    Mutates ``T`` and ``basis``.
    """
    m = len(T) - 1
    rhs = len(T[0]) - 1
    obj = T[m]
    D = 1
    while True:
        col = -1
        for j in range(n_struct):
            if obj[j] < 0:
                col = j
                break
        if col < 0:
            return obj[rhs] == 0
        row = -1
        best_num = 0
        best_den = 1
        for r in range(m):
            a = T[r][col]
            if a > 0:
                num = T[r][rhs]
                if row < 0:
                    row, best_num, best_den = r, num, a
                    continue
                lhs = num * best_den
                cur = best_num * a
                if lhs < cur or (lhs == cur and basis[r] < basis[row]):
                    row, best_num, best_den = r, num, a
        if row < 0:
            # unbounded phase-one direction cannot happen (objective >= 0)
            raise RuntimeError("phase-one LP reported unbounded")
        prow = T[row]
        p = prow[col]
        for i in range(m + 1):
            if i == row:
                continue
            Ti = T[i]
            f = Ti[col]
            if f == 0:
                for j in range(rhs + 1):
                    Ti[j] = Ti[j] * p // D
            else:
                for j in range(rhs + 1):
                    Ti[j] = (Ti[j] * p - f * prow[j]) // D
        D = p
        basis[row] = col
        if obj[rhs] == 0:
            return True


def eval_terms(x, t, exps, eq, c0, c1, texp, n):
    """Evaluate a parametrized Laurent system and its derivatives.

    Term ``k`` contributes ``(c0[k] + c1[k] t) t**texp[k] x**exps[k]`` to
    equation ``eq[k]``.  Returns ``(H, Hx, Ht)`` as nested lists of complex.
    """
    H = [0j] * n
    Hx = [[0j] * n for _ in range(n)]
    Ht = [0j] * n
    for k in range(len(eq)):
        i = eq[k]
        a = exps[k]
        mono = 1 + 0j
        for j in range(n):
            if a[j]:
                mono *= x[j] ** a[j]
        e = texp[k]
        te = t**e if e != 0 else 1.0
        coef = (c0[k] + c1[k] * t) * te
        val = coef * mono
        H[i] += val
        dcoef = c1[k] * te
        if e != 0:
            dcoef += (c0[k] + c1[k] * t) * e * (t ** (e - 1) if e != 1 else 1.0)
        Ht[i] += dcoef * mono
        for j in range(n):
            if a[j]:
                Hx[i][j] += val * a[j] / x[j]
    return H, Hx, Ht
