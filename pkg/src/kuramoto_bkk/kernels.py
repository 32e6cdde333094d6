"""Kernel dispatch: the compiled extension when importable, else pure Python.

Set ``KURAMOTO_BKK_PURE=1`` to force the pure-Python kernels.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"

if not os.environ.get("KURAMOTO_BKK_PURE"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None
else:
    _compiled = None

if _compiled is not None:
    BACKEND = "compiled"

    def phase_one(T, basis, n_struct):
        try:
            return _compiled.phase_one(T, basis, n_struct)
        except OverflowError:
            # int64 overflow: redo the whole pivot sequence with big ints
            return _kernels_py.phase_one(T, basis, n_struct)

    def eval_terms(x, t, table):
        """``(H, Hx, Ht)`` of a term table at ``(x, t)`` as numpy arrays."""
        return _compiled.eval_terms(
            np.ascontiguousarray(x, dtype=np.complex128), float(t),
            table.exps, table.eq, table.c0, table.c1, table.texp, table.n,
        )
else:
    phase_one = _kernels_py.phase_one

    def eval_terms(x, t, table):
        """``(H, Hx, Ht)`` of a term table at ``(x, t)`` as numpy arrays."""
        H, Hx, Ht = _kernels_py.eval_terms(list(map(complex, x)), float(t), *table.lists, table.n)
        return np.array(H), np.array(Hx), np.array(Ht)
