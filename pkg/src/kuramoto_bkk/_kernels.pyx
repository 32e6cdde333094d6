# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; semantics are those of ``_kernels_py``.

``phase_one`` runs on int64 with checked arithmetic.  On overflow it raises
``OverflowError`` before touching its arguments, so the caller can redo the
solve with Python integers.
"""

from libc.stdlib cimport malloc, free
from libc.math cimport pow as fpow

import numpy as np

cdef extern from *:
    """
    static inline int kb_mul(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int kb_sub(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    """
    int kb_mul(long long a, long long b, long long *r) nogil
    int kb_sub(long long a, long long b, long long *r) nogil


cdef int _pivot_loop(long long *T, long long *basis, Py_ssize_t m, Py_ssize_t w, Py_ssize_t n_struct, int *feasible) nogil:
    # returns 0 ok, 1 overflow, 2 unbounded
    cdef Py_ssize_t rhs = w - 1, col, row, r, i, j
    cdef long long D = 1, p, f, a, num, best_num = 0, best_den = 1, lhs, cur, u, v
    cdef long long *obj = T + m * w
    cdef long long *prow
    cdef long long *Ti
    while True:
        col = -1
        for j in range(n_struct):
            if obj[j] < 0:
                col = j
                break
        if col < 0:
            feasible[0] = obj[rhs] == 0
            return 0
        row = -1
        for r in range(m):
            a = T[r * w + col]
            if a > 0:
                num = T[r * w + rhs]
                if row < 0:
                    row = r
                    best_num = num
                    best_den = a
                    continue
                if kb_mul(num, best_den, &lhs) or kb_mul(best_num, a, &cur):
                    return 1
                if lhs < cur or (lhs == cur and basis[r] < basis[row]):
                    row = r
                    best_num = num
                    best_den = a
        if row < 0:
            return 2
        prow = T + row * w
        p = prow[col]
        for i in range(m + 1):
            if i == row:
                continue
            Ti = T + i * w
            f = Ti[col]
            for j in range(w):
                if kb_mul(Ti[j], p, &u):
                    return 1
                if f != 0:
                    if kb_mul(f, prow[j], &v) or kb_sub(u, v, &u):
                        return 1
                Ti[j] = u // D
        D = p
        basis[row] = col
        if obj[rhs] == 0:
            feasible[0] = 1
            return 0


def phase_one(list T, list basis, Py_ssize_t n_struct):
    cdef Py_ssize_t rows = len(T), w = len(T[0]), m = rows - 1, r, j
    cdef long long *buf = <long long *> malloc(rows * w * sizeof(long long))
    cdef long long *bas = <long long *> malloc(m * sizeof(long long))
    cdef int status, feasible = 0
    if buf == NULL or bas == NULL:
        free(buf)
        free(bas)
        raise MemoryError()
    try:
        for r in range(rows):
            row = T[r]
            for j in range(w):
                buf[r * w + j] = row[j]  # raises OverflowError if too large
        for r in range(m):
            bas[r] = basis[r]
        with nogil:
            status = _pivot_loop(buf, bas, m, w, n_struct, &feasible)
        if status == 1:
            raise OverflowError("int64 overflow in phase-one pivot")
        if status == 2:
            raise RuntimeError("phase-one LP reported unbounded")
        for r in range(rows):
            row = T[r]
            for j in range(w):
                row[j] = buf[r * w + j]
        for r in range(m):
            basis[r] = bas[r]
        return bool(feasible)
    finally:
        free(buf)
        free(bas)


cdef inline double complex _ipow(double complex z, long long k) nogil:
    cdef double complex out = 1
    cdef bint neg = k < 0
    if neg:
        k = -k
    while k:
        if k & 1:
            out = out * z
        z = z * z
        k >>= 1
    return 1 / out if neg else out


def eval_terms(
    const double complex[::1] x,
    double t,
    const long long[:, ::1] exps,
    const long long[::1] eq,
    const double complex[::1] c0,
    const double complex[::1] c1,
    const double[::1] texp,
    Py_ssize_t n,
):
    H_arr = np.zeros(n, dtype=np.complex128)
    Hx_arr = np.zeros((n, n), dtype=np.complex128)
    Ht_arr = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] H = H_arr
    cdef double complex[:, ::1] Hx = Hx_arr
    cdef double complex[::1] Ht = Ht_arr
    cdef Py_ssize_t k, j, i, T = eq.shape[0]
    cdef double complex mono, coef, val, dcoef
    cdef double e, te
    with nogil:
        for k in range(T):
            i = eq[k]
            mono = 1
            for j in range(n):
                if exps[k, j]:
                    mono = mono * _ipow(x[j], exps[k, j])
            e = texp[k]
            te = fpow(t, e) if e != 0 else 1.0
            coef = (c0[k] + c1[k] * t) * te
            val = coef * mono
            H[i] = H[i] + val
            dcoef = c1[k] * te
            if e != 0:
                dcoef = dcoef + (c0[k] + c1[k] * t) * e * (fpow(t, e - 1) if e != 1 else 1.0)
            Ht[i] = Ht[i] + dcoef * mono
            for j in range(n):
                if exps[k, j]:
                    Hx[i, j] = Hx[i, j] + val * exps[k, j] / x[j]
    return H_arr, Hx_arr, Ht_arr
