# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: tolerance-based row matching and the two-sample
Kolmogorov-Smirnov statistic. Semantics are identical to the numpy
fallbacks in _fallback.py; tests assert parity."""

import numpy as np

from libc.math cimport fabs


def ks_statistic(const double[::1] x, const double[::1] y):
    """Sup distance between the empirical CDFs of two sorted samples."""
    cdef Py_ssize_t n = x.shape[0], m = y.shape[0]
    cdef Py_ssize_t i = 0, j = 0
    cdef double d = 0.0, diff, v
    if n == 0 or m == 0:
        raise ValueError("ks_statistic requires nonempty samples")
    while i < n and j < m:
        v = x[i] if x[i] < y[j] else y[j]
        while i < n and x[i] == v:
            i += 1
        while j < m and y[j] == v:
            j += 1
        diff = fabs((<double>i) / n - (<double>j) / m)
        if diff > d:
            d = diff
    return d


def match_any_row(const double[:, ::1] rows, const double[:, ::1] pool, const double[::1] tol):
    """Boolean mask: rows[i] matches some pool row within per-column tolerance.

    A match requires |rows[i, c] - pool[j, c]| <= tol[c] for every column c;
    tol[c] == 0 demands exact equality.
    """
    cdef Py_ssize_t n = rows.shape[0], m = pool.shape[0], k = rows.shape[1]
    cdef Py_ssize_t i, j, c
    cdef bint ok
    if pool.shape[1] != k or tol.shape[0] != k:
        raise ValueError("column count mismatch")
    out = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] o = out
    for i in range(n):
        for j in range(m):
            ok = True
            for c in range(k):
                if fabs(rows[i, c] - pool[j, c]) > tol[c]:
                    ok = False
                    break
            if ok:
                o[i] = 1
                break
    return out.view(np.bool_)
