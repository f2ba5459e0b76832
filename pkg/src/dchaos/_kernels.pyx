# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Semantics are defined by ``_pykernels``."""

import numpy as np

from libc.math cimport exp, log, INFINITY


def shifted_sums(const double[::1] vals, long base, const long[::1] idx,
                 const double[::1] coef, long n_max, int step):
    cdef Py_ssize_t t, n, m = idx.shape[0]
    cdef double acc
    out = np.empty(n_max, dtype=np.float64)
    cdef double[::1] o = out
    for n in range(1, n_max + 1):
        acc = 0.0
        for t in range(m):
            acc += coef[t] * vals[idx[t] + step * n - base]
        o[n - 1] = acc
    return out


def log_shifted_sums(const double[::1] logvals, long base, const long[::1] idx,
                     const double[::1] logcoef, long n_max, int step):
    cdef Py_ssize_t t, n, m = idx.shape[0]
    cdef double hi, x, acc
    out = np.empty(n_max, dtype=np.float64)
    cdef double[::1] o = out
    for n in range(1, n_max + 1):
        hi = -INFINITY
        for t in range(m):
            x = logcoef[t] + logvals[idx[t] + step * n - base]
            if x > hi:
                hi = x
        if hi == -INFINITY:
            o[n - 1] = -INFINITY
            continue
        acc = 0.0
        for t in range(m):
            acc += exp(logcoef[t] + logvals[idx[t] + step * n - base] - hi)
        o[n - 1] = hi + log(acc)
    return out


def below_prefix_counts(const double[::1] vals, double threshold):
    cdef Py_ssize_t i, m = vals.shape[0]
    cdef long c = 0
    out = np.empty(m, dtype=np.int64)
    cdef long[::1] o = out
    for i in range(m):
        if vals[i] < threshold:
            c += 1
        o[i] = c
    return out
