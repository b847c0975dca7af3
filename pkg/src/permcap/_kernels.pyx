# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; same contracts as ``_pykernels``."""

import numpy as np
from math import comb

from libc.stdlib cimport malloc, free
from libc.string cimport memset

NAME = "compiled"


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


def _ryser_weights(int m, int n):
    w = np.zeros(n + 1)
    for k in range(1, m + 1):
        w[k] = (-1) ** (m - k) * comb(n - k, m - k)
    return w


def permanent_ryser(const double[:, ::1] a):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t i, j
    cdef unsigned long long g, total = 1ULL << n, gray, prev = 0
    cdef int k
    cdef double prod
    cdef double[::1] rs = np.zeros(m)
    cdef double[::1] acc = np.zeros(n + 1)
    with nogil:
        for g in range(1, total):
            gray = g ^ (g >> 1)
            j = __builtin_ctzll(g)
            if gray >> j & 1:
                for i in range(m):
                    rs[i] += a[i, j]
            else:
                for i in range(m):
                    rs[i] -= a[i, j]
            k = __builtin_popcountll(gray)
            if k > m:
                continue
            prod = 1.0
            for i in range(m):
                prod *= rs[i]
            acc[k] += prod
    return float(_ryser_weights(m, n) @ np.asarray(acc))


def poly_ryser(const double[:, ::1] a):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t i, j, t
    cdef unsigned long long g, total = 1ULL << n, gray
    cdef int k
    cdef double r
    cdef double[::1] rs = np.zeros(m)
    cdef double[::1] coef = np.zeros(m + 1)
    cdef double[:, ::1] acc = np.zeros((n + 1, m + 1))
    with nogil:
        for g in range(1, total):
            gray = g ^ (g >> 1)
            j = __builtin_ctzll(g)
            if gray >> j & 1:
                for i in range(m):
                    rs[i] += a[i, j]
            else:
                for i in range(m):
                    rs[i] -= a[i, j]
            k = __builtin_popcountll(gray)
            if k > m:
                continue
            coef[0] = 1.0
            for t in range(1, m + 1):
                coef[t] = 0.0
            for i in range(m):
                r = rs[i]
                t = i + 1
                while t >= 1:
                    coef[t] += r * coef[t - 1]
                    t -= 1
            for t in range(m + 1):
                acc[k, t] += coef[t]
    mu = np.zeros(m + 1)
    acc_np = np.asarray(acc)
    for k in range(1, m + 1):
        base = (-1) ** (m - k) * comb(n - k, m - k)
        for t in range(m + 1):
            mu[t] += base * k ** (m - t) * acc_np[k, t]
    return mu


cdef double _walk_perm(const double[:, ::1] a, Py_ssize_t i, Py_ssize_t m,
                       Py_ssize_t n, unsigned long long used,
                       double prefix) noexcept nogil:
    cdef Py_ssize_t j
    cdef double total = 0.0
    if i == m - 1:
        for j in range(n):
            if not (used >> j & 1):
                total += prefix * a[i, j]
        return total
    for j in range(n):
        if not (used >> j & 1):
            total += _walk_perm(a, i + 1, m, n, used | (1ULL << j),
                                prefix * a[i, j])
    return total


def permanent_definition(const double[:, ::1] a):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef double out
    with nogil:
        out = _walk_perm(a, 0, m, n, 0, 1.0)
    return float(out)


cdef void _walk_poly(const double[:, ::1] a, Py_ssize_t i, Py_ssize_t m,
                     Py_ssize_t n, unsigned long long used, double *stack,
                     double *mu) noexcept nogil:
    # stack row i holds the prefix polynomial of degree i
    cdef Py_ssize_t j, t, w1 = m + 1
    cdef double w
    cdef double *cur = stack + i * w1
    cdef double *nxt = stack + (i + 1) * w1
    for j in range(n):
        if used >> j & 1:
            continue
        w = a[i, j]
        nxt[0] = 1.0
        for t in range(1, i + 1):
            nxt[t] = cur[t] + w * cur[t - 1]
        nxt[i + 1] = w * cur[i]
        if i == m - 1:
            for t in range(m + 1):
                mu[t] += nxt[t]
        else:
            _walk_poly(a, i + 1, m, n, used | (1ULL << j), stack, mu)


def poly_definition(const double[:, ::1] a):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef double *stack = <double *> malloc((m + 1) * (m + 1) * sizeof(double))
    cdef double[::1] mu = np.zeros(m + 1)
    if stack == NULL:
        raise MemoryError()
    memset(stack, 0, (m + 1) * (m + 1) * sizeof(double))
    stack[0] = 1.0
    try:
        with nogil:
            _walk_poly(a, 0, m, n, 0, stack, &mu[0])
    finally:
        free(stack)
    return np.asarray(mu)
