# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled subset-lattice kernels; same contracts as the numpy module."""

import numpy as np

cimport cython
from libc.stdint cimport int8_t, uint8_t, uint64_t


def backend_name():
    return "cython"


def popcounts(int n):
    cdef uint64_t size = 1ULL << n
    out = np.zeros(size, dtype=np.uint8)
    cdef uint8_t[::1] pc = out
    cdef uint64_t block, i
    cdef int b
    # doubling construction: the upper copy of each block is lower + 1
    for b in range(n):
        block = 1ULL << b
        for i in range(block):
            pc[block + i] = pc[i] + 1
    return out


def subset_sum(weights):
    w_arr = np.ascontiguousarray(weights, dtype=np.float64)
    cdef double[::1] w = w_arr
    cdef int n = w.shape[0]
    cdef uint64_t size = 1ULL << n
    out = np.zeros(size, dtype=np.float64)
    cdef double[::1] s = out
    cdef uint64_t step, base, i
    cdef int b
    cdef double wb
    for b in range(n):
        step = 1ULL << b
        wb = w[b]
        base = 0
        while base < size:
            for i in range(base + step, base + 2 * step):
                s[i] += wb
            base += 2 * step
    return out


def superset_and(u):
    cdef uint8_t[::1] x = u.view(np.uint8)
    cdef uint64_t size = x.shape[0]
    cdef int n = 0
    while (1ULL << n) < size:
        n += 1
    cdef uint64_t step, base, i
    cdef int b
    for b in range(n):
        step = 1ULL << b
        base = 0
        while base < size:
            for i in range(base, base + step):
                x[i] &= x[i + step]
            base += 2 * step
    return u


def subset_max(values):
    cdef int8_t[::1] v = values
    cdef uint64_t size = v.shape[0]
    cdef int n = 0
    while (1ULL << n) < size:
        n += 1
    cdef uint64_t step, base, i
    cdef int b
    cdef int8_t lo, hi
    for b in range(n):
        step = 1ULL << b
        base = 0
        while base < size:
            for i in range(base, base + step):
                lo = v[i]
                hi = v[i + step]
                v[i + step] = lo if lo > hi else hi
            base += 2 * step
    return values


def minimal_members(x):
    cdef uint8_t[::1] xv = x.view(np.uint8)
    cdef uint64_t size = xv.shape[0]
    minimal = x.copy()
    cdef uint8_t[::1] mv = minimal.view(np.uint8)
    cdef int n = 0
    while (1ULL << n) < size:
        n += 1
    cdef uint64_t step, base, i
    cdef int b
    for b in range(n):
        step = 1ULL << b
        base = 0
        while base < size:
            for i in range(base, base + step):
                if xv[i]:
                    mv[i + step] = 0
            base += 2 * step
    if size > 0:
        mv[0] = 0
    return np.nonzero(minimal)[0]
