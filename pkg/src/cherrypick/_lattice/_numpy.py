"""Numpy implementation of the subset-lattice kernels.

Masks index arrays of length 2**n; bit b of a mask means element b is in the
subset. All transforms are in-place butterfly sweeps, one bit at a time, so
everything is O(2**n * n) with contiguous access.
"""

import numpy as np


def backend_name():
    return "numpy"


def popcounts(n):
    """uint8 array: popcounts[m] = number of set bits of m, for all 2**n masks."""
    pc = np.zeros(1, dtype=np.uint8)
    for _ in range(n):
        pc = np.concatenate([pc, pc + 1])
    return pc


def subset_sum(weights):
    """float64 array s with s[m] = sum of weights[b] over set bits b of m."""
    w = np.asarray(weights, dtype=np.float64)
    n = len(w)
    s = np.zeros(1 << n, dtype=np.float64)
    for b in range(n):
        step = 1 << b
        view = s.reshape(-1, 2 * step)
        view[:, step:] += w[b]
    return s


def superset_and(u):
    """In place: u[m] <- AND of u[j] over all supersets j of m. Returns u."""
    size = u.shape[0]
    n = size.bit_length() - 1
    for b in range(n):
        step = 1 << b
        view = u.reshape(-1, 2 * step)
        view[:, :step] &= view[:, step:]
    return u


def subset_max(values):
    """In place: values[m] <- max of values[j] over all subsets j of m."""
    size = values.shape[0]
    n = size.bit_length() - 1
    for b in range(n):
        step = 1 << b
        view = values.reshape(-1, 2 * step)
        np.maximum(view[:, step:], view[:, :step], out=view[:, step:])
    return values


def minimal_members(x):
    """Masks m with x[m] true and no immediate subset true, ascending.

    For an upward-closed x with x[0] false (a closed-testing rejection
    lattice) these are exactly the inclusion-minimal members.
    """
    size = x.shape[0]
    n = size.bit_length() - 1
    minimal = x.copy()
    for b in range(n):
        step = 1 << b
        xv = x.reshape(-1, 2 * step)
        mv = minimal.reshape(-1, 2 * step)
        mv[:, step:] &= ~xv[:, :step]
    minimal[0] = False
    return np.nonzero(minimal)[0]
