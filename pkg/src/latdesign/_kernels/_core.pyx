# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: short-vector tree search and pairwise histograms.

Both have pure-Python twins in pyfallback.py selected at import time; the
contracts must stay identical.  Floating point is confined to the search
bounds (callers re-verify every candidate exactly); the histogram kernel is
pure 64-bit integer arithmetic.
"""

from libc.math cimport sqrt, floor, ceil

import numpy as np


def enumerate_candidates(double[:, :] r, double bound, double slack,
                         long long max_nodes, long long max_results):
    """All x != 0 with ||R x||^2 <= bound + slack, one per antipodal pair.

    r is the upper-triangular Cholesky factor of the Gram matrix.  The
    representative kept has its highest-index nonzero coordinate positive.
    Returns (int64 array of shape (count, n), nodes visited).  Raises
    RuntimeError on node budget exhaustion, OverflowError when the result
    buffer fills.
    """
    cdef Py_ssize_t n = r.shape[0]
    if r.shape[1] != n:
        raise ValueError("square factor required")
    cdef double limit = bound + slack
    out = np.empty((max_results, n), dtype=np.int64)
    cdef long long[:, :] out_v = out
    cdef long long[:] x = np.zeros(n, dtype=np.int64)
    cdef long long[:] hi = np.zeros(n, dtype=np.int64)
    cdef double[:] sigma = np.zeros(n, dtype=np.float64)
    cdef double[:] rem = np.zeros(n, dtype=np.float64)
    # az[i] == 1 when x[j] == 0 for all j > i
    cdef char[:] az = np.ones(n, dtype=np.int8)
    cdef Py_ssize_t i = n - 1, j, found = 0
    cdef long long nodes = 0
    cdef double rad, val
    cdef long long lo
    cdef bint nonzero
    cdef int status = 0  # 1 = node budget, 2 = buffer full

    sigma[i] = 0.0
    rem[i] = limit
    az[i] = 1
    rad = sqrt(rem[i] if rem[i] > 0 else 0) / r[i, i]
    lo = <long long> ceil(-rad - sigma[i] / r[i, i] - 1e-9)
    hi[i] = <long long> floor(rad - sigma[i] / r[i, i] + 1e-9)
    if lo < 0:  # az holds at the top level
        lo = 0
    x[i] = lo - 1

    with nogil:
        while True:
            x[i] += 1
            if x[i] > hi[i]:
                i += 1
                if i == n:
                    break
                continue
            nodes += 1
            if nodes > max_nodes:
                status = 1
                break
            val = r[i, i] * x[i] + sigma[i]
            if val * val > rem[i] + 1e-9:
                continue
            if i == 0:
                nonzero = False
                for j in range(n):
                    if x[j] != 0:
                        nonzero = True
                        break
                if nonzero:
                    if found >= max_results:
                        status = 2
                        break
                    for j in range(n):
                        out_v[found, j] = x[j]
                    found += 1
                continue
            # descend one level
            rem[i - 1] = rem[i] - val * val
            az[i - 1] = 1 if (az[i] and x[i] == 0) else 0
            i -= 1
            sigma[i] = 0.0
            for j in range(i + 1, n):
                sigma[i] += r[i, j] * x[j]
            rad = sqrt(rem[i] if rem[i] > 0 else 0) / r[i, i]
            lo = <long long> ceil(-rad - sigma[i] / r[i, i] - 1e-9)
            hi[i] = <long long> floor(rad - sigma[i] / r[i, i] + 1e-9)
            if az[i] and lo < 0:
                lo = 0
            x[i] = lo - 1

    if status == 1:
        raise RuntimeError("enumeration node budget exhausted")
    if status == 2:
        raise OverflowError("candidate buffer full")
    return np.asarray(out[:found]).copy(), nodes


def pair_histogram_block(const long long[:, :] w, const long long[:, :] x,
                         long long[:] hist, long long offset,
                         Py_ssize_t i_start, Py_ssize_t i_end):
    """Histogram of <w_i, x_j> over the pairs i_start <= i < i_end, i <= j < s.

    w must be X @ G so the dot products are Gram inner products.  Counts land
    in hist[value + offset]; values outside [0, len(hist)) abort with an
    error (the caller sizes hist from the Cauchy-Schwarz bound).
    """
    cdef Py_ssize_t s = x.shape[0], n = x.shape[1]
    cdef Py_ssize_t nbins = hist.shape[0]
    cdef Py_ssize_t i, j, k
    cdef long long v
    cdef bint bad = False
    with nogil:
        for i in range(i_start, i_end):
            for j in range(i, s):
                v = 0
                for k in range(n):
                    v += w[i, k] * x[j, k]
                v += offset
                if v < 0 or v >= nbins:
                    bad = True
                    break
                hist[v] += 1
            if bad:
                break
    if bad:
        raise ValueError("inner product outside the declared range")
