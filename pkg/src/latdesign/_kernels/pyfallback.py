"""Pure-Python/numpy twins of the compiled kernels.

Selected at import when the extension is missing (or forced via
LATDESIGN_FORCE_FALLBACK=1).  Contracts match _core exactly; the histogram
uses blocked float64 matrix products, which are exact here because every
intermediate value is an integer far below 2**53.
"""

from __future__ import annotations

from math import ceil, floor, sqrt

import numpy as np

# partial float sums below 2**52 keep every histogram product exact
_EXACT_LIMIT = 2.0 ** 52


def enumerate_candidates(r: np.ndarray, bound: float, slack: float,
                         max_nodes: int, max_results: int):
    """Same contract as _core.enumerate_candidates (see there)."""
    n = r.shape[0]
    if r.shape[1] != n:
        raise ValueError("square factor required")
    rr = [[float(r[i, j]) for j in range(n)] for i in range(n)]
    limit = float(bound) + float(slack)
    x = [0] * n
    hi = [0] * n
    sigma = [0.0] * n
    rem = [0.0] * n
    az = [True] * n
    found: list[list[int]] = []
    nodes = 0

    i = n - 1
    rem[i] = limit
    sigma[i] = 0.0
    rad = sqrt(max(rem[i], 0.0)) / rr[i][i]
    lo = ceil(-rad - sigma[i] / rr[i][i] - 1e-9)
    hi[i] = floor(rad - sigma[i] / rr[i][i] + 1e-9)
    x[i] = max(lo, 0) - 1

    while True:
        x[i] += 1
        if x[i] > hi[i]:
            i += 1
            if i == n:
                break
            continue
        nodes += 1
        if nodes > max_nodes:
            raise RuntimeError("enumeration node budget exhausted")
        val = rr[i][i] * x[i] + sigma[i]
        if val * val > rem[i] + 1e-9:
            continue
        if i == 0:
            if any(x):
                if len(found) >= max_results:
                    raise OverflowError("candidate buffer full")
                found.append(x.copy())
            continue
        rem[i - 1] = rem[i] - val * val
        az[i - 1] = az[i] and x[i] == 0
        i -= 1
        row = rr[i]
        sigma[i] = sum(row[j] * x[j] for j in range(i + 1, n))
        rad = sqrt(max(rem[i], 0.0)) / row[i]
        lo = ceil(-rad - sigma[i] / row[i] - 1e-9)
        hi[i] = floor(rad - sigma[i] / row[i] + 1e-9)
        if az[i] and lo < 0:
            lo = 0
        x[i] = lo - 1

    arr = np.array(found, dtype=np.int64) if found else np.empty((0, n), dtype=np.int64)
    return arr, nodes


def pair_histogram_block(w: np.ndarray, x: np.ndarray, hist: np.ndarray,
                         offset: int, i_start: int, i_end: int) -> None:
    """Same contract as _core.pair_histogram_block, blocked over rows."""
    s, n = x.shape
    nbins = hist.shape[0]
    scale = float(np.abs(w).max(initial=0)) * float(np.abs(x).max(initial=0)) * n
    if scale >= _EXACT_LIMIT:
        raise OverflowError("entries too large for exact float64 products")
    wf = w.astype(np.float64)
    xf_t = x.astype(np.float64).T
    block = max(1, int(4_000_000 // max(s, 1)))
    for a in range(i_start, i_end, block):
        b = min(a + block, i_end)
        prods = wf[a:b] @ xf_t  # exact: integer-valued throughout
        rows = np.arange(a, b)
        mask = np.arange(s)[None, :] >= rows[:, None]  # j >= i
        vals = prods[mask].astype(np.int64) + offset
        if vals.size and (vals.min() < 0 or vals.max() >= nbins):
            raise ValueError("inner product outside the declared range")
        hist += np.bincount(vals, minlength=nbins).astype(np.int64)
