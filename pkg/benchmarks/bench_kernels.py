#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs both backends in one process (bypassing the import-time selection) on
the bundled fixtures and prints a table.  The Leech rows are gated behind
--full: fallback enumeration there is minutes, not seconds.
"""

from __future__ import annotations

import argparse
import time
from importlib import resources

import numpy as np

from latdesign._kernels import pyfallback
from latdesign.lattice import GramMatrix

try:
    from latdesign._kernels import _core
except ImportError:
    _core = None


def load(name: str) -> GramMatrix:
    text = resources.files("latdesign.data").joinpath(name + ".gram").read_text()
    return GramMatrix.from_text(text)


def time_enumeration(impl, g: GramMatrix) -> tuple[float, int]:
    gn = g.to_numpy()
    bound = float(gn.diagonal().min())
    r = np.ascontiguousarray(np.linalg.cholesky(gn.astype(np.float64)).T)
    t0 = time.perf_counter()
    cands, _ = impl.enumerate_candidates(r, bound, 1e-6 * (1 + bound),
                                         10 ** 10, 4_000_000)
    return time.perf_counter() - t0, cands.shape[0]


def time_histogram(impl, g: GramMatrix) -> tuple[float, int]:
    from latdesign.lattice import minimal_vectors

    sv = minimal_vectors(g)
    x = sv.vectors
    w = x @ g.to_numpy()
    hist = np.zeros(2 * sv.m + 1, dtype=np.int64)
    t0 = time.perf_counter()
    impl.pair_histogram_block(w, x, hist, sv.m, 0, x.shape[0])
    return time.perf_counter() - t0, int(hist.sum())


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--full", action="store_true",
                    help="include the Leech lattice (fallback takes minutes)")
    args = ap.parse_args()

    if _core is None:
        print("compiled kernel not built; showing fallback only")
    lattices = ["e8", "bw16"] + (["leech"] if args.full else [])
    rows = []
    for name in lattices:
        g = load(name)
        for label, fn in (("enumerate", time_enumeration),
                          ("histogram", time_histogram)):
            t_py, size = fn(pyfallback, g)
            if _core is not None:
                t_c, size_c = fn(_core, g)
                assert size == size_c, "backends disagree"
                rows.append((name, label, size, t_c, t_py, t_py / t_c))
            else:
                rows.append((name, label, size, float("nan"), t_py, float("nan")))

    print(f"{'lattice':8} {'kernel':10} {'work':>12} {'compiled':>10} "
          f"{'fallback':>10} {'speedup':>8}")
    for name, label, size, t_c, t_py, ratio in rows:
        print(f"{name:8} {label:10} {size:12d} {t_c:10.4f} {t_py:10.4f} {ratio:7.1f}x")


if __name__ == "__main__":
    main()
