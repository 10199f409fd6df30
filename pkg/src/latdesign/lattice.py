"""Concrete lattices: Gram matrices, minimal vectors, design verification.

Enumeration uses a floating-point triangular decomposition with an additive
slack on the search radius, then confirms every candidate in exact integer
arithmetic; the slack (1e-6 * (1 + bound), against rounding error around
1e-12 at these scales) makes the float pruning strictly conservative, so no
vector is missed.  Moment sums and verdicts are exact integers/rationals
throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from threading import Thread

import numpy as np

from . import _kernels
from .exactmath import format_rational
from .moments import design_constant

__all__ = [
    "GramMatrix", "ShortVectorSet", "DesignCertificate", "MomentProfile",
    "ResourceBudgetError", "minimal_vectors", "naive_minimal_vectors",
    "verify_design", "moment_profile", "even_sublattice",
]

DEFAULT_NODE_BUDGET = 200_000_000
DEFAULT_PAIR_BUDGET = 500_000_000


class ResourceBudgetError(RuntimeError):
    """A computation would exceed its configured budget; pass force/raise it."""


class GramMatrix:
    """Symmetric positive definite integer matrix defining an integral lattice."""

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        mat = [tuple(int(v) for v in row) for row in rows]
        n = len(mat)
        if any(len(r) != n for r in mat):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if mat[i][j] != mat[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(mat))
        if not self._positive_definite():
            raise ValueError("Gram matrix is not positive definite")

    def __setattr__(self, name, value):
        raise AttributeError("GramMatrix is immutable")

    def _positive_definite(self) -> bool:
        # symmetric elimination without row swaps: all pivots must stay positive,
        # which is exactly positivity of the leading principal minors
        m = [[Fraction(v) for v in row] for row in self.rows]
        for k in range(self.n):
            if m[k][k] <= 0:
                return False
            for i in range(k + 1, self.n):
                if m[i][k] != 0:
                    f = m[i][k] / m[k][k]
                    for j in range(k, self.n):
                        m[i][j] -= f * m[k][j]
        return True

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_text(cls, text: str) -> "GramMatrix":
        """Plain format: first line n, then n lines of n integers; '#' comments."""
        lines = [ln for ln in (raw.split("#", 1)[0].strip() for raw in text.splitlines())
                 if ln]
        if not lines:
            raise ValueError("empty Gram file")
        n = int(lines[0])
        if len(lines) != n + 1:
            raise ValueError("expected %d matrix rows, found %d" % (n, len(lines) - 1))
        return cls([[int(v) for v in ln.split()] for ln in lines[1:]])

    @classmethod
    def from_json_dict(cls, obj: dict) -> "GramMatrix":
        g = cls(obj["gram"])
        if "n" in obj and int(obj["n"]) != g.n:
            raise ValueError("declared n=%s does not match matrix" % obj["n"])
        return g

    @classmethod
    def load(cls, path) -> "GramMatrix":
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        stripped = text.lstrip()
        if stripped.startswith("{"):
            return cls.from_json_dict(json.loads(text))
        return cls.from_text(text)

    # -- queries -----------------------------------------------------------

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    def determinant(self) -> int:
        m = [[Fraction(v) for v in row] for row in self.rows]
        det = Fraction(1)
        for k in range(self.n):
            det *= m[k][k]
            inv = 1 / m[k][k]
            for i in range(k + 1, self.n):
                if m[i][k] != 0:
                    f = m[i][k] * inv
                    for j in range(k, self.n):
                        m[i][j] -= f * m[k][j]
        assert det.denominator == 1
        return int(det)

    @property
    def is_even(self) -> bool:
        return all(self.rows[i][i] % 2 == 0 for i in range(self.n))

    def norm(self, x) -> int:
        """Exact x^T G x for an integer coordinate vector."""
        xs = [int(v) for v in x]
        return sum(xs[i] * self.rows[i][j] * xs[j]
                   for i in range(self.n) for j in range(self.n))

    def __eq__(self, other):
        return isinstance(other, GramMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "GramMatrix(n=%d)" % self.n


@dataclass(frozen=True)
class ShortVectorSet:
    """Minimal vectors up to sign, lexicographically sorted coordinate rows."""

    m: int
    vectors: np.ndarray  # (s, n) int64, first nonzero coordinate positive
    nodes: int = 0

    @property
    def s(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def kissing_number(self) -> int:
        return 2 * self.s


def _canonical_up_to_sign(arr: np.ndarray) -> np.ndarray:
    """Flip each row so its first nonzero coordinate is positive, then sort."""
    out = arr.copy()
    for i in range(out.shape[0]):
        row = out[i]
        nz = np.nonzero(row)[0]
        if nz.size and row[nz[0]] < 0:
            out[i] = -row
    order = np.lexsort(out.T[::-1])
    out = out[order]
    out.setflags(write=False)
    return out


def minimal_vectors(g: GramMatrix, node_budget: int = DEFAULT_NODE_BUDGET,
                    max_results: int = 2_000_000) -> ShortVectorSet:
    """Complete set of minimal vectors up to sign.

    Search bound is the smallest Gram diagonal (a basis vector realises it),
    so the true minimum is the smallest exact norm among the candidates.
    """
    gn = g.to_numpy()
    bound = int(min(gn[i, i] for i in range(g.n)))
    chol = np.linalg.cholesky(gn.astype(np.float64))
    r = np.ascontiguousarray(chol.T)
    slack = 1e-6 * (1.0 + bound)
    try:
        cands, nodes = _kernels.enumerate_candidates(r, float(bound), slack,
                                                     int(node_budget), int(max_results))
    except (RuntimeError, OverflowError) as exc:
        raise ResourceBudgetError(str(exc)) from exc
    if cands.shape[0] == 0:
        raise ArithmeticError("no nonzero vector found at the diagonal bound")
    # exact integer norms: int64 cannot overflow while n^2 * max|x|^2 * max|G| < 2^62
    worst = g.n * g.n * int(np.abs(cands).max()) ** 2 * int(np.abs(gn).max())
    if worst >= 2 ** 62:
        norms = np.array([g.norm(v) for v in cands], dtype=object)
    else:
        norms = np.einsum("ij,jk,ik->i", cands, gn, cands)
    m = int(norms.min())
    keep = cands[norms == m]
    return ShortVectorSet(m=m, vectors=_canonical_up_to_sign(keep), nodes=nodes)


def naive_minimal_vectors(g: GramMatrix, node_budget: int = 100_000_000) -> ShortVectorSet:
    """Independent oracle: rational box search, no floating point anywhere.

    Boxes |x_i| <= sqrt(m * (G^-1)_ii) come from the exact inverse diagonal.
    A prefix (x_1..x_d) is cut exactly when its value under the Schur
    complement of the trailing block already exceeds the bound; that is the
    minimum of the form over all real completions, so the cut can never lose
    a vector.  Every survivor is confirmed by exact integer norm.
    """
    n = g.n
    gn = g.rows
    bound = min(gn[i][i] for i in range(n))
    inv_diag = _rational_inverse_diagonal(g)
    box = [isqrt(int(bound * d.numerator // d.denominator)) + 1 for d in inv_diag]
    # integer-scaled Schur forms: sint[d] = den[d] * schur[d]
    sint: list = [None] * (n + 1)
    den = [1] * (n + 1)
    for d, s in enumerate(_schur_prefix_forms(g)):
        if d == 0:
            sint[0] = []
            continue
        lcm = 1
        for row in s:
            for v in row:
                lcm = lcm * v.denominator // gcd(lcm, v.denominator)
        den[d] = lcm
        sint[d] = [[int(v * lcm) for v in row] for row in s]

    found = []
    nodes = 0
    x = [0] * n

    def rec(level: int):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise ResourceBudgetError("naive box search budget exhausted")
        if level == n:
            nrm = g.norm(x)
            if 0 < nrm <= bound:
                found.append((nrm, x.copy()))
            return
        s1 = sint[level + 1]
        limit = bound * den[level + 1]
        # prefix value under the level+1 Schur form: a v^2 + b v + c with v = x[level]
        a = s1[level][level]
        b = 2 * sum(s1[i][level] * x[i] for i in range(level))
        c = sum(s1[i][i] * x[i] * x[i] for i in range(level))
        c += 2 * sum(s1[i][j] * x[i] * x[j]
                     for i in range(level) for j in range(i + 1, level))
        # integer interval where a v^2 + b v + c <= limit (a > 0 by definiteness)
        disc = b * b - 4 * a * (c - limit)
        if disc < 0:
            x[level] = 0
            return
        root = isqrt(disc)
        lo = -((b + root) // (2 * a))         # ceil((-b - sqrt) / (2a)), sqrt rounded down
        hi = (root - b) // (2 * a)            # floor((-b + sqrt) / (2a)), sqrt rounded down
        # the rounded sqrt can clip one valid value at either edge; fix exactly
        while lo > -box[level] and a * (lo - 1) ** 2 + b * (lo - 1) + c <= limit:
            lo -= 1
        while hi < box[level] and a * (hi + 1) ** 2 + b * (hi + 1) + c <= limit:
            hi += 1
        lo, hi = max(lo, -box[level]), min(hi, box[level])
        if all(v == 0 for v in x[:level]):
            lo = max(lo, 0)  # canonical representative: first nonzero coordinate positive
        for v in range(lo, hi + 1):
            x[level] = v
            rec(level + 1)
        x[level] = 0

    rec(0)
    if not found:
        raise ArithmeticError("no nonzero vector found at the diagonal bound")
    m = min(f[0] for f in found)
    vecs = np.array([f[1] for f in found if f[0] == m], dtype=np.int64)
    return ShortVectorSet(m=m, vectors=_canonical_up_to_sign(vecs), nodes=nodes)


def _schur_prefix_forms(g: GramMatrix) -> list[list[list[Fraction]]]:
    """schur[d] = d x d form giving min over real suffixes of the full form.

    Computed by eliminating the last coordinates one at a time:
    eliminating coordinate k maps S to S' with
    S'_ij = S_ij - S_ik S_kj / S_kk (the Schur complement of the k-th entry).
    """
    n = g.n
    cur = [[Fraction(v) for v in row] for row in g.rows]
    out: list = [None] * (n + 1)
    out[n] = [row[:] for row in cur]
    for k in range(n - 1, 0, -1):
        pivot = cur[k][k]
        nxt = [[cur[i][j] - cur[i][k] * cur[k][j] / pivot for j in range(k)]
               for i in range(k)]
        out[k] = nxt
        cur = nxt
    out[0] = []
    return out


def _rational_inverse_diagonal(g: GramMatrix) -> list[Fraction]:
    n = g.n
    aug = [[Fraction(g.rows[i][j]) for j in range(n)]
           + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        p = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[p] = aug[p], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [aug[i][n + i] for i in range(n)]


# --------------------------------------------------------------------------
# design verification

@dataclass(frozen=True)
class DesignCertificate:
    """Exact pairwise moments against their sphere-average targets."""

    n: int
    m: int
    s: int
    moments: dict[int, int]            # i -> sum over X x X of <x,y>^(2i)
    targets: dict[int, Fraction]       # i -> c_i s^2 m^(2i)
    equalities: dict[int, bool]
    strengths: dict[int, bool]         # odd strength 2i+1 -> verdict
    requested: int

    @property
    def passed(self) -> bool:
        return self.strengths[self.requested]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "minimum": self.m,
            "half_kissing": str(self.s),
            "kissing": str(2 * self.s),
            "moments": {str(2 * i): {"sum": str(v),
                                     "target": format_rational(self.targets[i]),
                                     "equal": self.equalities[i]}
                        for i, v in sorted(self.moments.items())},
            "strengths": {str(t): ok for t, ok in sorted(self.strengths.items())},
            "requested_strength": self.requested,
            "verdict": "pass" if self.passed else "fail",
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def _pair_histogram(x: np.ndarray, gn: np.ndarray, m: int, threads: int = 1) -> list[int]:
    """Exact histogram of <x_i, x_j> over ordered pairs of X (both orders)."""
    s = x.shape[0]
    n = x.shape[1]
    max_x = int(np.abs(x).max(initial=0))
    max_g = int(np.abs(gn).max(initial=0))
    if n * max_x * max_g >= 2 ** 62 // max(n * max_x, 1):
        raise OverflowError("Gram entries too large for 64-bit accumulation")
    w = x @ gn
    offset = m
    nbins = 2 * m + 1
    stripes = []
    if threads <= 1:
        hist = np.zeros(nbins, dtype=np.int64)
        _kernels.pair_histogram_block(w, x, hist, offset, 0, s)
        stripes.append(hist)
    else:
        # cut the triangle so each stripe holds the same number of pairs
        rows = np.arange(s + 1, dtype=np.float64)
        work = rows * s - rows * (rows - 1) / 2.0
        targets = np.linspace(0, work[-1], threads + 1)
        cuts = np.searchsorted(work, targets[1:-1])
        cuts = [0, *[int(c) for c in cuts], s]
        jobs = []
        for a, b in zip(cuts[:-1], cuts[1:]):
            h = np.zeros(nbins, dtype=np.int64)
            stripes.append(h)
            jobs.append((a, b, h))
        workers = [Thread(target=_kernels.pair_histogram_block,
                          args=(w, x, h, offset, a, b)) for a, b, h in jobs]
        for wk in workers:
            wk.start()
        for wk in workers:
            wk.join()
    upper = [0] * nbins
    for h in stripes:
        for i in range(nbins):
            upper[i] += int(h[i])
    # kernel counts the diagonal once and each i<j pair once; mirror the off-diagonal
    full = [2 * v for v in upper]
    full[offset + m] -= s  # diagonal <x,x> = m was doubled
    return full


def verify_design(g: GramMatrix, t: int, pair_budget: int = DEFAULT_PAIR_BUDGET,
                  force: bool = False, threads: int = 1,
                  sv: ShortVectorSet | None = None) -> DesignCertificate:
    """Decide design strength t for the minimal vectors of g.

    Uses the antipodal pairwise criterion: the full set S (both signs) has
    strength 2i+1 exactly when sum_{x,y in S} <x,y>^(2i) equals
    c_i |S|^2 m^(2i); over the half set X both sides divide by 4.  Equality
    at the top index implies the lower ones, which are still checked.
    """
    if t % 2 == 0 or t < 3:
        raise ValueError("design strength must be odd and >= 3, got %d" % t)
    if sv is None:
        sv = minimal_vectors(g)
    s, m = sv.s, sv.m
    if not force and (2 * s) ** 2 > pair_budget:
        raise ResourceBudgetError(
            "pair count %d exceeds budget %d (use force)"
            % ((2 * s) ** 2, pair_budget))
    hist = _pair_histogram(sv.vectors, g.to_numpy(), m, threads=threads)
    if sum(hist) != s * s:
        raise ArithmeticError("histogram mass %d != %d" % (sum(hist), s * s))
    i_max = (t - 1) // 2
    moments = {}
    targets = {}
    equalities = {}
    for i in range(1, i_max + 1):
        # sums over the full antipodal set S = X u -X are 4x the X x X sums
        total = 4 * sum(cnt * (v - m) ** (2 * i) for v, cnt in enumerate(hist))
        moments[i] = total
        targets[i] = design_constant(g.n, i) * (2 * s) ** 2 * m ** (2 * i)
        equalities[i] = targets[i] == total
    strengths = {2 * i + 1: equalities[i] for i in range(1, i_max + 1)}
    for i in range(1, i_max + 1):
        if equalities[i] and not all(equalities[j] for j in range(1, i)):
            raise ArithmeticError("top moment equality without lower equalities")
    return DesignCertificate(n=g.n, m=m, s=s, moments=moments, targets=targets,
                             equalities=equalities, strengths=strengths, requested=t)


@dataclass(frozen=True)
class MomentProfile:
    """Per-direction moments D_2i(alpha) over X and the |<x,alpha>| histogram."""

    alpha: tuple[int, ...]
    alpha_norm: int
    d: dict[int, int]
    histogram: dict[int, int]

    def counts(self, k: int) -> tuple[int, ...]:
        return tuple(self.histogram.get(j, 0) for j in range(1, k + 1))

    def to_json_dict(self) -> dict:
        return {
            "alpha": list(self.alpha),
            "alpha_norm": str(self.alpha_norm),
            "moments": {str(2 * i): str(v) for i, v in sorted(self.d.items())},
            "histogram": {str(j): c for j, c in sorted(self.histogram.items())},
        }


def moment_profile(g: GramMatrix, alpha, t: int,
                   sv: ShortVectorSet | None = None) -> MomentProfile:
    """Exact D_2i(alpha) = sum_{x in X} <x,alpha>^(2i) and inner-product counts."""
    avec = [int(v) for v in alpha]
    if len(avec) != g.n or not any(avec):
        raise ValueError("alpha must be a nonzero length-%d integer vector" % g.n)
    if sv is None:
        sv = minimal_vectors(g)
    galpha = [sum(g.rows[i][j] * avec[j] for j in range(g.n)) for i in range(g.n)]
    ips = [sum(int(x[i]) * galpha[i] for i in range(g.n)) for x in sv.vectors]
    hist: dict[int, int] = {}
    for v in ips:
        a = abs(v)
        hist[a] = hist.get(a, 0) + 1
    d = {}
    for i in range(1, (t - 1) // 2 + 1):
        d[i] = sum(v ** (2 * i) for v in ips)
    return MomentProfile(alpha=tuple(avec),
                         alpha_norm=sum(a * ga for a, ga in zip(avec, galpha)),
                         d=d, histogram=hist)


def even_sublattice(g: GramMatrix) -> GramMatrix:
    """Gram matrix of the even-norm sublattice (index 2 when g is odd).

    Norm parity is the linear functional x -> sum_i x_i G_ii (mod 2); the
    kernel basis is {e_j (even diag), e_j + e_p (odd diag, j != p), 2 e_p}
    for a pivot p with odd diagonal.  Even input is returned unchanged.
    """
    parity = [g.rows[i][i] % 2 for i in range(g.n)]
    if not any(parity):
        return g
    p = parity.index(1)
    basis = []
    for j in range(g.n):
        if j == p:
            continue
        row = [0] * g.n
        row[j] = 1
        if parity[j]:
            row[p] += 1
        basis.append(row)
    last = [0] * g.n
    last[p] = 2
    basis.append(last)
    tmat = basis
    gn = g.rows
    new = [[sum(tmat[a][i] * gn[i][j] * tmat[b][j]
                for i in range(g.n) for j in range(g.n))
            for b in range(g.n)] for a in range(g.n)]
    return GramMatrix(new)
