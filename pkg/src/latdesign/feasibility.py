"""Dimension scan for integral solutions of the count systems.

For every dimension in range the square (or overdetermined) count system is
solved exactly; a dimension is feasible iff the unique solution has a
positive integer s and non-negative integer counts.  Solutions in which some
count vanishes are kept but flagged: they are excluded from the strict
tables (vanishing odd counts are the signature of a rescaled lattice with a
smaller minimum).
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd

from .exactmath import SingularReport, solve_linear_system
from .moments import DesignProblem, build_count_system

__all__ = ["FeasibleSolution", "ScanReport", "scan", "brute_force_check",
           "OracleBudgetExceeded"]

DEFAULT_N_MAX = 512


@dataclass(frozen=True)
class FeasibleSolution:
    """One admissible (n, s, s_1..s_k) row."""

    n: int
    s: int
    counts: tuple[int, ...]

    @property
    def strict(self) -> bool:
        """True when every count is positive (the tables use this form)."""
        return all(c > 0 for c in self.counts)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "s": str(self.s),
            "counts": {"s_%d" % (j + 1): str(c) for j, c in enumerate(self.counts)},
            "strict": self.strict,
        }


@dataclass(frozen=True)
class ScanReport:
    """Outcome of a scan; every n in range is feasible, infeasible or singular."""

    problem: DesignProblem
    n_min: int
    n_max: int
    solutions: tuple[FeasibleSolution, ...]
    singular: tuple[int, ...]
    singular_reasons: dict[int, str] = field(default_factory=dict)

    @property
    def strict_solutions(self) -> tuple[FeasibleSolution, ...]:
        return tuple(s for s in self.solutions if s.strict)

    @property
    def zero_count_solutions(self) -> tuple[FeasibleSolution, ...]:
        return tuple(s for s in self.solutions if not s.strict)

    def to_json_dict(self) -> dict:
        return {
            "problem": {"m": self.problem.m, "t": self.problem.t,
                        "k": self.problem.k, "r": self.problem.r},
            "range": [self.n_min, self.n_max],
            "solutions": [s.to_json_dict() for s in self.solutions],
            "singular": [{"n": n, "reason": self.singular_reasons.get(n, "singular")}
                         for n in self.singular],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def _scan_one(problem: DesignProblem, n: int):
    """Classify a single dimension: ('sol', FeasibleSolution) | ('sing', reason) | None."""
    if n < problem.min_dimension:
        return ("sing", "moment constants undefined below n=%d" % problem.min_dimension)
    sys_ = build_count_system(problem, n)
    x = solve_linear_system(sys_.matrix, sys_.rhs)
    if isinstance(x, SingularReport):
        if x.rank == sys_.matrix.cols:
            return None  # full column rank but inconsistent: provably no solution
        detail = "inconsistent" if not x.consistent else "solutions not unique"
        return ("sing", "rank %d < %d unknowns, %s"
                % (x.rank, sys_.matrix.cols, detail))
    counts, s = x[:-1], x[-1]
    if s.denominator != 1 or s < 1:
        return None
    if any(c.denominator != 1 or c < 0 for c in counts):
        return None
    return ("sol", FeasibleSolution(n=n, s=int(s), counts=tuple(int(c) for c in counts)))


def scan(problem: DesignProblem, n_min: int = 1, n_max: int = DEFAULT_N_MAX,
         threads: int = 1) -> ScanReport:
    """Exact feasibility scan over n_min..n_max (inclusive).

    Dimensions are independent; with threads > 1 they are processed in
    chunks and merged in dimension order, so the report does not depend on
    the chunking.
    """
    if n_max < n_min:
        raise ValueError("empty range %d..%d" % (n_min, n_max))
    ns = range(n_min, n_max + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda n: _scan_one(problem, n), ns, chunksize=32))
    else:
        results = [_scan_one(problem, n) for n in ns]
    solutions = []
    singular = []
    reasons = {}
    for n, res in zip(ns, results):
        if res is None:
            continue
        kind, payload = res
        if kind == "sol":
            solutions.append(payload)
        else:
            singular.append(n)
            reasons[n] = payload
    return ScanReport(problem=problem, n_min=n_min, n_max=n_max,
                      solutions=tuple(solutions), singular=tuple(singular),
                      singular_reasons=reasons)


class OracleBudgetExceeded(RuntimeError):
    """The exhaustive search ran past its iteration budget."""


def brute_force_check(problem: DesignProblem, n: int, s_max: int,
                      count_max: int | None = None,
                      budget: int = 200_000_000) -> list[FeasibleSolution]:
    """Independent oracle: exhaustive search over integer count tuples.

    For each candidate s it enumerates the free counts (s_k..s_3), pins s_2
    by the difference of the first two equations and s_1 by the first
    equation, then verifies every equation of the system by direct
    substitution.  Uses only integer arithmetic on the original equations;
    shares no code with the Gaussian solver.

    Candidate s values are pre-filtered by the observation that each
    equation's left side is a non-negative integer, so each right side must
    be one too.  Raises OracleBudgetExceeded when the iteration budget runs
    out rather than returning a possibly incomplete answer.
    """
    m, k, r = problem.m, problem.k, problem.r
    if n < problem.min_dimension:
        return []
    # rhs_i(s) = c_i s m^{2i} - m^{2i} as an exact pair (num, den) with s symbolic:
    # c_i = odd_i / den_i where den_i = n(n+2)...(n+2i-2), odd_i = 1*3*...*(2i-1).
    coef = []  # (a_i, b_i): rhs_i = (a_i * s) / b_i - m^{2i}
    for i in range(1, r + 1):
        num = m ** (2 * i)
        den = 1
        for kk in range(i):
            num *= 1 + 2 * kk
            den *= n + 2 * kk
        g = gcd(num, den)
        coef.append((num // g, den // g))
    powers = [[j ** (2 * i) for j in range(0, k + 1)] for i in range(0, r + 1)]

    def rhs_values(s: int) -> list[int] | None:
        out = []
        for (a, b), i in zip(coef, range(1, r + 1)):
            v, rem = divmod(a * s, b)
            if rem:
                return None
            v -= m ** (2 * i)
            if v < 0:
                return None
            out.append(v)
        return out

    found: list[FeasibleSolution] = []
    steps = 0
    for s in range(1, s_max + 1):
        rhs = rhs_values(s)
        if rhs is None:
            continue
        cmax = rhs[0] if count_max is None else min(count_max, rhs[0])
        # delta = eq2 - eq1 eliminates s_1: sum_{j>=2} j^2 (j^2 - 1) s_j = rhs[1] - rhs[0]
        delta = rhs[1] - rhs[0]
        if delta < 0:
            continue

        def rec(j: int, used: int, dused: int, tail: list[int]):
            nonlocal steps
            steps += 1
            if steps > budget:
                raise OracleBudgetExceeded("budget exhausted at s=%d" % s)
            if j == 2:
                rem = delta - dused
                s2, r2 = divmod(rem, 12)  # 2^2(2^2-1) = 12
                if r2 or s2 < 0 or s2 > cmax:
                    return
                s1 = rhs[0] - used - 4 * s2
                if s1 < 0 or s1 > cmax:
                    return
                counts = (s1, s2, *reversed(tail))
                for i in range(1, r + 1):
                    if sum(powers[i][j2] * counts[j2 - 1] for j2 in range(1, k + 1)) != rhs[i - 1]:
                        return
                found.append(FeasibleSolution(n=n, s=s, counts=counts))
                return
            w, dw = j * j, j * j * (j * j - 1)
            top = min(cmax, (rhs[0] - used) // w, (delta - dused) // dw)
            for sj in range(top + 1):
                rec(j - 1, used + w * sj, dused + dw * sj, tail + [sj])

        if k == 1:
            # single count: s_1 = rhs[0], verify the rest
            s1 = rhs[0]
            if s1 <= cmax and all(rhs[i - 1] == s1 for i in range(2, r + 1)):
                found.append(FeasibleSolution(n=n, s=s, counts=(s1,)))
            steps += 1
        else:
            rec(k, 0, 0, [])
    found.sort(key=lambda f: (f.n, f.s, f.counts))
    return found
