"""Moment constants and the two families of exact linear systems.

For an antipodal set of ``2s`` vectors of norm ``m`` in dimension ``n``,
equality of the even moments with the sphere averages gives linear
conditions on the inner-product counts.  Two instances appear here:

* the count system, over the integers ``s_1..s_k`` (pairs of minimal
  vectors at inner product +/-j) together with ``s`` itself, and
* the dual-class system, over ``t_1..t_k`` with the squared dual norm
  ``t`` kept symbolic, so each right-hand side is a polynomial in ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactmath import QMatrix, QPolynomial

__all__ = ["DesignProblem", "CountSystem", "DualSystem",
           "design_constant", "build_count_system", "build_dual_system"]


@dataclass(frozen=True)
class DesignProblem:
    """Parameters of one classification run.

    m: lattice minimum; t: odd design strength.  k = floor(m/2) bounds the
    inner products of distinct non-proportional minimal vectors, r = (t-1)/2
    is the number of even-moment equations.
    """

    m: int
    t: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("minimum must be >= 2, got %d" % self.m)
        if self.t < 5 or self.t % 2 == 0:
            raise ValueError("design strength must be odd and >= 5, got %d" % self.t)
        if self.r < self.k:
            raise ValueError("need at least k moment equations: m=%d, t=%d"
                             % (self.m, self.t))

    @property
    def k(self) -> int:
        return self.m // 2

    @property
    def r(self) -> int:
        return (self.t - 1) // 2

    @property
    def min_dimension(self) -> int:
        """Smallest n for which all moment constants are defined."""
        return 2 * self.r - 1


@dataclass(frozen=True)
class CountSystem:
    """r x (k+1) system in the unknowns (s_1..s_k, s)."""

    matrix: QMatrix
    rhs: tuple[Fraction, ...]
    labels: tuple[str, ...]


@dataclass(frozen=True)
class DualSystem:
    """r x k system in (t_1..t_k); rhs entry i is a degree-i polynomial in t."""

    matrix: QMatrix
    rhs: tuple[QPolynomial, ...]
    labels: tuple[str, ...]


def design_constant(n: int, i: int) -> Fraction:
    """Ratio of the 2i-th sphere moment to m^i(alpha,alpha)^i in dimension n.

    c_i = prod_{k=0}^{i-1} (1+2k)/(n+2k); c_0 = 1 (empty product).
    """
    if i < 0:
        raise ValueError("moment index must be >= 0")
    if n < 1:
        raise ValueError("dimension must be positive, got %d" % n)
    v = Fraction(1)
    for k in range(i):
        v *= Fraction(1 + 2 * k, n + 2 * k)
    return v


def build_count_system(p: DesignProblem, n: int) -> CountSystem:
    """Moment equations for the minimal-vector counts, s-term moved left.

    Row i (i = 1..r):  sum_j j^(2i) s_j  -  c_i m^(2i) s  =  -m^(2i).
    """
    rows = []
    rhs = []
    for i in range(1, p.r + 1):
        ci = design_constant(n, i)
        m2i = p.m ** (2 * i)
        rows.append([Fraction(j ** (2 * i)) for j in range(1, p.k + 1)] + [-ci * m2i])
        rhs.append(Fraction(-m2i))
    labels = tuple("s_%d" % j for j in range(1, p.k + 1)) + ("s",)
    return CountSystem(matrix=QMatrix(rows), rhs=tuple(rhs), labels=labels)


def build_dual_system(p: DesignProblem, n: int, s: int) -> DualSystem:
    """Moment equations for the dual-class counts at symbolic dual norm t.

    Row i (i = 1..r):  sum_j j^(2i) t_j  =  c_i s m^i t^i.
    """
    if s <= 0:
        raise ValueError("half kissing number must be positive, got %r" % (s,))
    rows = []
    rhs = []
    for i in range(1, p.r + 1):
        ci = design_constant(n, i)
        rows.append([Fraction(j ** (2 * i)) for j in range(1, p.k + 1)])
        rhs.append(QPolynomial.monomial(ci * s * p.m ** i, i))
    labels = tuple("t_%d" % j for j in range(1, p.k + 1))
    return DualSystem(matrix=QMatrix(rows), rhs=tuple(rhs), labels=labels)
