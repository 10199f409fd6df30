"""Exact rational scalars, dense matrices and univariate polynomials.

Everything downstream (moment systems, feasibility scans, dual-class
elimination) runs on these primitives; no floating point enters any result.
Scalars are ``fractions.Fraction`` (arbitrary precision, always in lowest
terms with positive denominator), re-exported as ``Rational``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "QMatrix",
    "QPolynomial",
    "SingularReport",
    "solve_square",
    "solve_linear_system",
    "determinant",
    "rational_roots",
    "format_rational",
    "parse_rational",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("float is not allowed in exact arithmetic: %r" % (x,))
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    """Serialize as "p/q", with "/q" omitted for integers."""
    x = _frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


class QMatrix:
    """Dense matrix over the rationals (row-major, immutable)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, data: Sequence[Sequence]):
        rows = [tuple(_frac(v) for v in row) for row in data]
        if not rows:
            raise ValueError("matrix needs at least one row")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(v for row in rows for v in row))

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_lists(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch: %dx%d @ %dx%d"
                             % (self.rows, self.cols, other.rows, other.cols))
        orows = other.to_lists()
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.append([sum(r[k] * orows[k][j] for k in range(self.cols))
                        for j in range(other.cols)])
        return QMatrix(out)

    def mul_vec(self, v: Sequence) -> list[Fraction]:
        vv = [_frac(x) for x in v]
        if len(vv) != self.cols:
            raise ValueError("vector length %d != cols %d" % (len(vv), self.cols))
        return [sum(self.row(i)[k] * vv[k] for k in range(self.cols))
                for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        return (isinstance(other, QMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return "QMatrix(%r)" % ([list(map(str, self.row(i))) for i in range(self.rows)],)


@dataclass(frozen=True)
class SingularReport:
    """Returned by solve_square when the matrix has no unique solution."""

    rank: int
    consistent: bool = True


def _eliminate(aug: list[list[Fraction]], ncols: int):
    """In-place Gauss-Jordan on an augmented matrix; returns pivot columns.

    Partial pivoting on the first nonzero entry: any nonzero pivot is safe
    in exact arithmetic.
    """
    nrows = len(aug)
    piv_cols = []
    r = 0
    for col in range(ncols):
        p = None
        for i in range(r, nrows):
            if aug[i][col] != 0:
                p = i
                break
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(col)
        r += 1
        if r == nrows:
            break
    return piv_cols


def solve_linear_system(a: QMatrix, b: Sequence):
    """Exact solve of a (possibly rectangular) system a·x = b.

    Returns a list of Fractions when the solution exists and is unique,
    otherwise a SingularReport (consistent=False when no solution at all).
    """
    bb = [_frac(v) for v in b]
    if len(bb) != a.rows:
        raise ValueError("rhs length %d != rows %d" % (len(bb), a.rows))
    aug = [list(a.row(i)) + [bb[i]] for i in range(a.rows)]
    piv = _eliminate(aug, a.cols)
    rank = len(piv)
    for i in range(rank, a.rows):
        if aug[i][a.cols] != 0:
            return SingularReport(rank=rank, consistent=False)
    if rank < a.cols:
        return SingularReport(rank=rank, consistent=True)
    x = [Fraction(0)] * a.cols
    for i, col in enumerate(piv):
        x[col] = aug[i][a.cols]
    return x


def solve_square(a: QMatrix, b: Sequence):
    """Exact solve of a square system; SingularReport when det = 0."""
    if a.rows != a.cols:
        raise ValueError("matrix is %dx%d, not square" % (a.rows, a.cols))
    return solve_linear_system(a, b)


def determinant(a: QMatrix) -> Fraction:
    """Exact determinant by rational elimination (product of pivots)."""
    if a.rows != a.cols:
        raise ValueError("matrix is %dx%d, not square" % (a.rows, a.cols))
    n = a.rows
    m = a.to_lists()
    det = Fraction(1)
    for col in range(n):
        p = None
        for i in range(col, n):
            if m[i][col] != 0:
                p = i
                break
        if p is None:
            return Fraction(0)
        if p != col:
            m[col], m[p] = m[p], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return det


class QPolynomial:
    """Univariate polynomial over the rationals, coefficients ascending.

    The zero polynomial has an empty coefficient tuple; otherwise the
    leading coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("QPolynomial is immutable")

    @classmethod
    def monomial(cls, coeff, degree: int) -> "QPolynomial":
        return cls([0] * degree + [coeff])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with the convention that the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return QPolynomial(out)

    def __neg__(self) -> "QPolynomial":
        return QPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: "QPolynomial") -> "QPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "QPolynomial":
        if not isinstance(other, QPolynomial):
            f = _frac(other)
            return QPolynomial([c * f for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return QPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            if ci == 0:
                continue
            for j, cj in enumerate(other.coeffs):
                out[i + j] += ci * cj
        return QPolynomial(out)

    __rmul__ = __mul__

    def __call__(self, x) -> Fraction:
        """Exact evaluation (Horner)."""
        xx = _frac(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * xx + c
        return acc

    def primitive_integer(self) -> "QPolynomial":
        """Scale to coprime integer coefficients with positive leading one."""
        if self.is_zero:
            return self
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return QPolynomial(ints)

    def __eq__(self, other) -> bool:
        return isinstance(other, QPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "QPolynomial([%s])" % ", ".join(format_rational(c) for c in self.coeffs)

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                term = format_rational(abs(c))
            else:
                mag = "" if abs(c) == 1 else format_rational(abs(c)) + "*"
                term = "%st%s" % (mag, "" if i == 1 else "^%d" % i)
            parts.append(("- " if c < 0 else "+ ") + term)
        body = " ".join(parts)
        return body[2:] if body.startswith("+ ") else "-" + body[2:]


def _divisors(n: int) -> list[int]:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return out


def rational_roots(p: QPolynomial) -> set[Fraction]:
    """Complete set of rational roots of a nonzero polynomial.

    Clears denominators to a primitive integer polynomial, strips powers of
    t (recording 0 as a root), then tests every +/- (divisor of constant) /
    (divisor of leading) candidate by exact evaluation.  Multiplicities are
    not reported.
    """
    if p.is_zero:
        raise ValueError("zero polynomial: every value is a root")
    q = p.primitive_integer()
    coeffs = list(q.coeffs)
    roots: set[Fraction] = set()
    shift = 0
    while coeffs[shift] == 0:
        shift += 1
    if shift:
        roots.add(Fraction(0))
        coeffs = coeffs[shift:]
    if len(coeffs) == 1:
        return roots
    stripped = QPolynomial(coeffs)
    a0 = abs(int(coeffs[0]))
    an = abs(int(coeffs[-1]))
    for num in _divisors(a0):
        for den in _divisors(an):
            cand = Fraction(num, den)
            if cand.numerator != num or cand.denominator != den:
                continue  # reducible pair already covered
            for r in (cand, -cand):
                if stripped(r) == 0:
                    roots.add(r)
    return roots
