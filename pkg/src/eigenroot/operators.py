"""Exactly-solvable differential operators T = sum_j Q_j(z) D^j."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .poly import ExactPolynomial, falling


class Kind(enum.Enum):
    DEGENERATE = "degenerate"
    NON_DEGENERATE = "non-degenerate"
    INVALID = "invalid"


@dataclass(frozen=True)
class DifferentialOperator:
    """Map from derivative order j >= 1 to its coefficient polynomial Q_j.

    Zero coefficients are kept as given so that validation can see them; the
    order k is the largest stored j.
    """

    terms: Mapping[int, ExactPolynomial]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("operator has no terms")
        for j, q in self.terms.items():
            if not isinstance(j, int) or j < 1:
                raise ValueError(f"derivative order must be a positive integer, got {j!r}")
            if not isinstance(q, ExactPolynomial):
                raise TypeError(f"Q_{j} must be an ExactPolynomial")
        object.__setattr__(self, "terms", dict(sorted(self.terms.items())))

    @property
    def order(self) -> int:
        return max(self.terms)

    def q(self, j: int) -> ExactPolynomial:
        return self.terms.get(j, ExactPolynomial())

    def coefficient(self, j: int, i: int) -> Fraction:
        """q_{j,i}: coefficient of z^i in Q_j."""
        return self.q(j).coeff(i)

    def scale(self, c) -> "DifferentialOperator":
        return DifferentialOperator({j: q.scale(c) for j, q in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, DifferentialOperator):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __str__(self):
        from .dsl import format_operator

        return format_operator(self)


@dataclass(frozen=True)
class Classification:
    kind: Kind
    j0: int | None = None
    d: Fraction | None = None
    A: frozenset[int] = field(default_factory=frozenset)
    jm: int | None = None
    reason: str = ""

    @property
    def is_degenerate(self) -> bool:
        return self.kind is Kind.DEGENERATE


class NotDegenerate(ValueError):
    """Operation requires a degenerate exactly-solvable operator."""


def classify(T: DifferentialOperator) -> Classification:
    k = T.order
    if T.q(k).is_zero():
        return Classification(Kind.INVALID, reason=f"leading coefficient Q_{k} is zero")
    for j, q in T.terms.items():
        if q.degree > j:
            return Classification(Kind.INVALID, reason=f"deg Q_{j} = {q.degree} exceeds {j}")
    attaining = [j for j, q in T.terms.items() if q.degree == j]
    if not attaining:
        return Classification(Kind.INVALID, reason="no j with deg Q_j = j")
    j0 = max(attaining)
    if j0 == k:
        return Classification(Kind.NON_DEGENERATE, j0=j0, reason=f"deg Q_{k} = {k}")

    ratios = {}
    for j, q in T.terms.items():
        if j <= j0 or q.is_zero():
            continue
        ratios[j] = Fraction(j - j0, j - int(q.degree))
    d = max(ratios.values())
    A = frozenset(j for j, r in ratios.items() if r == d)
    return Classification(Kind.DEGENERATE, j0=j0, d=d, A=A, jm=max(A))


def require_degenerate(T: DifferentialOperator) -> Classification:
    c = classify(T)
    if not c.is_degenerate:
        raise NotDegenerate(f"operator is {c.kind.value}" + (f": {c.reason}" if c.reason else ""))
    return c


def eigenvalue(T: DifferentialOperator, n: int) -> Fraction:
    """lambda_n = sum_j q_{j,j} n!/(n-j)!, the z^n coefficient of T(z^n)."""
    c = require_degenerate(T)
    return sum((T.coefficient(j, j) * falling(n, j) for j in T.terms if j <= c.j0), Fraction(0))


def diagonal(T: DifferentialOperator, m: int) -> Fraction:
    """z^m coefficient of T(z^m), without requiring a degenerate operator."""
    return sum((T.coefficient(j, j) * falling(m, j) for j in T.terms), Fraction(0))


def apply(T: DifferentialOperator, p: ExactPolynomial) -> ExactPolynomial:
    out = ExactPolynomial()
    for j, q in T.terms.items():
        if q.is_zero():
            continue
        dp = p.differentiate(j)
        if not dp.is_zero():
            out = out + q * dp
    return out


def matrix_entry(T: DifferentialOperator, m: int, mp: int) -> Fraction:
    """z^m coefficient of T(z^mp)."""
    total = Fraction(0)
    for j, q in T.terms.items():
        i = m - mp + j
        if 0 <= i < len(q.coeffs) and mp >= j:
            total += q.coeffs[i] * falling(mp, j)
    return total
