"""Monic eigenpolynomials by back-substitution in the monomial basis.

T maps z^m to a polynomial of degree <= m, so its matrix in the basis
1, z, ..., z^n is upper triangular with diagonal lambda_m. The monic solution
of T p = lambda_n p is unique exactly when lambda_m != lambda_n for m < n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .operators import DifferentialOperator, diagonal, eigenvalue, apply, require_degenerate
from .poly import ExactPolynomial, falling


class SpectralCollision(ArithmeticError):
    """lambda_m == lambda_n for some m < n; p_n is not uniquely determined."""

    def __init__(self, n: int, m: int):
        super().__init__(f"lambda_{m} == lambda_{n}: eigenpolynomial of degree {n} is not unique")
        self.n = n
        self.m = m


@dataclass(frozen=True)
class EigenPair:
    n: int
    p: ExactPolynomial
    lam: Fraction


def eigenpolynomial(T: DifferentialOperator, n: int) -> EigenPair:
    if n < 1:
        raise ValueError("degree must be positive")
    require_degenerate(T)
    lam = eigenvalue(T, n)
    # shift s = m' - m = j - i for the term q_{j,i} z^i D^j
    bands = [(j, i, c) for j, q in T.terms.items() for i, c in enumerate(q.coeffs) if c and j > i]
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    for m in range(n - 1, -1, -1):
        rhs = Fraction(0)
        for j, i, q in bands:
            mp = m + j - i
            if mp <= n and mp >= j and c[mp]:
                rhs -= q * falling(mp, j) * c[mp]
        gap = diagonal(T, m) - lam
        if gap == 0:
            raise SpectralCollision(n, m)
        c[m] = rhs / gap
    return EigenPair(n, ExactPolynomial(tuple(c)), lam)


def verify_eigen(T: DifferentialOperator, pair: EigenPair) -> ExactPolynomial:
    """Exact residual T(p) - lambda p."""
    return apply(T, pair.p) - pair.p.scale(pair.lam)
