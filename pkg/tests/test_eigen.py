from fractions import Fraction

import pytest
from conftest import HERMITE, T1, T2, T3
from test_operators import degenerate_operators
from hypothesis import given
from hypothesis import strategies as st

from eigenroot.dsl import parse_operator
from eigenroot.eigen import EigenPair, SpectralCollision, eigenpolynomial, verify_eigen
from eigenroot.operators import eigenvalue
from eigenroot.poly import ExactPolynomial, Z


def hermite_he(n):
    """Probabilists' Hermite polynomials by the three-term recurrence, as
    integer coefficient lists (ascending)."""
    prev, cur = [1], [0, 1]
    if n == 0:
        return prev
    for k in range(1, n):
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= k * c
        prev, cur = cur, nxt
    return cur


def rotated_hermite(n):
    """Coefficients of i^(-n) He_n(i z); every surviving coefficient is real."""
    out = []
    for m, c in enumerate(hermite_he(n)):
        # i^(m - n) is real because only m = n mod 2 survives
        assert c == 0 or (n - m) % 2 == 0
        out.append(c * (-1) ** ((n - m) // 2) if c else 0)
    return ExactPolynomial(tuple(Fraction(c) for c in out))


def test_hermite_oracle_small_cases_by_hand():
    assert hermite_he(2) == [-1, 0, 1]
    assert rotated_hermite(1) == Z
    assert rotated_hermite(2) == Z ** 2 + 1


def test_spec_examples():
    pair = eigenpolynomial(HERMITE, 2)
    assert pair.p == Z ** 2 + 1 and pair.lam == 2
    assert eigenpolynomial(HERMITE, 1).p == Z
    with pytest.raises(SpectralCollision) as info:
        eigenpolynomial(parse_operator("-2*z*D + z^2*D^2 + D^3"), 2)
    assert info.value.m == 1


def test_verify_eigen_examples():
    p = Z ** 2 + 1
    assert verify_eigen(HERMITE, EigenPair(2, p, Fraction(2))).is_zero()
    assert verify_eigen(HERMITE, EigenPair(2, p, Fraction(3))) == -p
    assert verify_eigen(T1, eigenpolynomial(T1, 10)).is_zero()


@pytest.mark.parametrize("n", range(0, 61, 5))
def test_matches_hermite_oracle(n):
    n = max(n, 1)
    assert eigenpolynomial(HERMITE, n).p == rotated_hermite(n)


@pytest.mark.parametrize("T", [T1, T2, T3, HERMITE], ids=["T1", "T2", "T3", "hermite"])
def test_exact_eigen_fleet(T):
    for n in range(1, 61, 7):
        try:
            pair = eigenpolynomial(T, n)
        except SpectralCollision:
            continue
        assert pair.p.is_monic() and pair.p.degree == n
        assert pair.lam == eigenvalue(T, n)
        assert verify_eigen(T, pair).is_zero()


@given(degenerate_operators(), st.integers(1, 25))
def test_random_operators_satisfy_the_eigen_equation(T, n):
    try:
        pair = eigenpolynomial(T, n)
    except SpectralCollision as exc:
        assert eigenvalue(T, exc.m) == eigenvalue(T, n)
        return
    assert verify_eigen(T, pair).is_zero()


@pytest.mark.parametrize("T, g", [(HERMITE, 2), (T2, 7), (parse_operator("z*D + z*D^3 + D^4"), 2)],
                         ids=["hermite", "T2", "mixed"])
def test_shift_selection_rule(T, g):
    """If every term q_{j,i} z^i D^j has j - i divisible by g, only powers
    congruent to n mod g survive."""
    assert all((j - i) % g == 0 for j, q in T.terms.items() for i, c in enumerate(q.coeffs) if c)
    for n in (9, 14, 21):
        p = eigenpolynomial(T, n).p
        assert all(c == 0 for m, c in enumerate(p.coeffs) if (m - n) % g)
        assert any(c != 0 for m, c in enumerate(p.coeffs) if m < n)
