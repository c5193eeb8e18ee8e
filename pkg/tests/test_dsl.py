from fractions import Fraction

import pytest
from conftest import T1, T2, T3
from test_operators import degenerate_operators
from hypothesis import given

from eigenroot.dsl import OperatorSyntaxError, ValidationError, format_operator, parse_operator, parse_polynomial, parse_terms
from eigenroot.operators import DifferentialOperator
from eigenroot.poly import ExactPolynomial, Z


def test_figure_operators():
    assert parse_operator("z*D + z*D^2 + z*D^3 + z*D^4 + z*D^5") == DifferentialOperator({j: Z for j in range(1, 6)})
    assert parse_operator("z^2*D^2 + D^7") == DifferentialOperator({2: Z ** 2, 7: ExactPolynomial.of(1)})


def test_validation_error():
    with pytest.raises(ValidationError):
        parse_operator("z^3*D^2")
    with pytest.raises(ValidationError):
        parse_operator("D^2")
    with pytest.raises(ValidationError):
        parse_operator("z*D + D^2 - D^2")


def test_grammar_variants():
    T = parse_operator("  -3/4 (z^2 - 1/2) D^2 + 2 z D+D ")
    assert T.q(1) == Z.scale(2) + 1
    assert T.q(2) == (Z ** 2 - Fraction(1, 2)).scale(Fraction(-3, 4))
    assert parse_operator("z*D + D") == parse_operator("(z + 1)*D")
    assert parse_terms("1*D").q(1) == ExactPolynomial.of(1)


def test_parse_polynomial():
    assert parse_polynomial("2*z^3 - z + 1/2") == ExactPolynomial.of(Fraction(1, 2), -1, 0, 2)
    assert parse_polynomial("-z") == -Z


@pytest.mark.parametrize("text, position", [
    ("", 0),
    ("z*D +", 5),
    ("z*D + * D", 6),
    ("z*D ++ D^2", 5),
    ("z^x*D", 2),
    ("(z + 1*D", 7),
    ("z*D D", 4),
    ("1/0*D", 2),
    ("z*D + 1.5*D^2", 7),
    ("z*D + q", 6),
    ("z*D^", 4),
    ("(z+)*D", 3),
    ("z*D + D^0", 8),
])
def test_error_positions_point_at_first_offending_byte(text, position):
    with pytest.raises(OperatorSyntaxError) as info:
        parse_operator(text)
    assert info.value.position == position
    assert info.value.expected


@pytest.mark.parametrize("T", [T1, T2, T3])
def test_round_trip_figure_operators(T):
    assert parse_operator(format_operator(T)) == T


@given(degenerate_operators())
def test_round_trip_random(T):
    assert parse_terms(format_operator(T)) == T
