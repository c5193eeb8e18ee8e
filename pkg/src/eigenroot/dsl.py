"""Concrete syntax for operators, e.g. ``z*D + z*D^2`` or ``(z^2 - 1/2)*D^2 + D^7``.

    operator := term (('+' | '-') term)*
    term     := ['-'] [rational] ['*'] [zpart] ['*'] dpart
    zpart    := 'z' ['^' uint] | '(' polynomial ')'
    dpart    := 'D' ['^' uint]
    rational := uint ['/' uint]

Whitespace is ignored. Coefficients are exact rationals; repeated derivative
orders add up.
"""

from __future__ import annotations

from fractions import Fraction

from .operators import DifferentialOperator, Kind, classify
from .poly import ExactPolynomial, format_fraction, format_polynomial


class OperatorSyntaxError(ValueError):
    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        detail = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at position {position}{detail}")
        self.position = position
        self.expected = expected


class ValidationError(ValueError):
    """Parsed operator is not exactly solvable."""


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, message, *expected):
        self.skip()
        found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
        raise OperatorSyntaxError(f"{message}, found {found}", self.pos, expected)

    def accept(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def uint(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected an unsigned integer", "digit")
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        num = self.uint()
        if self.accept("/"):
            den_pos = self.pos
            den = self.uint()
            if den == 0:
                self.skip()
                raise OperatorSyntaxError("zero denominator", den_pos + (len(self.text[den_pos:]) - len(self.text[den_pos:].lstrip())), ("nonzero integer",))
            return Fraction(num, den)
        return Fraction(num)

    def exponent(self) -> int:
        if self.accept("^"):
            return self.uint()
        return 1

    def monomial_z(self) -> ExactPolynomial:
        self.pos += 1  # the 'z'
        return ExactPolynomial.monomial(self.exponent())

    # polynomial inside parentheses
    def polynomial(self) -> ExactPolynomial:
        total = self.poly_term(leading=True)
        while self.peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
            total = total + self.poly_term().scale(sign)
        return total

    def poly_term(self, leading=False) -> ExactPolynomial:
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        coeff = None
        if self.peek().isdigit():
            coeff = self.rational()
            if self.peek() == "*":
                self.pos += 1
                if self.peek() != "z":
                    self.fail("expected 'z' after '*'", "'z'")
        if self.peek() == "z":
            mono = self.monomial_z()
        elif coeff is None:
            self.fail("expected a polynomial term", "digit", "'z'", "'-'")
        else:
            mono = ExactPolynomial.constant(1)
        return mono.scale(sign * (coeff if coeff is not None else 1))

    def term(self) -> tuple[int, ExactPolynomial]:
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        coeff = Fraction(1)
        if self.peek().isdigit():
            coeff = self.rational()
            self.accept("*")
        q = ExactPolynomial.constant(1)
        ch = self.peek()
        if ch == "z":
            q = self.monomial_z()
            self.accept("*")
        elif ch == "(":
            self.pos += 1
            q = self.polynomial()
            if not self.accept(")"):
                self.fail("unbalanced parenthesis", "')'", "'+'", "'-'")
            self.accept("*")
        if self.peek() != "D":
            self.fail("expected a derivative D", "'D'", "'z'", "'('", "digit")
        self.pos += 1
        order = self.exponent()
        if order < 1:
            raise OperatorSyntaxError("derivative order must be at least 1", self.pos - 1, ("positive integer",))
        return order, q.scale(sign * coeff)

    def operator(self) -> dict[int, ExactPolynomial]:
        terms: dict[int, ExactPolynomial] = {}

        def add(j, q):
            terms[j] = terms.get(j, ExactPolynomial()) + q

        add(*self.term())
        while True:
            ch = self.peek()
            if ch == "":
                return terms
            if ch not in "+-":
                self.fail("expected '+' or '-' between terms", "'+'", "'-'", "end of input")
            self.pos += 1
            j, q = self.term()
            add(j, q.scale(-1) if ch == "-" else q)


def parse_terms(text: str) -> DifferentialOperator:
    """Parse without validating exact solvability."""
    p = _Parser(text)
    if p.peek() == "":
        p.fail("empty operator", "term")
    return DifferentialOperator(p.operator())


def parse_operator(text: str) -> DifferentialOperator:
    T = parse_terms(text)
    c = classify(T)
    if c.kind is Kind.INVALID:
        raise ValidationError(f"not an exactly-solvable operator: {c.reason}")
    return T


def parse_polynomial(text: str) -> ExactPolynomial:
    p = _Parser(text)
    q = p.polynomial()
    if p.peek() != "":
        p.fail("trailing input after polynomial", "'+'", "'-'", "end of input")
    return q


def _format_term(j: int, q: ExactPolynomial) -> tuple[str, str]:
    d = "D" if j == 1 else f"D^{j}"
    if q.is_zero():
        return "+", f"0*{d}"
    nonzero = [i for i, c in enumerate(q.coeffs) if c]
    if len(nonzero) == 1:
        i = nonzero[0]
        c = q.coeffs[i]
        parts = []
        if abs(c) != 1:
            parts.append(format_fraction(abs(c)))
        if i:
            parts.append("z" if i == 1 else f"z^{i}")
        parts.append(d)
        return ("-" if c < 0 else "+"), "*".join(parts)
    return "+", f"({format_polynomial(q)})*{d}"


def format_operator(T: DifferentialOperator) -> str:
    pieces = [_format_term(j, q) for j, q in T.terms.items()]
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
