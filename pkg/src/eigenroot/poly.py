"""Exact univariate polynomials over Q and controlled-precision complex evaluation.

Coefficients are ``fractions.Fraction`` stored in ascending powers of z.
Approximate values are ``gmpy2.mpc`` numbers; their precision travels with the
value, and operations mixing several values run at the smallest precision
among them.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import gmpy2

NEG_INF = float("-inf")
MIN_PRECISION = 64

Rational = Union[int, Fraction]
ComplexApprox = gmpy2.mpc


class PrecisionEscalation(ArithmeticError):
    """Raised when a big-float result is not finite at the working precision."""


@contextmanager
def working_precision(bits: int):
    with gmpy2.context(gmpy2.get_context(), precision=int(bits)):
        yield


def precision_of(z) -> int:
    """Precision in bits carried by an approximate value (53 for Python floats)."""
    if isinstance(z, (int, Fraction)):
        return 0
    p = getattr(z, "precision", None)
    if p is None:
        return 53
    if isinstance(p, tuple):
        return min(p)
    return int(p)


def to_complex(value, prec: int) -> ComplexApprox:
    """Round ``value`` (int, Fraction, float, complex, mpfr, mpc or a
    (re, im) pair of rationals) to an mpc of ``prec`` bits."""
    prec = max(int(prec), MIN_PRECISION)
    with working_precision(prec):
        if isinstance(value, tuple):
            re, im = value
            return gmpy2.mpc(_to_mpfr(re), _to_mpfr(im))
        if isinstance(value, Fraction):
            return gmpy2.mpc(_to_mpfr(value), 0)
        return gmpy2.mpc(value)


def _to_mpfr(x):
    if isinstance(x, Fraction):
        return gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator))
    return gmpy2.mpfr(x)


def _check_finite(z):
    if isinstance(z, gmpy2.mpc):
        ok = gmpy2.is_finite(z.real) and gmpy2.is_finite(z.imag)
    else:
        ok = gmpy2.is_finite(z)
    if not ok:
        raise PrecisionEscalation(f"non-finite value at {precision_of(z)} bits")
    return z


def falling(n: int, j: int) -> int:
    """n (n-1) ... (n-j+1); zero when j > n."""
    if j > n:
        return 0
    return math.perm(n, j)


@dataclass(frozen=True)
class ExactPolynomial:
    """Dense polynomial with exact rational coefficients, ascending powers.

    The zero polynomial is the empty tuple; its degree is ``-inf``.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def of(cls, *coeffs: Rational) -> "ExactPolynomial":
        return cls(tuple(coeffs))

    @classmethod
    def monomial(cls, k: int, c: Rational = 1) -> "ExactPolynomial":
        return cls((0,) * k + (c,))

    @classmethod
    def constant(cls, c: Rational) -> "ExactPolynomial":
        return cls((c,))

    # -- structure -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def monic(self) -> "ExactPolynomial":
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no monic normalization")
        return self.scale(1 / self.lead)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return ExactPolynomial(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    __radd__ = __add__

    def __neg__(self):
        return ExactPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ExactPolynomial):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ExactPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return ExactPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ExactPolynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c: Rational) -> "ExactPolynomial":
        c = Fraction(c)
        return ExactPolynomial(tuple(c * x for x in self.coeffs))

    def shift_up(self, k: int) -> "ExactPolynomial":
        """Multiply by z**k."""
        if self.is_zero():
            return self
        return ExactPolynomial((Fraction(0),) * k + self.coeffs)

    def __divmod__(self, other: "ExactPolynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        if len(rem) - 1 < dq:
            return ExactPolynomial(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        inv = 1 / other.lead
        for k in range(len(rem) - 1, dq - 1, -1):
            q = rem[k] * inv
            quot[k - dq] = q
            if q:
                for i, b in enumerate(other.coeffs):
                    rem[k - dq + i] -= q * b
        return ExactPolynomial(tuple(quot)), ExactPolynomial(tuple(rem[:dq]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "ExactPolynomial") -> "ExactPolynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    # -- calculus and evaluation ----------------------------------------
    def differentiate(self, j: int = 1) -> "ExactPolynomial":
        return differentiate(self, j)

    def __call__(self, z):
        return evaluate(self, z)

    def __str__(self):
        return format_polynomial(self)


def _coerce(x):
    if isinstance(x, ExactPolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactPolynomial.constant(x)
    return None


Z = ExactPolynomial.monomial(1)


def differentiate(p: ExactPolynomial, j: int) -> ExactPolynomial:
    if j < 0:
        raise ValueError("derivative order must be nonnegative")
    if j == 0:
        return p
    return ExactPolynomial(tuple(falling(i, j) * c for i, c in enumerate(p.coeffs) if i >= j))


def gcd(a: ExactPolynomial, b: ExactPolynomial) -> ExactPolynomial:
    """Monic gcd by the Euclidean algorithm (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_part(p: ExactPolynomial) -> ExactPolynomial:
    if p.degree < 1:
        return p
    return p.exact_div(gcd(p, p.differentiate())).monic()


def evaluate(p, z):
    """Horner evaluation.

    ``p`` is an ExactPolynomial or a sequence of ascending coefficients.
    An int/Fraction ``z`` gives an exact Fraction; an (re, im) pair of
    rationals gives an exact (re, im) pair; anything else is evaluated as an
    mpc at the precision of ``z`` (and of the coefficients, if approximate).
    """
    coeffs = p.coeffs if isinstance(p, ExactPolynomial) else tuple(p)
    if isinstance(z, (int, Fraction)) and all(isinstance(c, (int, Fraction)) for c in coeffs):
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * z + c
        return acc
    if isinstance(z, tuple) and all(isinstance(c, (int, Fraction)) for c in coeffs):
        x, y = Fraction(z[0]), Fraction(z[1])
        re, im = Fraction(0), Fraction(0)
        for c in reversed(coeffs):
            re, im = re * x - im * y + c, re * y + im * x
        return re, im
    prec = max(precision_of(z), MIN_PRECISION)
    approx = [precision_of(c) for c in coeffs if not isinstance(c, (int, Fraction))]
    if approx:
        prec = min([prec] + approx)
    zc = to_complex(z, prec)
    with working_precision(prec):
        acc = gmpy2.mpc(0)
        for c in reversed(coeffs):
            acc = acc * zc + (_to_mpfr(c) if isinstance(c, Fraction) else c)
    return _check_finite(acc)


def from_roots(roots: Sequence) -> tuple:
    """Expand prod (z - r) at the smallest precision among the roots.

    Returns ascending mpc coefficients of a monic polynomial."""
    prec = min((max(precision_of(r), MIN_PRECISION) for r in roots), default=MIN_PRECISION)
    with working_precision(prec):
        coeffs = [gmpy2.mpc(1)]
        for r in roots:
            r = gmpy2.mpc(r)
            nxt = [gmpy2.mpc(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] += c
                nxt[i] -= r * c
            coeffs = nxt
    return tuple(_check_finite(c) for c in coeffs)


def approx_coefficients(p: ExactPolynomial, prec: int) -> list:
    """Round exact coefficients to mpc at ``prec`` bits."""
    return [to_complex(c, prec) for c in p.coeffs]


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: ExactPolynomial, var: str = "z") -> str:
    """Human-readable form, highest power first: ``z^2 + 1/2*z - 3``."""
    if p.is_zero():
        return "0"
    parts = []
    for i in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            body = format_fraction(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_fraction(a)}*{mono}"
        parts.append((sign, body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
