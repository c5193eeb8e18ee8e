"""The algebraic curve F(z, y) = 0 satisfied by the limiting Cauchy transform.

For a degenerate operator with data j0, A:

    F(z, y) = q_{j0,j0} z^j0 y^j0 + sum_{j in A} q_{j,deg Q_j} z^{deg Q_j} y^j - q_{j0,j0}

The relevant branch behaves like 1/z at infinity; it is followed inward along
rays by predictor-corrector continuation. Branch points come from the exact
resultant Res_y(F, dF/dy), computed by fraction-free elimination over Q[z].
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import gmpy2

from .operators import DifferentialOperator, require_degenerate
from .poly import ExactPolynomial, gcd, precision_of, squarefree_part, to_complex, working_precision
from .roots import aberth_roots, find_roots

BRANCH_PRECISION = 128
DISCRIMINANT_GUARD = 1e-6
INITIAL_SEGMENTS = 8
MIN_STEP = 2.0 ** -20


class NearDiscriminant(ValueError):
    """Requested point is within the guard distance of a branch point."""


class ContinuationStall(ArithmeticError):
    """Step size fell below the floor while following the branch."""


Bivariate = Mapping[tuple[int, int], Fraction]  # (power of z, power of y) -> coefficient


@dataclass(frozen=True)
class CurveSpec:
    j0: int
    lead: Fraction
    terms: tuple[tuple[int, Fraction, int], ...]  # (j, q_{j,deg Q_j}, deg Q_j), sorted by j

    @property
    def jm(self) -> int:
        return max(j for j, _, _ in self.terms)

    def polynomial(self) -> dict[tuple[int, int], Fraction]:
        out: dict[tuple[int, int], Fraction] = {}

        def add(key, c):
            out[key] = out.get(key, Fraction(0)) + c

        add((self.j0, self.j0), self.lead)
        for j, c, deg in self.terms:
            add((deg, j), c)
        add((0, 0), -self.lead)
        return {k: v for k, v in out.items() if v}

    def evaluate(self, z, y):
        return evaluate_bivariate(self.polynomial(), z, y)

    def __str__(self):
        return format_bivariate(self.polynomial())


def curve_from_operator(T: DifferentialOperator) -> CurveSpec:
    c = require_degenerate(T)
    terms = []
    for j in sorted(c.A):
        q = T.q(j)
        terms.append((j, q.lead, int(q.degree)))
    return CurveSpec(c.j0, T.coefficient(c.j0, c.j0), tuple(terms))


def _as_bivariate(curve) -> dict[tuple[int, int], Fraction]:
    if isinstance(curve, CurveSpec):
        return curve.polynomial()
    return {k: Fraction(v) for k, v in curve.items() if v}


def y_degree(F: Bivariate) -> int:
    return max(b for _, b in F)


def y_coefficients(F: Bivariate) -> list[ExactPolynomial]:
    """Coefficients of F as a polynomial in y, each an ExactPolynomial in z
    (ascending in y)."""
    m = y_degree(F)
    cols: list[dict[int, Fraction]] = [dict() for _ in range(m + 1)]
    for (a, b), c in F.items():
        cols[b][a] = cols[b].get(a, Fraction(0)) + c
    out = []
    for col in cols:
        deg = max(col, default=-1)
        out.append(ExactPolynomial(tuple(col.get(i, 0) for i in range(deg + 1))))
    return out


def evaluate_bivariate(F: Bivariate, z, y):
    prec = max(min(precision_of(z), precision_of(y)), 64)
    with working_precision(prec):
        z = to_complex(z, prec)
        y = to_complex(y, prec)
        total = gmpy2.mpc(0)
        for (a, b), c in F.items():
            total += (gmpy2.mpfr(c.numerator) / c.denominator) * z ** a * y ** b
    return total


def _partials(F: Bivariate, z, y):
    """F, dF/dy, dF/dz at (z, y) in the ambient precision."""
    f = fy = fz = gmpy2.mpc(0)
    for (a, b), c in F.items():
        c = gmpy2.mpfr(c.numerator) / c.denominator
        f += c * z ** a * y ** b
        if b:
            fy += c * b * z ** a * y ** (b - 1)
        if a:
            fz += c * a * z ** (a - 1) * y ** b
    return f, fy, fz


def format_bivariate(F: Bivariate) -> str:
    from .poly import format_fraction

    parts = []
    for (a, b), c in sorted(F.items(), key=lambda kv: (-kv[0][1], -kv[0][0])):
        mono = "*".join(s for s in (
            "" if a == 0 else ("z" if a == 1 else f"z^{a}"),
            "" if b == 0 else ("y" if b == 1 else f"y^{b}"),
        ) if s)
        mag = abs(c)
        body = mono if mono and mag == 1 else (f"{format_fraction(mag)}*{mono}" if mono else format_fraction(mag))
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- resultants -----------------------------------------------------------

def sylvester_matrix(f: Sequence[ExactPolynomial], g: Sequence[ExactPolynomial]) -> list[list[ExactPolynomial]]:
    """Sylvester matrix of two polynomials in y given by ascending coefficient
    lists with entries in Q[z]."""
    m, k = len(f) - 1, len(g) - 1
    size = m + k
    zero = ExactPolynomial()
    rows = []
    fd, gd = list(reversed(f)), list(reversed(g))
    for i in range(k):
        rows.append([zero] * i + fd + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gd + [zero] * (size - k - 1 - i))
    return rows


def bareiss_determinant(matrix: Sequence[Sequence[ExactPolynomial]]) -> ExactPolynomial:
    """Determinant over Q[z] by fraction-free (Bareiss) elimination."""
    M = [list(row) for row in matrix]
    n = len(M)
    if n == 0:
        return ExactPolynomial.constant(1)
    sign = 1
    prev = ExactPolynomial.constant(1)
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if swap is None:
                return ExactPolynomial()
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]).exact_div(prev)
        prev = pivot
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det


def resultant_y(F: Bivariate, G: Bivariate) -> ExactPolynomial:
    return bareiss_determinant(sylvester_matrix(y_coefficients(F), y_coefficients(G)))


def derivative_y(F: Bivariate) -> dict[tuple[int, int], Fraction]:
    return {(a, b - 1): c * b for (a, b), c in F.items() if b}


@dataclass(frozen=True)
class DiscriminantLocus:
    points: tuple                 # branch points (mpc)
    degenerations: tuple          # zeros of the leading y-coefficient (mpc)
    resultant: ExactPolynomial    # Res_y(F, dF/dy), exact
    reduced: ExactPolynomial      # resultant with leading-coefficient factors removed, squarefree

    @property
    def resultant_degree(self) -> int:
        return int(self.resultant.degree) if not self.resultant.is_zero() else -1


def _root_list(p: ExactPolynomial, prec: int) -> tuple:
    if p.is_zero() or p.degree < 1:
        return ()
    return tuple(find_roots(p, target_digits=30, precision=prec).roots)


@functools.lru_cache(maxsize=64)
def _locus_cached(items: tuple, prec: int) -> DiscriminantLocus:
    F = dict(items)
    if y_degree(F) < 2:
        raise ValueError("discriminant locus needs y-degree >= 2")
    res = resultant_y(F, derivative_y(F))
    if res.is_zero():
        raise ValueError("F has a repeated factor in y; discriminant vanishes identically")
    lead = y_coefficients(F)[-1]
    reduced = res
    if lead.degree >= 1:
        base = squarefree_part(lead)
        while True:
            g = gcd(reduced, base)
            if g.degree < 1:
                break
            reduced = reduced.exact_div(g)
    if reduced.degree >= 1:
        reduced = squarefree_part(reduced)
    return DiscriminantLocus(_root_list(reduced, prec), _root_list(lead, prec), res, reduced)


def discriminant_locus(curve, prec: int = BRANCH_PRECISION) -> DiscriminantLocus:
    F = _as_bivariate(curve)
    return _locus_cached(tuple(sorted(F.items())), prec)


# -- branch continuation --------------------------------------------------

@dataclass(frozen=True)
class BranchValue:
    z: object
    y: object
    residual: object


def coefficient_scale(F: Bivariate) -> Fraction:
    return max(abs(c) for c in F.values())


def _newton(F, z, y, tol, max_iter=12):
    """Newton on F(z, .) from y; returns the root or None when the iterates
    fail to contract."""
    last = None
    for _ in range(max_iter):
        f, fy, _ = _partials(F, z, y)
        if fy == 0:
            return None
        step = f / fy
        size = abs(step)
        if last is not None and size > 0.5 * last and size > tol:
            return None
        y = y - step
        if size <= tol * (1 + abs(y)):
            return y
        last = size
    return None


def _continue(F, z_from, z_to, y, prec):
    """Follow the root y of F(z_from, .) along the segment to z_to."""
    tol = gmpy2.mpfr(2) ** (-prec + 8)
    t = gmpy2.mpfr(0)
    h = gmpy2.mpfr(1) / INITIAL_SEGMENTS
    dz = z_to - z_from
    while t < 1:
        h = min(h, 1 - t)
        z_old = z_from + t * dz
        _, fy, fz = _partials(F, z_old, y)
        slope = -fz / fy if fy != 0 else gmpy2.mpc(0)
        z_new = z_from + (t + h) * dz
        y_pred = y + slope * (h * dz)
        y_new = _newton(F, z_new, y_pred, tol)
        ok = y_new is not None and abs(y_new - y_pred) <= gmpy2.mpfr("0.25") * (abs(y_pred - y) + tol)
        if ok:
            t += h
            y = y_new
            h = min(h * 2, gmpy2.mpfr(1) / INITIAL_SEGMENTS)
        else:
            h /= 2
            if h < MIN_STEP:
                raise ContinuationStall(f"step underflow near z = {complex(z_new)}")
    return y


def _check_distance(locus: DiscriminantLocus, z):
    for pt in locus.points + locus.degenerations:
        if abs(z - pt) <= DISCRIMINANT_GUARD:
            raise NearDiscriminant(f"z = {complex(z)} is within {DISCRIMINANT_GUARD} of {complex(pt)}")


def _start(F, locus, direction, prec):
    far = max((abs(p) for p in locus.points + locus.degenerations), default=gmpy2.mpfr(0))
    R = 10 * (1 + far)
    z0 = R * direction
    y0 = _newton(F, z0, 1 / z0, gmpy2.mpfr(2) ** (-prec + 8), max_iter=50)
    if y0 is None:
        raise ContinuationStall("Newton failed at the starting point")
    return R, z0, y0


def branch_along(curve, waypoints: Sequence, prec: int = BRANCH_PRECISION) -> BranchValue:
    """Value of the 1/z branch at waypoints[-1], continued from the far point
    on the ray through waypoints[0] and then along the polyline."""
    F = _as_bivariate(curve)
    locus = discriminant_locus(curve, prec) if y_degree(F) >= 2 else None
    with working_precision(prec):
        pts = [to_complex(w, prec) for w in waypoints]
        if locus is not None:
            for p in pts:
                _check_distance(locus, p)
        first = pts[0]
        if first == 0:
            raise ValueError("branch is defined by its behaviour at infinity; z = 0 has no ray")
        direction = first / abs(first)
        if locus is not None:
            R, z0, y = _start(F, locus, direction, prec)
        else:
            R = 10 * (1 + abs(first))
            z0 = R * direction
            y = _newton(F, z0, 1 / z0, gmpy2.mpfr(2) ** (-prec + 8), max_iter=50)
        if abs(first) > R:
            z0 = first
            y = _newton(F, z0, 1 / z0, gmpy2.mpfr(2) ** (-prec + 8), max_iter=50)
        current = z0
        for p in pts:
            if p != current:
                y = _continue(F, current, p, y, prec)
                current = p
        residual = abs(_partials(F, current, y)[0])
    return BranchValue(current, y, residual)


def branch_at(curve, z, prec: int = BRANCH_PRECISION) -> BranchValue:
    return branch_along(curve, [z, z], prec)


def y_roots(curve, z, prec: int = BRANCH_PRECISION) -> list:
    """All roots of F(z, .), with multiplicity."""
    F = _as_bivariate(curve)
    with working_precision(prec):
        zc = to_complex(z, prec)
        coeffs = []
        for poly in y_coefficients(F):
            acc = gmpy2.mpc(0)
            for c in reversed(poly.coeffs):
                acc = acc * zc + gmpy2.mpfr(c.numerator) / c.denominator
            coeffs.append(acc)
    roots, *_ = aberth_roots(coeffs, target_digits=20, precision=prec)
    return roots
