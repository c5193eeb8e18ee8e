"""All complex roots of a polynomial by Aberth-Ehrlich iteration with
precision escalation.

The contract is residual-based: every returned root has small relative
backward error at the working precision, and the power-sum and product of the
roots agree with the coefficients. Per-root forward error is not certified
(clusters lose digits).
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2

from .poly import ExactPolynomial, precision_of, to_complex, working_precision

log = logging.getLogger(__name__)

DEFAULT_DIGITS = 12
MAX_PRECISION = 8192
START_RADIUS_FACTOR = 0.7
START_ANGLE = 0.376
PRECISION_ENV = "EIGENROOT_PRECISION_BITS"


class NoConvergence(ArithmeticError):
    """Aberth iteration failed even at the precision ceiling."""


@dataclass(frozen=True)
class RootSet:
    n: int
    roots: tuple
    residual_bound: object
    precision_used: int
    r: object
    iterations: int = 0


def precision_floor() -> int:
    """Global lower bound on working precision from the environment."""
    raw = os.environ.get(PRECISION_ENV, "").strip()
    return int(raw) if raw else 0


def default_precision(n: int) -> int:
    return max(256, 4 * n, precision_floor())


def cauchy_radius(coeffs: Sequence) -> gmpy2.mpfr:
    """Unique positive root of |c_n| x^n - sum_{i<n} |c_i| x^i.

    Every root of the polynomial lies in |z| <= this radius, and the radius
    never exceeds 1 + max |c_i / c_n|.
    """
    n = len(coeffs) - 1
    with working_precision(64):
        mags = [abs(gmpy2.mpc(c)) for c in coeffs]
        lead = mags[-1]
        rel = [m / lead for m in mags[:-1]]
        if not any(rel):
            return gmpy2.mpfr(0)
        # g(x) = sum rel_i x^(i-n) is strictly decreasing; solve g(x) = 1
        def g(x):
            return sum(r * x ** (i - n) for i, r in enumerate(rel) if r)

        hi = 1 + max(rel)
        lo = hi
        while g(lo) < 1:
            lo = lo / 2
        for _ in range(200):
            mid = gmpy2.sqrt(lo * hi) if lo > 0 else hi / 2
            if g(mid) > 1:
                lo = mid
            else:
                hi = mid
            if hi - lo <= hi * gmpy2.mpfr(2) ** -40:
                break
        return hi


def _log_abs(c) -> float:
    if isinstance(c, Fraction):
        return math.log(abs(c.numerator)) - math.log(c.denominator)
    if isinstance(c, int):
        return math.log(abs(c))
    with working_precision(64):
        return float(gmpy2.log(abs(gmpy2.mpc(c))))


def taylor_shift(coeffs: Sequence, s) -> list:
    """Coefficients of p(z + s), ascending."""
    c = list(coeffs)
    n = len(c) - 1
    for i in range(n):
        for k in range(n - 1, i - 1, -1):
            c[k] += s * c[k + 1]
    return c


def centroid(coeffs: Sequence):
    """Mean of the roots, -c_{n-1} / (n c_n); exact for rational input."""
    n = len(coeffs) - 1
    return -coeffs[n - 1] / (n * coeffs[n])


def _upper_hull(points):
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon_points(coeffs: Sequence, center, prec: int) -> list:
    """Starting points on concentric circles about ``center``.

    ``coeffs`` are those of the polynomial shifted to ``center``. Each edge of
    the upper convex hull of (i, log|c_i|) spanning indices a < b contributes
    b - a points on a circle of radius (|c_a|/|c_b|)^(1/(b-a)).
    """
    n = len(coeffs) - 1
    pts = [(i, _log_abs(c)) for i, c in enumerate(coeffs) if c != 0]
    hull = _upper_hull(pts)
    with working_precision(prec):
        center = to_complex(center, prec)
        out = [center] * pts[0][0]
        for (a, la), (b, lb) in zip(hull, hull[1:]):
            m = b - a
            radius = gmpy2.mpfr(math.exp((la - lb) / m))
            for k in range(m):
                theta = 2 * gmpy2.const_pi() * (gmpy2.mpfr(k) / m + gmpy2.mpfr(a) / n) + START_ANGLE
                out.append(center + radius * gmpy2.mpc(gmpy2.cos(theta), gmpy2.sin(theta)))
    return out


def circle_points(coeffs: Sequence, center, prec: int) -> list:
    """n points on one circle of radius 0.7 x Cauchy radius about ``center``."""
    n = len(coeffs) - 1
    radius = START_RADIUS_FACTOR * cauchy_radius(coeffs)
    if radius == 0:
        radius = gmpy2.mpfr(1)
    with working_precision(prec):
        center = to_complex(center, prec)
        radius = gmpy2.mpfr(radius)
        out = []
        for k in range(n):
            theta = 2 * gmpy2.const_pi() * k / n + gmpy2.mpfr(START_ANGLE)
            out.append(center + radius * gmpy2.mpc(gmpy2.cos(theta), gmpy2.sin(theta)))
    return out


def initial_points(coeffs: Sequence, prec: int, init: str = "newton-polygon") -> list:
    s = centroid(coeffs)
    shifted = taylor_shift(coeffs, s)
    if init == "newton-polygon":
        return newton_polygon_points(shifted, s, prec)
    if init == "circle":
        return circle_points(shifted, s, prec)
    raise ValueError(f"unknown init {init!r}")


def _horner2(coeffs, z):
    p = coeffs[-1]
    dp = gmpy2.mpc(0)
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _aberth(coeffs, z, tol, max_iter):
    """Gauss-Seidel Aberth sweeps in place; returns (converged, sweeps)."""
    n = len(z)
    active = set(range(n))
    for sweep in range(1, max_iter + 1):
        done = []
        for i in sorted(active):
            zi = z[i]
            p, dp = _horner2(coeffs, zi)
            if p == 0:
                done.append(i)
                continue
            if dp == 0:
                # flat spot: nudge off it
                z[i] = zi * (1 + tol) + tol
                continue
            newton = p / dp
            s = gmpy2.mpc(0)
            for j in range(n):
                if j != i:
                    diff = zi - z[j]
                    if diff != 0:
                        s += 1 / diff
            denom = 1 - newton * s
            w = newton / denom if denom != 0 else newton
            z[i] = zi - w
            if abs(w) <= tol * (1 + abs(zi)):
                done.append(i)
        active.difference_update(done)
        if not active:
            return True, sweep
    return False, max_iter


def _certify(coeffs, roots, digits, prec):
    """Relative residuals and Vieta checks at working precision.

    Returns (ok, residual_bound)."""
    n = len(roots)
    worst = gmpy2.mpfr(0)
    for z in roots:
        p = coeffs[-1]
        scale = abs(coeffs[-1])
        az = abs(z)
        for c in reversed(coeffs[:-1]):
            p = p * z + c
            scale = scale * az + abs(c)
        rel = abs(p) / scale if scale else abs(p)
        worst = max(worst, rel)
    residual_tol = gmpy2.mpfr(2) ** (-prec // 2)
    vieta_tol = gmpy2.mpfr(10) ** (-digits + 2)
    lead = coeffs[-1]
    total = sum(roots, gmpy2.mpc(0))
    sum_scale = 1 + sum(abs(z) for z in roots)
    sum_ok = abs(total + coeffs[-2] / lead) <= vieta_tol * sum_scale
    prod_ok = True
    c0 = coeffs[0] / lead
    if c0 != 0:
        prod = gmpy2.mpc(1)
        for z in roots:
            prod *= z
        expected = c0 if n % 2 == 0 else -c0
        prod_ok = abs(prod - expected) <= vieta_tol * abs(expected)
    ok = worst <= residual_tol and sum_ok and prod_ok
    return ok, worst


def _polish(coeffs, z, digits, prec):
    """Full sweeps until certification passes or the residual stops shrinking.

    Simple roots certify after one sweep; multiple roots converge only
    linearly and may need many."""
    best = None
    stale = 0
    for _ in range(max(8, prec // 2)):
        _aberth(coeffs, z, gmpy2.mpfr(2) ** (-prec), max_iter=1)
        ok, residual = _certify(coeffs, z, digits, prec)
        if ok:
            return ok, residual
        if best is not None and residual >= best:
            stale += 1
            if stale >= 3:
                break
        else:
            best, stale = residual, 0
    return False, residual


def aberth_roots(coeffs: Sequence, target_digits: int = DEFAULT_DIGITS, precision: int | None = None,
                 max_precision: int = MAX_PRECISION, start: Sequence | None = None,
                 init: str = "newton-polygon"):
    """Roots of a polynomial with approximate (or exact) ascending coefficients.

    Returns (roots, residual_bound, precision_used, sweeps)."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("polynomial must have degree >= 1")
    prec = max(precision or default_precision(n), precision_floor(), 64)
    # exact zero roots are deflated and returned exactly
    zeros = 0
    while coeffs[zeros] == 0:
        zeros += 1
    if zeros:
        with working_precision(prec):
            zero_roots = [gmpy2.mpc(0)] * zeros
        if zeros == n:
            return zero_roots, gmpy2.mpfr(0), prec, 0
        rest = aberth_roots(coeffs[zeros:], target_digits, prec, max_precision,
                            None if start is None else list(start)[zeros:], init)
        roots, residual, used, sweeps = rest
        with working_precision(used):
            zero_roots = [gmpy2.mpc(0)] * zeros
        return zero_roots + roots, residual, used, sweeps
    z = list(start) if start is not None else initial_points(coeffs, prec, init)
    total_sweeps = 0
    while prec <= max_precision:
        with working_precision(prec):
            cc = [to_complex(c, prec) for c in coeffs]
            z = [gmpy2.mpc(v) for v in z]
            tol = gmpy2.mpfr(10) ** (-target_digits)
            converged, sweeps = _aberth(cc, z, tol, max_iter=100 + 2 * n)
            total_sweeps += sweeps
            if converged:
                ok, residual = _polish(cc, z, target_digits, prec)
                if ok:
                    return list(z), residual, prec, total_sweeps
                log.debug("certification failed at %d bits (residual %s)", prec, residual)
            else:
                log.debug("no convergence at %d bits after %d sweeps", prec, sweeps)
        prec *= 2
    raise NoConvergence(f"degree {n}: no certified roots up to {max_precision} bits")


def find_roots(p: ExactPolynomial, target_digits: int = DEFAULT_DIGITS, precision: int | None = None,
               max_precision: int = MAX_PRECISION, init: str = "newton-polygon") -> RootSet:
    if p.is_zero() or p.degree < 1:
        raise ValueError("find_roots needs a polynomial of degree >= 1")
    roots, residual, prec, sweeps = aberth_roots(p.coeffs, target_digits, precision, max_precision,
                                                 init=init)
    with working_precision(prec):
        r = max(abs(z) for z in roots)
    return RootSet(n=int(p.degree), roots=tuple(roots), residual_bound=residual, precision_used=prec,
                   r=r, iterations=sweeps)


def max_modulus(rs) -> gmpy2.mpfr:
    roots = rs.roots if isinstance(rs, RootSet) else rs
    if not roots:
        return gmpy2.mpfr(0)
    prec = max(min(precision_of(z) for z in roots), 53)
    with working_precision(prec):
        return max(abs(gmpy2.mpc(z)) for z in roots)
