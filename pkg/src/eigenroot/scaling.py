"""Degree sweeps of the largest root modulus r_n and the scaled root measures."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
from shapely import affinity
from shapely.geometry import MultiPoint, Point

from .curve import curve_from_operator
from .eigen import SpectralCollision, eigenpolynomial
from .operators import DifferentialOperator, require_degenerate
from .poly import precision_of, to_complex, working_precision
from .roots import DEFAULT_DIGITS, NoConvergence, find_roots

DEFAULT_SAMPLE_POINTS = (complex(3, 0), complex(2, 2), complex(-1, -3))
HULL_INFLATION = 1.2


class PoleProximity(ArithmeticError):
    """Evaluation point too close to an atom of the measure."""


class SampleInsideSupport(ValueError):
    """Sample point lies inside the inflated convex hull of the scaled roots."""


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class ScalingRecord:
    n: int
    r: object = None
    ratio: object = None
    collision: bool = False
    error: str | None = None
    precision_used: int | None = None
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.ratio is not None


@dataclass(frozen=True)
class EmpiricalMeasure:
    n: int
    atoms: tuple
    d: Fraction = Fraction(1)
    masses: tuple = field(default=())

    def __post_init__(self):
        if not self.masses and self.atoms:
            object.__setattr__(self, "masses", (Fraction(1, len(self.atoms)),) * len(self.atoms))

    @property
    def total_mass(self) -> Fraction:
        return sum(self.masses, Fraction(0))


def n_power_d(n: int, d: Fraction, prec: int = 64):
    with working_precision(max(prec, 64)):
        return gmpy2.mpfr(n) ** (gmpy2.mpfr(d.numerator) / d.denominator)


def scan_one(T: DifferentialOperator, n: int, target_digits: int = DEFAULT_DIGITS) -> ScalingRecord:
    d = require_degenerate(T).d
    t0 = time.perf_counter()
    try:
        pair = eigenpolynomial(T, n)
    except SpectralCollision:
        return ScalingRecord(n, collision=True, seconds=time.perf_counter() - t0)
    try:
        rs = find_roots(pair.p, target_digits)
    except NoConvergence as exc:
        return ScalingRecord(n, error=str(exc), seconds=time.perf_counter() - t0)
    scale = n_power_d(n, d, rs.precision_used)
    with working_precision(rs.precision_used):
        ratio = rs.r / scale
    return ScalingRecord(n, r=rs.r, ratio=ratio, precision_used=rs.precision_used,
                         seconds=time.perf_counter() - t0)


def _scan_job(args):
    return scan_one(*args)


def scan(T: DifferentialOperator, n_from: int, n_to: int, step: int = 1,
         target_digits: int = DEFAULT_DIGITS, workers: int = 1) -> list[ScalingRecord]:
    """One record per n in range(n_from, n_to + 1, step), ordered by n."""
    require_degenerate(T)
    if not 1 <= n_from <= n_to or step < 1:
        raise ValueError("need 1 <= n_from <= n_to and step >= 1")
    jobs = [(T, n, target_digits) for n in range(n_from, n_to + 1, step)]
    if workers <= 1:
        return [_scan_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_scan_job, jobs))


def scaled_measure(T: DifferentialOperator, n: int, target_digits: int = DEFAULT_DIGITS) -> EmpiricalMeasure:
    d = require_degenerate(T).d
    rs = find_roots(eigenpolynomial(T, n).p, target_digits)
    scale = n_power_d(n, d, rs.precision_used)
    with working_precision(rs.precision_used):
        atoms = tuple(z / scale for z in rs.roots)
    return EmpiricalMeasure(n, atoms, d)


def measure_from_points(points: Sequence, prec: int = 128) -> EmpiricalMeasure:
    """Uniform measure on arbitrary points (mainly for tests and plotting)."""
    return EmpiricalMeasure(len(points), tuple(to_complex(p, prec) for p in points))


def empirical_cauchy(m: EmpiricalMeasure, z):
    """(1/n) sum 1/(z - atom)."""
    prec = max(min((precision_of(a) for a in m.atoms), default=64), 64)
    if not isinstance(z, (int, Fraction, complex, float)):
        prec = min(prec, max(precision_of(z), 64))
    with working_precision(prec):
        zc = to_complex(z, prec)
        guard = gmpy2.mpfr(10) ** -9 * (1 + abs(zc))
        total = gmpy2.mpc(0)
        for a, w in zip(m.atoms, m.masses):
            diff = zc - a
            if abs(diff) <= guard:
                raise PoleProximity(f"z = {complex(zc)} is within {float(guard):.3g} of an atom")
            total += (gmpy2.mpfr(w.numerator) / w.denominator) / diff
    return total


def _inflated_hull(m: EmpiricalMeasure):
    pts = MultiPoint([(float(a.real), float(a.imag)) for a in m.atoms])
    hull = pts.convex_hull
    return affinity.scale(hull, HULL_INFLATION, HULL_INFLATION, origin="centroid")


def conjecture_residual(T: DifferentialOperator, n: int, sample_points: Iterable = DEFAULT_SAMPLE_POINTS,
                        target_digits: int = DEFAULT_DIGITS, measure: EmpiricalMeasure | None = None) -> list:
    """|F(z, C_n(z))| for the limiting curve F of T and the empirical Cauchy
    transform C_n of the scaled roots of p_n, at each sample point."""
    curve = curve_from_operator(T)
    m = measure if measure is not None else scaled_measure(T, n, target_digits)
    region = _inflated_hull(m)
    out = []
    for z in sample_points:
        zc = complex(z)
        if region.covers(Point(zc.real, zc.imag)):
            raise SampleInsideSupport(f"{zc} lies inside the inflated hull of the scaled roots")
        c = empirical_cauchy(m, z)
        with working_precision(max(precision_of(c), 64)):
            out.append(abs(curve.evaluate(to_complex(z, precision_of(c)), c)))
    return out


def estimate_c0(records: Sequence[ScalingRecord]):
    """Median ratio over the largest-n half of the usable records, and the
    relative spread (max - min) / median over the same window."""
    usable = sorted((r for r in records if r.ok), key=lambda r: r.n)
    if len(usable) < 3:
        raise InsufficientData(f"need at least 3 non-collision records, got {len(usable)}")
    window = usable[len(usable) // 2:]
    ratios = sorted(r.ratio for r in window)
    k = len(ratios)
    median = ratios[k // 2] if k % 2 else (ratios[k // 2 - 1] + ratios[k // 2]) / 2
    spread = (ratios[-1] - ratios[0]) / median
    return median, spread


def ratio_spread(records: Sequence[ScalingRecord]):
    """max/min of the ratios of the usable records."""
    ratios = [r.ratio for r in records if r.ok]
    if not ratios:
        raise InsufficientData("no usable records")
    return max(ratios) / min(ratios)
