"""Max-norm inequalities for p^(j)/p on the circle |z| = 2A, checked on
random monic polynomials whose roots lie in the disc |z| <= A.

With w_i = 1/(z - alpha_i) one has p^(j)/p = j! e_j(w), the j-th elementary
symmetric function of the w_i. On |z| = 2A every |w_i| <= 1/A, so the
recurrence for e_j is well conditioned in double precision and vectorises over
many evaluation points at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .poly import ExactPolynomial, falling

DEFAULT_MARGIN = 1.05
REFINE_WINDOWS = 8
GOLDEN_STEPS = 30
SAMPLE_KINDS = ("uniform", "equal", "boundary", "conjugate")
INV_PHI = (math.sqrt(5) - 1) / 2


class PreconditionViolation(ValueError):
    pass


@dataclass(frozen=True)
class DiscSample:
    n: int
    A: float
    roots: np.ndarray = field(repr=False, compare=False)
    seed: int = 0
    kind: str = "uniform"


def kind_for_seed(seed: int) -> str:
    # mostly uniform samples, every tenth seed of each boundary case
    r = seed % 10
    return {7: "equal", 8: "boundary", 9: "conjugate"}.get(r, "uniform")


def make_sample(n: int, A: float, seed: int, kind: str | None = None) -> DiscSample:
    """Reproducible sample: the generator is keyed on (seed, n, kind)."""
    if n < 2:
        raise PreconditionViolation("degree must be at least 2")
    if A < 1:
        raise PreconditionViolation("disc radius must be at least 1")
    kind = kind or kind_for_seed(seed)
    rng = np.random.default_rng([seed, n, SAMPLE_KINDS.index(kind)])
    if kind == "uniform":
        roots = A * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    elif kind == "equal":
        c = A * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        roots = np.full(n, c, dtype=complex)
    elif kind == "boundary":
        roots = A * np.exp(2j * np.pi * rng.random(n))
    elif kind == "conjugate":
        half = A * np.sqrt(rng.random(n // 2)) * np.exp(1j * np.pi * rng.random(n // 2))
        roots = np.concatenate([half, half.conj()])
        if n % 2:
            roots = np.append(roots, A * (2 * rng.random() - 1))
    else:
        raise ValueError(f"unknown sample kind {kind!r}")
    # clip rounding excursions so every root is inside the closed disc
    mod = np.abs(roots)
    roots = np.where(mod > A, roots * (A / np.maximum(mod, A)), roots)
    return DiscSample(n, float(A), roots.astype(complex), seed, kind)


def sample_from_roots(roots: Sequence, A: float | None = None, seed: int = 0) -> DiscSample:
    r = np.asarray(roots, dtype=complex)
    radius = float(np.max(np.abs(r))) if A is None else float(A)
    if np.any(np.abs(r) > radius * (1 + 1e-12)):
        raise PreconditionViolation("roots must lie in the disc of radius A")
    return DiscSample(len(r), radius, r, seed, "given")


def elementary_symmetric(roots: np.ndarray, z: np.ndarray, order: int) -> np.ndarray:
    """e_0..e_order of w_i = 1/(z - alpha_i); shape (order + 1, len(z))."""
    z = np.asarray(z, dtype=complex)
    w = 1.0 / (z[:, None] - roots[None, :])
    E = np.zeros((order + 1, len(z)), dtype=complex)
    E[0] = 1.0
    for i in range(w.shape[1]):
        E[1:] += w[:, i] * E[:-1]
    return E


# A quantity is (highest e_k it needs, function of (E, z) -> |value| array)
Quantity = tuple[int, Callable[[np.ndarray, np.ndarray], np.ndarray]]


def ratio_quantity(j: int) -> Quantity:
    """|p^(j)/p|"""
    f = math.factorial(j)
    return j, lambda E, z: np.abs(f * E[j])


def gap_quantity(j: int) -> Quantity:
    """|p^(j)/p - (p'/p)^j|"""
    f = math.factorial(j)
    return j, lambda E, z: np.abs(f * E[j] - E[1] ** j)


def derivative_quantity(j: int) -> Quantity:
    """|d/dz (p^(j)/p)| = |p^(j+1)/p - (p^(j)/p)(p'/p)|"""
    f, g = math.factorial(j + 1), math.factorial(j)
    return j + 1, lambda E, z: np.abs(f * E[j + 1] - g * E[j] * E[1])


def weighted_quantity(Q: ExactPolynomial, j: int) -> Quantity:
    """|Q(z) p^(j)/p|"""
    f = math.factorial(j)
    coeffs = [float(c) for c in reversed(Q.coeffs)]
    return j, lambda E, z: np.abs(np.polyval(coeffs, z) * f * E[j])


def circle_maxima(roots: np.ndarray, quantities: Sequence[Quantity], radius: float, M: int) -> list[float]:
    """Max over |z| = radius of each quantity: M equispaced samples, then a
    golden-section search in the neighbourhood of the best few samples.

    Every returned value is attained at an evaluated point, so it is a lower
    bound for the true maximum (up to rounding).
    """
    order = max(q[0] for q in quantities)
    theta = 2 * np.pi * np.arange(M) / M
    E = elementary_symmetric(roots, radius * np.exp(1j * theta), order)
    z = radius * np.exp(1j * theta)
    best = []
    centers, owner = [], []
    for k, (_, f) in enumerate(quantities):
        vals = f(E, z)
        best.append(float(np.max(vals)))
        top = np.argsort(vals, kind="stable")[-REFINE_WINDOWS:]
        centers.extend(theta[top])
        owner.extend([k] * len(top))
    centers = np.asarray(centers)
    owner = np.asarray(owner)
    h = 2 * np.pi / M

    def evaluate(t):
        zz = radius * np.exp(1j * t)
        EE = elementary_symmetric(roots, zz, order)
        out = np.empty(len(t))
        for k, (_, f) in enumerate(quantities):
            mask = owner == k
            out[mask] = f(EE[:, mask], zz[mask])
        return out

    a, b = centers - h, centers + h
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = evaluate(c), evaluate(d)
    seen = np.maximum(fc, fd)
    for _ in range(GOLDEN_STEPS):
        left = fc >= fd  # maximum bracketed by [a, d]
        a, b = np.where(left, a, c), np.where(left, d, b)
        probe = np.where(left, b - INV_PHI * (b - a), a + INV_PHI * (b - a))
        fp = evaluate(probe)
        c, d = np.where(left, probe, d), np.where(left, c, probe)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        seen = np.maximum(seen, fp)
    for k in range(len(quantities)):
        best[k] = max(best[k], float(np.max(seen[owner == k])))
    return best


def default_samples(n: int) -> int:
    return max(4096, 64 * n)


def circle_max(sample: DiscSample, j: int, radius: float | None = None, M: int | None = None) -> float:
    """Refined max of |p^(j)(z)/p(z)| over |z| = radius (default 2A)."""
    radius = 2 * sample.A if radius is None else radius
    M = default_samples(sample.n) if M is None else M
    if radius <= sample.A:
        raise PreconditionViolation("circle must lie outside the root disc")
    if M < 64 * sample.n:
        raise PreconditionViolation("need at least 64 samples per degree")
    return circle_maxima(sample.roots, [ratio_quantity(j)], radius, M)[0]


@dataclass(frozen=True)
class LemmaReport:
    lemma: str
    n: int
    A: float
    j: int
    lhs: float
    rhs: float
    holds: bool
    seed: int = 0
    sample_count: int = 0
    orientation: str = "<="
    status: str = "ok"     # ok | violated | constant_too_tight

    def row(self) -> dict:
        return {"lemma": self.lemma, "n": self.n, "A": self.A, "j": self.j, "lhs": repr(self.lhs),
                "rhs": repr(self.rhs), "holds": self.holds, "seed": self.seed}


def _le_report(name, sample, j, lhs, bound, margin, M):
    rhs = bound * margin
    holds = lhs <= rhs
    return LemmaReport(name, sample.n, sample.A, j, lhs, rhs, holds, sample.seed, M, "<=",
                       "ok" if holds else "violated")


def rhs_bound(n: int, A: float, j: int) -> float:
    return falling(n, j) / A ** j


def gap_bound(n: int, A: float, j: int) -> float:
    return (j * (j - 1) // 2) * n ** (j - 1) / A ** j


def derivative_bound(n: int, A: float, j: int) -> float:
    return j * n ** j / A ** (j + 1)


def logderiv_bound(n: int, A: float) -> float:
    return n / (3 * A)


def check_rhs(sample: DiscSample, j: int, margin: float = DEFAULT_MARGIN, M: int | None = None,
              lhs: float | None = None) -> LemmaReport:
    """||p^(j)/p||_{2A} <= n(n-1)...(n-j+1) / A^j"""
    if j < 1:
        raise PreconditionViolation("j must be >= 1")
    M = M or default_samples(sample.n)
    lhs = circle_max(sample, j, M=M) if lhs is None else lhs
    return _le_report("rhs", sample, j, lhs, rhs_bound(sample.n, sample.A, j), margin, M)


def check_logderiv_lower(sample: DiscSample, M: int | None = None, lhs: float | None = None) -> LemmaReport:
    """||p'/p||_{2A} >= n / (3A); the sampled max is a lower bound, so no margin."""
    M = M or default_samples(sample.n)
    lhs = circle_max(sample, 1, M=M) if lhs is None else lhs
    rhs = logderiv_bound(sample.n, sample.A)
    holds = lhs >= rhs
    return LemmaReport("logderiv_lower", sample.n, sample.A, 1, lhs, rhs, holds, sample.seed, M, ">=",
                       "ok" if holds else "violated")


def check_ratio_gap(sample: DiscSample, j: int, margin: float = DEFAULT_MARGIN, M: int | None = None,
                    lhs: float | None = None) -> LemmaReport:
    """||p^(j)/p - (p'/p)^j||_{2A} <= C'_j n^(j-1) / A^j with C'_j = j(j-1)/2."""
    if j < 1:
        raise PreconditionViolation("j must be >= 1")
    M = M or default_samples(sample.n)
    if lhs is None:
        lhs = circle_maxima(sample.roots, [gap_quantity(j)], 2 * sample.A, M)[0]
    return _le_report("ratio_gap", sample, j, lhs, gap_bound(sample.n, sample.A, j), margin, M)


def check_derivative_of_ratio(sample: DiscSample, j: int, margin: float = DEFAULT_MARGIN, M: int | None = None,
                              lhs: float | None = None) -> LemmaReport:
    """||d/dz (p^(j)/p)||_{2A} <= j n^j / A^(j+1)"""
    if j < 1:
        raise PreconditionViolation("j must be >= 1")
    M = M or default_samples(sample.n)
    if lhs is None:
        lhs = circle_maxima(sample.roots, [derivative_quantity(j)], 2 * sample.A, M)[0]
    return _le_report("derivative_of_ratio", sample, j, lhs, derivative_bound(sample.n, sample.A, j), margin, M)


def lemma2_constant(Q: ExactPolynomial, n: int, j: int) -> float:
    """K_j = 4^(deg Q + 1) (1 + sum |q_i|) / max(1, n!/((n-j)! n^j))."""
    deg = int(Q.degree)
    total = float(sum(abs(c) for c in Q.coeffs))
    return 4.0 ** (deg + 1) * (1 + total) / max(1.0, falling(n, j) / n ** j)


def lemma2_scale(Q: ExactPolynomial, n: int, s: float, d: float, j: int) -> float:
    """n^(d(deg Q - j) + j) s^(deg Q - j)"""
    deg = int(Q.degree)
    return n ** (d * (deg - j) + j) * s ** (deg - j)


def check_lemma2(Q: ExactPolynomial, sample: DiscSample, s: float, d: float, j: int,
                 M: int | None = None, lhs: float | None = None) -> LemmaReport:
    """rho = ||Q p^(j)/p||_{2A} / (n^(d(deg Q-j)+j) s^(deg Q-j)) must lie in [1/K_j, K_j].

    Exceeding K_j contradicts the provable upper side ("violated"); falling
    below 1/K_j means the fixed constant is too tight for this n
    ("constant_too_tight").
    """
    if not 0 < s < 1:
        raise PreconditionViolation("need 0 < s < 1")
    if d <= 0:
        raise PreconditionViolation("need d > 0")
    if Q.is_zero():
        raise PreconditionViolation("Q must be nonzero")
    if j < 1:
        raise PreconditionViolation("j must be >= 1")
    A = s * sample.n ** d
    if not math.isclose(A, sample.A, rel_tol=1e-9):
        raise PreconditionViolation(f"sample radius {sample.A} differs from s*n^d = {A}")
    if A < 10:
        raise PreconditionViolation(f"A = s*n^d = {A:.4g} < 10")
    M = M or default_samples(sample.n)
    if lhs is None:
        lhs = circle_maxima(sample.roots, [weighted_quantity(Q, j)], 2 * sample.A, M)[0]
    rho = lhs / lemma2_scale(Q, sample.n, s, d, j)
    K = lemma2_constant(Q, sample.n, j)
    if rho > K:
        status = "violated"
    elif rho < 1 / K:
        status = "constant_too_tight"
    else:
        status = "ok"
    return LemmaReport("lemma2", sample.n, sample.A, j, rho, K, status == "ok", sample.seed, M, "in[1/K,K]",
                       status)


# -- fleet ----------------------------------------------------------------

@dataclass(frozen=True)
class FleetConfig:
    degrees: tuple[int, ...] = (10, 20, 40, 60)
    radii: tuple[float, ...] = (1.0, 2.0, 5.0, 20.0)
    orders: tuple[int, ...] = (1, 2, 3, 4, 5)
    seeds: int = 100
    margin: float = DEFAULT_MARGIN
    samples: int | None = None
    lemma2_s: float = 0.5
    lemma2_polys: tuple[str, ...] = ("z^2", "z^2 + z + 1", "2*z^3 - z + 1/2")


def parse_polynomial(text: str) -> ExactPolynomial:
    from .dsl import parse_polynomial as _parse

    return _parse(text)


def run_sample(sample: DiscSample, config: FleetConfig) -> list[LemmaReport]:
    """All checks for one sample, sharing one batch of circle evaluations."""
    M = config.samples or default_samples(sample.n)
    qs: list[Quantity] = []
    for j in config.orders:
        qs += [ratio_quantity(j), gap_quantity(j), derivative_quantity(j)]
    lemma2 = []
    if sample.A >= 10:
        s = config.lemma2_s
        d = math.log(sample.A / s) / math.log(sample.n)
        for text in config.lemma2_polys:
            Q = parse_polynomial(text)
            for j in config.orders:
                lemma2.append((Q, j, d))
                qs.append(weighted_quantity(Q, j))
    values = circle_maxima(sample.roots, qs, 2 * sample.A, M)
    out = []
    for k, j in enumerate(config.orders):
        ratio, gap, deriv = values[3 * k: 3 * k + 3]
        out.append(check_rhs(sample, j, config.margin, M, lhs=ratio))
        out.append(check_ratio_gap(sample, j, config.margin, M, lhs=gap))
        out.append(check_derivative_of_ratio(sample, j, config.margin, M, lhs=deriv))
        if j == 1:
            out.append(check_logderiv_lower(sample, M, lhs=ratio))
    base = 3 * len(config.orders)
    for (Q, j, d), lhs in zip(lemma2, values[base:]):
        out.append(check_lemma2(Q, sample, config.lemma2_s, d, j, M, lhs=lhs))
    return out


def fleet_samples(config: FleetConfig) -> Iterable[DiscSample]:
    for n in config.degrees:
        for A in config.radii:
            for seed in range(config.seeds):
                yield make_sample(n, A, seed)


def run_fleet(config: FleetConfig = FleetConfig(), workers: int = 1) -> list[LemmaReport]:
    samples = list(fleet_samples(config))
    if workers <= 1:
        reports = [r for s in samples for r in run_sample(s, config)]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = [r for batch in pool.map(run_sample, samples, [config] * len(samples)) for r in batch]
    return sorted(reports, key=lambda r: (r.lemma, r.n, r.A, r.j, r.seed))
