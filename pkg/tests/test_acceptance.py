"""Acceptance criteria, one test and one printed PASS/FAIL line per criterion.

Tolerances are pinned to the contract values; nothing here is tuned to the
implementation's output.
"""

import json
import math
import time
from pathlib import Path

import pytest
from conftest import HERMITE, T1, T1_TEXT, T2, T3
from test_eigen import rotated_hermite

from eigenroot.cli import main
from eigenroot.curve import discriminant_locus, curve_from_operator
from eigenroot.eigen import SpectralCollision, eigenpolynomial, verify_eigen
from eigenroot.lemmas import FleetConfig, run_fleet
from eigenroot.records import svg_metadata
from eigenroot.scaling import empirical_cauchy, estimate_c0, scaled_measure, scan

ROOT = Path(__file__).resolve().parents[1]

# pinned contract values
EIGEN_MAX_N = 50
HERMITE_MAX_N = 60
R100_WINDOW = (1.85, 2.00)
C0_WINDOW = (1.8, 2.05)
C0_SPREAD = 0.15
MAIN_WINDOW = (80, 120)
MAIN_SPREAD = 1.5
FLEET_MIN_CHECKS = 2000
CAUCHY_N = (25, 50, 100)
CAUCHY_TOL = 0.05
DISCRIMINANT_TOL = 1e-10
T1_SCREEN = 2.0


def report(capsys, k, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_1_exact_eigen_verification(capsys):
    t0 = time.perf_counter()
    checked, collisions, nonzero = 0, 0, []
    for name, T in (("T1", T1), ("T2", T2), ("T3", T3), ("zD+D^2", HERMITE)):
        for n in range(1, EIGEN_MAX_N + 1):
            try:
                pair = eigenpolynomial(T, n)
            except SpectralCollision:
                collisions += 1
                continue
            checked += 1
            if not verify_eigen(T, pair).is_zero():
                nonzero.append((name, n))
    elapsed = time.perf_counter() - t0
    ok = not nonzero and elapsed < 120
    report(capsys, 1, ok, f"{checked} pairs exactly verified, {collisions} collisions skipped, "
                          f"nonzero residuals {nonzero}, {elapsed:.1f}s (< 120s)")


def test_criterion_2_hermite_oracle(capsys):
    mismatches = [n for n in range(1, HERMITE_MAX_N + 1) if eigenpolynomial(HERMITE, n).p != rotated_hermite(n)]
    report(capsys, 2, not mismatches, f"n = 1..{HERMITE_MAX_N} coefficient-exact against the He recurrence, "
                                      f"mismatches {mismatches}")


def test_criterion_3_scaling_constant(capsys):
    (rec,) = scan(HERMITE, 100, 100)
    ratio = float(rec.r) / math.sqrt(100)
    c_hat, spread = estimate_c0(scan(HERMITE, 60, 120, 10))
    c_hat, spread = float(c_hat), float(spread)
    ok = (R100_WINDOW[0] <= ratio <= R100_WINDOW[1] and C0_WINDOW[0] <= c_hat <= C0_WINDOW[1]
          and spread <= C0_SPREAD)
    report(capsys, 3, ok, f"r_100/10 = {ratio:.5f} in {R100_WINDOW}, c_hat = {c_hat:.5f} in {C0_WINDOW}, "
                          f"spread = {spread:.4f} <= {C0_SPREAD}")


def test_criterion_4_main_theorem_face(capsys):
    pilot = json.loads((ROOT / "pilot.json").read_text())
    assert pilot["frozen"]["spread_max"] == MAIN_SPREAD
    parts, ok = [], True
    for name, T in (("T1", T1), ("T2", T2), ("T3", T3)):
        recs = scan(T, *MAIN_WINDOW)
        ratios = [float(r.ratio) for r in recs if r.ok]
        failed = [r.n for r in recs if r.error]
        positive = bool(ratios) and min(ratios) > 0
        spread = max(ratios) / min(ratios)
        ok &= positive and spread <= MAIN_SPREAD and not failed
        parts.append(f"{name}: {len(ratios)} ratios in [{min(ratios):.4f}, {max(ratios):.4f}], "
                     f"max/min = {spread:.4f}")
    report(capsys, 4, ok, "; ".join(parts) + f" (limit {MAIN_SPREAD})")


def test_criterion_5_lemma_fleet(capsys):
    t0 = time.perf_counter()
    reports = run_fleet(FleetConfig())
    elapsed = time.perf_counter() - t0
    lemmas = {r.lemma for r in reports}
    failed = [r for r in reports if not r.holds]
    ok = (not failed and len(reports) >= FLEET_MIN_CHECKS and elapsed < 600
          and lemmas == {"rhs", "logderiv_lower", "ratio_gap", "derivative_of_ratio", "lemma2"})
    report(capsys, 5, ok, f"{len(reports) - len(failed)}/{len(reports)} checks hold over "
                          f"{sorted(lemmas)}, {elapsed:.1f}s (< 600s)")


def test_criterion_6_cauchy_limit(capsys):
    exact = (-3 + math.sqrt(13)) / 2
    errs = [abs(complex(empirical_cauchy(scaled_measure(HERMITE, n), 3)) - exact) for n in CAUCHY_N]
    ok = all(a > b for a, b in zip(errs, errs[1:])) and errs[-1] <= CAUCHY_TOL
    report(capsys, 6, ok, "errors at n = " + ", ".join(f"{n}: {e:.3e}" for n, e in zip(CAUCHY_N, errs))
                          + f" (strictly decreasing, last <= {CAUCHY_TOL})")


def test_criterion_7_discriminant(capsys):
    locus = discriminant_locus(curve_from_operator(HERMITE))
    pts = sorted((complex(p) for p in locus.points), key=lambda z: z.imag)
    close = len(pts) == 2 and abs(pts[0] + 2j) <= DISCRIMINANT_TOL and abs(pts[1] - 2j) <= DISCRIMINANT_TOL
    c_hat, _ = estimate_c0(scan(HERMITE, 60, 120, 10))
    consistent = all(C0_WINDOW[0] <= abs(p) <= C0_WINDOW[1] for p in pts)
    report(capsys, 7, close and consistent,
           f"points {pts} vs +-2i (tol {DISCRIMINANT_TOL}); |points| = 2 against c_hat = {float(c_hat):.4f}")


def test_criterion_8_figure_reproduction(capsys, tmp_path):
    a, b = tmp_path / "t1_a.svg", tmp_path / "t1_b.svg"
    codes = [main(["measure", "--op", T1_TEXT, "--n", "100", "--svg", str(p)]) for p in (a, b)]
    text = a.read_text()
    meta = svg_metadata(text)
    m = scaled_measure(T1, 100)
    atoms = [complex(z) for z in m.atoms]
    in_box = all(meta["xmin"] <= z.real <= meta["xmax"] and meta["ymin"] <= z.imag <= meta["ymax"] for z in atoms)
    identical = a.read_bytes() == b.read_bytes()
    rmax = max(abs(z) for z in atoms)
    in_screen = rmax <= T1_SCREEN
    ok = codes == [0, 0] and in_box and identical and in_screen and meta["count"] == 100
    report(capsys, 8, ok, f"exit codes {codes}; auto-fit box contains atoms: {in_box}; byte-identical: "
                          f"{identical}; max |z| = {rmax:.4f} vs screen |z| <= {T1_SCREEN}: {in_screen}")
