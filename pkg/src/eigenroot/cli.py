"""Command line entry point: ``eigenroot <command> ...``.

Exit codes: 0 success, 2 parse/validation error, 3 numerical failure,
4 failed lemma fleet.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import os
import sys
import time

from . import __version__
from .curve import (ContinuationStall, NearDiscriminant, branch_at, curve_from_operator,
                    discriminant_locus, format_bivariate)
from .dsl import OperatorSyntaxError, ValidationError, parse_operator
from .eigen import SpectralCollision, eigenpolynomial
from .lemmas import FleetConfig, PreconditionViolation, run_fleet
from .operators import NotDegenerate, classify, require_degenerate
from .poly import format_fraction
from .records import (RunRecord, atomic_write, big_str, classification_dict, complex_pair, curve_json,
                      emit_svg, lemma_csv, measure_csv, scan_csv, scan_rows)
from .roots import PRECISION_ENV, NoConvergence, find_roots
from .scaling import (DEFAULT_SAMPLE_POINTS, PoleProximity, SampleInsideSupport, conjecture_residual,
                      scaled_measure, scan)

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_LEMMA = 0, 2, 3, 4

log = logging.getLogger("eigenroot")


class CommandError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def load_config(path: str | None) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    if path:
        if not cp.read(path, encoding="utf-8"):
            raise CommandError(f"cannot read config {path}", EXIT_INPUT)
    return cp


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(",", " ").split())


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.replace(",", " ").split())


def fleet_config(cp: configparser.ConfigParser, seeds: int | None) -> FleetConfig:
    kw = {}
    if cp.has_section("lemmas"):
        sec = cp["lemmas"]
        conv = {"degrees": _ints, "radii": _floats, "orders": _ints, "seeds": int, "margin": float,
                "samples": int, "lemma2_s": float,
                "lemma2_polys": lambda t: tuple(p.strip() for p in t.split(";") if p.strip())}
        for key, fn in conv.items():
            if key in sec:
                kw[key] = fn(sec[key])
    if seeds is not None:
        kw["seeds"] = seeds
    return FleetConfig(**kw)


def _apply_precision(cp: configparser.ConfigParser):
    """Config may raise the global precision floor; the environment still wins if larger."""
    if cp.has_option("eigenroot", "precision_bits"):
        bits = cp.getint("eigenroot", "precision_bits")
        current = int(os.environ.get(PRECISION_ENV, "0") or 0)
        os.environ[PRECISION_ENV] = str(max(bits, current))


def _digits(args, cp) -> int:
    if args.digits is not None:
        return args.digits
    return cp.getint("eigenroot", "digits", fallback=12)


def _operator(args):
    T = parse_operator(args.op)
    return T, classify(T)


def cmd_classify(args, cp):
    T, c = _operator(args)
    print(f"operator: {T}")
    print(f"kind: {c.kind.value}")
    if c.j0 is not None:
        print(f"j0={c.j0}")
    if c.is_degenerate:
        print(f"d={format_fraction(c.d)}")
        print("A={" + ",".join(map(str, sorted(c.A))) + "}")
        print(f"jm={c.jm}")
    elif c.reason:
        print(f"reason: {c.reason}")


def cmd_eigen(args, cp):
    T, _ = _operator(args)
    pair = eigenpolynomial(T, args.n)
    print(f"lambda={format_fraction(pair.lam)}")
    if args.print_coeffs:
        print(" ".join(format_fraction(c) for c in pair.p.coeffs))
    else:
        print(f"p={pair.p}")


def cmd_roots(args, cp):
    T, _ = _operator(args)
    rs = find_roots(eigenpolynomial(T, args.n).p, _digits(args, cp))
    for z in rs.roots:
        re, im = complex_pair(z, args.digits or 17)
        print(f"{re} {im}")
    print(f"# r={big_str(rs.r)} precision={rs.precision_used}", file=sys.stderr)


def cmd_scan(args, cp):
    T, c = _operator(args)
    require_degenerate(T)
    workers = args.workers if args.workers is not None else cp.getint("eigenroot", "workers", fallback=1)
    t0 = time.perf_counter()
    records = scan(T, args.n_from, args.n_to, args.step, _digits(args, cp), workers)
    elapsed = time.perf_counter() - t0
    text = scan_csv(records)
    if args.csv:
        atomic_write(args.csv, text)
    else:
        sys.stdout.write(text)
    if args.json:
        rows = scan_rows(records)
        for row, rec in zip(rows, records):
            row.update(precision_used=rec.precision_used, seconds=round(rec.seconds, 6), error=rec.error)
        rr = RunRecord(operator=args.op, classification=classification_dict(c), command="scan",
                       parameters={"n_from": args.n_from, "n_to": args.n_to, "step": args.step,
                                   "digits": _digits(args, cp), "workers": workers},
                       results=rows, version=__version__, timing={"seconds": round(elapsed, 6)})
        atomic_write(args.json, rr.to_json())
    failed = [r.n for r in records if r.error]
    if failed:
        raise CommandError(f"no convergence for n = {failed}", EXIT_NUMERIC)


def cmd_measure(args, cp):
    T, c = _operator(args)
    require_degenerate(T)
    try:
        m = scaled_measure(T, args.n, _digits(args, cp))
    except SpectralCollision as exc:
        raise CommandError(f"empty measure: {exc}", EXIT_NUMERIC) from exc
    if args.svg:
        emit_svg(m, args.svg, f"{args.op}, n = {args.n}")
    if args.csv:
        atomic_write(args.csv, measure_csv(m))
    if not args.svg and not args.csv:
        sys.stdout.write(measure_csv(m))


def cmd_lemmas(args, cp):
    config = fleet_config(cp, args.seeds)
    workers = args.workers if args.workers is not None else cp.getint("eigenroot", "workers", fallback=1)
    reports = run_fleet(config, workers)
    text = lemma_csv(reports)
    if args.csv:
        atomic_write(args.csv, text)
    failed = [r for r in reports if not r.holds]
    by_lemma: dict[str, list[int]] = {}
    for r in reports:
        tally = by_lemma.setdefault(r.lemma, [0, 0])
        tally[0] += r.holds
        tally[1] += 1
    for name, (ok, total) in sorted(by_lemma.items()):
        print(f"{name}: {ok}/{total} hold")
    if failed:
        for r in failed[:20]:
            print(f"FAIL {r.lemma} n={r.n} A={r.A} j={r.j} seed={r.seed} lhs={r.lhs:.6g} rhs={r.rhs:.6g} "
                  f"status={r.status}", file=sys.stderr)
        raise CommandError(f"{len(failed)} of {len(reports)} checks failed", EXIT_LEMMA)


def cmd_curve(args, cp):
    T, _ = _operator(args)
    require_degenerate(T)
    curve = curve_from_operator(T)
    print(f"F(z,y) = {format_bivariate(curve.polynomial())}")
    locus = discriminant_locus(curve) if args.discriminant or args.sample else None
    if args.discriminant:
        print(f"resultant degree: {locus.resultant_degree}")
        for z in locus.points:
            re, im = complex_pair(z, 15)
            print(f"branch point: {re} {im}")
        for z in locus.degenerations:
            re, im = complex_pair(z, 15)
            print(f"degeneration: {re} {im}")
    samples = [branch_at(curve, z) for z in args.sample or ()]
    for b in samples:
        zr, zi = complex_pair(b.z, 10)
        yr, yi = complex_pair(b.y, 17)
        print(f"y({zr}{'+' if not zi.startswith('-') else ''}{zi}i) = {yr} {yi}  residual {big_str(b.residual, 3)}")
    if args.json:
        atomic_write(args.json, curve_json(curve, locus, samples))


def cmd_cauchy_residual(args, cp):
    T, _ = _operator(args)
    require_degenerate(T)
    points = args.points or list(DEFAULT_SAMPLE_POINTS)
    residuals = conjecture_residual(T, args.n, points, _digits(args, cp))
    for z, r in zip(points, residuals):
        print(f"{z} {big_str(r, 6)}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eigenroot", description="Eigenpolynomials of degenerate exactly-solvable operators.")
    p.add_argument("--version", action="version", version=f"eigenroot {__version__}")
    p.add_argument("--config", help="INI file with [eigenroot] and [lemmas] sections")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def op_cmd(name, fn, help_text, n=False):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("--op", required=True, help='operator, e.g. "z*D + D^2"')
        if n:
            s.add_argument("--n", type=int, required=True)
        s.set_defaults(func=fn)
        return s

    op_cmd("classify", cmd_classify, "j0, d, A and jm of an operator")
    s = op_cmd("eigen", cmd_eigen, "exact eigenpolynomial", n=True)
    s.add_argument("--print-coeffs", action="store_true", help="ascending coefficients")
    s = op_cmd("roots", cmd_roots, "roots of the eigenpolynomial", n=True)
    s.add_argument("--digits", type=int)
    s = op_cmd("scan", cmd_scan, "r_n and r_n/n^d over a range of degrees")
    s.add_argument("--n-from", type=int, required=True)
    s.add_argument("--n-to", type=int, required=True)
    s.add_argument("--step", type=int, default=1)
    s.add_argument("--digits", type=int)
    s.add_argument("--workers", type=int)
    s.add_argument("--csv")
    s.add_argument("--json")
    s = op_cmd("measure", cmd_measure, "scaled roots as CSV and/or SVG", n=True)
    s.add_argument("--digits", type=int)
    s.add_argument("--svg")
    s.add_argument("--csv")
    s = sub.add_parser("lemmas", help="run the disc-sample inequality fleet")
    s.add_argument("--seeds", type=int)
    s.add_argument("--workers", type=int)
    s.add_argument("--csv")
    s.add_argument("--config", dest="sub_config")
    s.set_defaults(func=cmd_lemmas)
    s = op_cmd("curve", cmd_curve, "limiting algebraic curve of the Cauchy transform")
    s.add_argument("--discriminant", action="store_true")
    s.add_argument("--sample", type=parse_complex, nargs="+")
    s.add_argument("--json")
    s = op_cmd("cauchy-residual", cmd_cauchy_residual, "|F(z, C_n(z))| at sample points", n=True)
    s.add_argument("--points", type=parse_complex, nargs="+")
    s.add_argument("--digits", type=int)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cp = load_config(getattr(args, "sub_config", None) or args.config)
        _apply_precision(cp)
        args.func(args, cp)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (OperatorSyntaxError, ValidationError, NotDegenerate, PreconditionViolation,
            configparser.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NoConvergence, ContinuationStall, NearDiscriminant, SpectralCollision, PoleProximity,
            SampleInsideSupport) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
