"""Scaled-root scatter plots for the three figure operators at n = 100.

Roots are scaled by n^d (not by 100 for every operator). Output goes to
figures/ as SVG plus the atom coordinates as CSV.

    python3 scripts/figures.py [--n 100] [--out figures]
"""

import argparse
from pathlib import Path

from eigenroot.dsl import parse_operator
from eigenroot.records import atomic_write, emit_svg, measure_csv
from eigenroot.scaling import scaled_measure

OPERATORS = {
    "T1": "z*D + z*D^2 + z*D^3 + z*D^4 + z*D^5",
    "T2": "z^2*D^2 + D^7",
    "T3": "z^3*D^3 + z^2*D^4 + z*D^5",
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--out", default="figures")
    args = ap.parse_args()
    out = Path(args.out)
    for name, text in OPERATORS.items():
        m = scaled_measure(parse_operator(text), args.n)
        emit_svg(m, out / f"{name}_n{args.n}.svg", f"{text}, n = {args.n}")
        atomic_write(out / f"{name}_n{args.n}.csv", measure_csv(m))
        rmax = max(abs(complex(a)) for a in m.atoms)
        print(f"{name}: {len(m.atoms)} atoms, max scaled modulus {rmax:.4f}")


if __name__ == "__main__":
    main()
