"""Pilot run: measure r_n/n^d for the three figure operators and freeze the
acceptance thresholds into pilot.json at the repository root.

    python3 scripts/pilot.py [--n-from 80] [--n-to 120] [--step 1] [--workers 1]
"""

import argparse
import json
import time
from pathlib import Path

from eigenroot.dsl import parse_operator
from eigenroot.records import atomic_write
from eigenroot.scaling import ratio_spread, scan, scaled_measure

OPERATORS = {
    "T1": "z*D + z*D^2 + z*D^3 + z*D^4 + z*D^5",
    "T2": "z^2*D^2 + D^7",
    "T3": "z^3*D^3 + z^2*D^4 + z*D^5",
}
ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-from", type=int, default=80)
    ap.add_argument("--n-to", type=int, default=120)
    ap.add_argument("--step", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=str(ROOT / "pilot.json"))
    args = ap.parse_args()
    summary = {"window": [args.n_from, args.n_to, args.step], "operators": {}}
    for name, text in OPERATORS.items():
        T = parse_operator(text)
        t0 = time.perf_counter()
        recs = scan(T, args.n_from, args.n_to, args.step, workers=args.workers)
        ratios = [float(r.ratio) for r in recs if r.ok]
        m = scaled_measure(T, 100)
        max_atom = max(abs(complex(a)) for a in m.atoms)
        summary["operators"][name] = {
            "operator": text,
            "ratio_min": min(ratios),
            "ratio_max": max(ratios),
            "spread": float(ratio_spread(recs)),
            "collisions": [r.n for r in recs if r.collision],
            "max_scaled_modulus_n100": max_atom,
            "seconds": round(time.perf_counter() - t0, 1),
        }
        print(name, json.dumps(summary["operators"][name]))
    summary["frozen"] = {"spread_max": 1.5, "t1_scaled_radius": 2.0}
    atomic_write(args.out, json.dumps(summary, indent=2) + "\n")


if __name__ == "__main__":
    main()
