"""Run the disc-sample inequality fleet and summarise it per lemma and degree.

    python3 scripts/lemma_fleet.py [--seeds 100] [--csv lemmas.csv]
"""

import argparse
import time
from collections import defaultdict

from eigenroot.lemmas import FleetConfig, run_fleet
from eigenroot.records import atomic_write, lemma_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--csv")
    args = ap.parse_args()
    t0 = time.perf_counter()
    reports = run_fleet(FleetConfig(seeds=args.seeds), args.workers)
    tally = defaultdict(lambda: [0, 0, 0.0])
    for r in reports:
        t = tally[r.lemma, r.n]
        t[0] += r.holds
        t[1] += 1
        # slack: how far from the bound the worst case came
        if r.orientation == "<=":
            ratio = r.lhs / r.rhs if r.rhs else 0.0
        else:
            ratio = r.rhs / r.lhs if r.lhs else float("inf")
        if r.lemma != "lemma2":
            t[2] = max(t[2], ratio)
    for (lemma, n), (ok, total, worst) in sorted(tally.items()):
        extra = f"  worst lhs/rhs {worst:.3f}" if lemma != "lemma2" else ""
        print(f"{lemma:20s} n={n:3d}  {ok}/{total}{extra}")
    print(f"{len(reports)} checks in {time.perf_counter() - t0:.1f}s")
    if args.csv:
        atomic_write(args.csv, lemma_csv(reports))


if __name__ == "__main__":
    main()
