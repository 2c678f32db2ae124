#!/usr/bin/env python3
"""Sweep the four game variants over a corpus and report any disagreement.

Example:
    python3 scripts/run_equivalence.py --max-n 4 --k 1-4 --q 1-6
    python3 scripts/run_equivalence.py --corpus named:P5,C6,K4 --k 1-3 --q 1-5
"""

import argparse
import sys
import time

sys.path.insert(0, "src")

from bdtw.corpus import all_graphs, parse_corpus_spec
from bdtw.game import minimum_placements
from bdtw.graphs import closure


def parse_range(text):
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=0,
                    help="sweep all labeled graphs on exactly this many vertices")
    ap.add_argument("--corpus", action="append", default=[])
    ap.add_argument("--k", default="1-3")
    ap.add_argument("--q", default="1-5")
    args = ap.parse_args()

    instances = []
    if args.max_n:
        instances += [(f"n{args.max_n}#{i}", g) for i, g in enumerate(all_graphs(args.max_n))]
    for spec in args.corpus:
        instances += parse_corpus_spec(spec).instances()
    if not instances:
        ap.error("give --max-n and/or --corpus")

    ks, qs = parse_range(args.k), parse_range(args.q)
    q_max = max(qs)
    start = time.monotonic()
    bad = 0
    points = 0
    for name, g in instances:
        gc = closure(g)
        for k in ks:
            costs = {
                (label, mono): minimum_placements(host, k, mono, q_max)
                for label, host in (("plain", g), ("closure", gc))
                for mono in (False, True)
            }
            for q in qs:
                wins = {key: c is not None and c <= q for key, c in costs.items()}
                points += 1
                if len(set(wins.values())) != 1:
                    bad += 1
                    print(f"DISAGREE {name} k={k} q={q}: {costs}")
    elapsed = time.monotonic() - start
    print(f"{len(instances)} graphs, {points} grid points, "
          f"{bad} disagreements, {elapsed:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
