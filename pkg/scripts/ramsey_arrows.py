"""Decide a table of small partition arrows and time each search.

    python3 scripts/ramsey_arrows.py [--workers N]
"""

import argparse
import time

from structramsey.arrows import ArrowStatement, check_arrow
from structramsey.catalog import chain, complete_graph

CASES = [
    ("chain4 -> (chain3)^chain2", chain(4), chain(3), chain(2), 2, 1),
    ("chain5 -> (chain3)^chain2", chain(5), chain(3), chain(2), 2, 1),
    ("chain6 -> (chain3)^chain2", chain(6), chain(3), chain(2), 2, 1),
    ("chain5 -> (chain3)^chain1", chain(5), chain(3), chain(1), 2, 1),
    ("chain4 -> (chain3)^chain1, t=2", chain(4), chain(3), chain(1), 2, 2),
    ("K5 -> (K3)^K2", complete_graph(5), complete_graph(3), complete_graph(2), 2, 1),
    ("K6 -> (K3)^K2", complete_graph(6), complete_graph(3), complete_graph(2), 2, 1),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    for label, C, B, A, k, t in CASES:
        start = time.perf_counter()
        v = check_arrow(ArrowStatement(C, B, A, k, t), workers=args.workers)
        dt = time.perf_counter() - start
        print(f"{label:<34} k={k} {'holds' if v.holds else 'fails':<6} {dt:7.3f}s")


if __name__ == "__main__":
    main()
