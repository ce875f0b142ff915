"""Fragment-relative Ramsey degree evidence for small patterns.

    python3 scripts/degree_table.py
"""

import time

from structramsey.arrows import degree_bounds
from structramsey.catalog import FamilySpec, chain, complete_graph, generate_fragment, two_class

ROWS = [
    ("point in chains<=6", chain(1), FamilySpec("chains", (6,)), 3),
    ("2-chain in chains<=6", chain(2), FamilySpec("chains", (6,)), 3),
    ("point in chains<=4", chain(1), FamilySpec("chains", (4,)), 3),
    ("point in two-class<=3+3", two_class(1, 0), FamilySpec("two_class_equivalence", (3, 3)), 2),
    ("vertex in graphs<=5", complete_graph(1), FamilySpec("graphs", (5,)), 2),
]


def main():
    print(f"{'pattern / fragment':<28} {'size':>4} {'lower':>5} {'upper':>6} {'secs':>7}")
    for label, A, spec, size_limit in ROWS:
        start = time.perf_counter()
        res = degree_bounds(A, generate_fragment(spec), size_limit)
        up = "-" if res.upper is None else res.upper
        print(f"{label:<28} {size_limit:>4} {res.lower:>5} {up!s:>6} {time.perf_counter() - start:7.2f}")


if __name__ == "__main__":
    main()
