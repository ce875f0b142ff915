"""DIMACS CNF documents, a sequential-counter encoder and a DPLL fallback solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from structramsey.errors import InputError


@dataclass
class CNF:
    num_vars: int = 0
    clauses: list[list[int]] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, clause: Iterable[int]):
        self.clauses.append([int(x) for x in clause])

    def to_dimacs(self) -> str:
        lines = [f"c {c}" for c in self.comments]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines.extend(" ".join(str(x) for x in cl) + " 0" for cl in self.clauses)
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CNF:
    cnf = CNF()
    header = None
    pending: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            cnf.comments.append(line[1:].strip())
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InputError(f"bad DIMACS header {line!r}")
            header = (int(parts[2]), int(parts[3]))
            cnf.num_vars = header[0]
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                cnf.clauses.append(pending)
                pending = []
            else:
                pending.append(lit)
    if pending:
        raise InputError("last clause is not terminated by 0")
    if header is None:
        raise InputError("missing DIMACS header")
    if header[1] != len(cnf.clauses):
        raise InputError(f"header declares {header[1]} clauses, found {len(cnf.clauses)}")
    return cnf


def add_at_most(cnf: CNF, lits: Sequence[int], bound: int):
    """Sequential-counter encoding of ``sum(lits) <= bound``.

    Register ``s[i][j]`` means "at least j+1 of lits[0..i] are true".
    """
    m = len(lits)
    if bound < 0:
        z = cnf.new_var()
        cnf.add([z])
        cnf.add([-z])
        return
    if bound >= m:
        return
    if bound == 0:
        for x in lits:
            cnf.add([-x])
        return
    s = [[cnf.new_var() for _ in range(bound)] for _ in range(m - 1)]
    cnf.add([-lits[0], s[0][0]])
    for j in range(1, bound):
        cnf.add([-s[0][j]])
    for i in range(1, m - 1):
        cnf.add([-lits[i], s[i][0]])
        cnf.add([-s[i - 1][0], s[i][0]])
        for j in range(1, bound):
            cnf.add([-lits[i], -s[i - 1][j - 1], s[i][j]])
            cnf.add([-s[i - 1][j], s[i][j]])
        cnf.add([-lits[i], -s[i - 1][bound - 1]])
    cnf.add([-lits[m - 1], -s[m - 2][bound - 1]])


def add_at_least(cnf: CNF, lits: Sequence[int], bound: int):
    """``sum(lits) >= bound`` as at-most ``len(lits) - bound`` false literals."""
    add_at_most(cnf, [-x for x in lits], len(lits) - bound)


def solve(cnf: CNF) -> list[int] | None:
    """DPLL with two watched literals and chronological backtracking.

    Returns a model as a list of signed literals for variables ``1..num_vars``
    or ``None`` if the formula is unsatisfiable.
    """
    n = cnf.num_vars
    value = [0] * (n + 1)
    clauses: list[list[int]] = []
    units: list[int] = []
    for cl in cnf.clauses:
        lits = list(dict.fromkeys(cl))
        if any(-x in lits for x in lits):
            continue
        if not lits:
            return None
        if len(lits) == 1:
            units.append(lits[0])
        else:
            clauses.append(lits)
    watches: dict[int, list[int]] = {}
    for ci, cl in enumerate(clauses):
        watches.setdefault(cl[0], []).append(ci)
        watches.setdefault(cl[1], []).append(ci)

    occurrence = [0] * (n + 1)
    for cl in cnf.clauses:
        for x in cl:
            occurrence[abs(x)] += 1
    var_order = sorted(range(1, n + 1), key=lambda v: (-occurrence[v], v))

    trail: list[int] = []

    def lit_value(x: int) -> int:
        v = value[abs(x)]
        return v if x > 0 else -v

    def assign(x: int) -> bool:
        cur = lit_value(x)
        if cur == 1:
            return True
        if cur == -1:
            return False
        value[abs(x)] = 1 if x > 0 else -1
        trail.append(x)
        return True

    def propagate(start: int) -> bool:
        head = start
        while head < len(trail):
            x = trail[head]
            head += 1
            false_lit = -x
            watching = watches.get(false_lit, [])
            keep = []
            ok = True
            for idx, ci in enumerate(watching):
                if not ok:
                    keep.append(ci)
                    continue
                cl = clauses[ci]
                if cl[0] == false_lit:
                    cl[0], cl[1] = cl[1], cl[0]
                if lit_value(cl[0]) == 1:
                    keep.append(ci)
                    continue
                for j in range(2, len(cl)):
                    if lit_value(cl[j]) != -1:
                        cl[1], cl[j] = cl[j], cl[1]
                        watches.setdefault(cl[1], []).append(ci)
                        break
                else:
                    keep.append(ci)
                    if not assign(cl[0]):
                        ok = False
            watches[false_lit] = keep
            if not ok:
                return False
        return True

    for u in units:
        if not assign(u):
            return None
    if not propagate(0):
        return None

    decisions: list[tuple[int, int, bool]] = []  # (literal, trail length before, flipped)
    while True:
        var = next((v for v in var_order if value[v] == 0), None)
        if var is None:
            return [v if value[v] == 1 else -v for v in range(1, n + 1)]
        decisions.append((-var, len(trail), False))
        assign(-var)
        while not propagate(decisions[-1][1]):
            while decisions and decisions[-1][2]:
                _, mark, _ = decisions.pop()
                for x in trail[mark:]:
                    value[abs(x)] = 0
                del trail[mark:]
            if not decisions:
                return None
            lit, mark, _ = decisions.pop()
            for x in trail[mark:]:
                value[abs(x)] = 0
            del trail[mark:]
            decisions.append((-lit, mark, True))
            assign(-lit)


def check_model(cnf: CNF, model: Sequence[int]) -> bool:
    truth = {abs(x): x > 0 for x in model}
    return all(any(truth.get(abs(x), False) == (x > 0) for x in cl) for cl in cnf.clauses)
