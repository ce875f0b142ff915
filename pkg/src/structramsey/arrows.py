"""Finite partition arrows ``C -> (B)^A_{k,t}`` and fragment-relative degree bounds.

An arrow holds when every ``k``-coloring of the A-copies of ``C`` admits a
B-copy on whose A-copies at most ``t`` colors occur.  Only the partition a
coloring induces matters, so colorings are searched as restricted-growth
strings with at most ``min(k, #copies)`` blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from structramsey.config import Limits, current_limits
from structramsey.errors import InputError, NoHostError, ResourceGuardError
from structramsey.partitions import count_partitions, iter_rgs, normalize, rgs_to_string
from structramsey.sat import CNF, add_at_least
from structramsey.search import find_defeating, make_problem
from structramsey.structures import (
    Copy,
    CopySet,
    FiniteStructure,
    automorphisms,
    canonical_form,
    embeds,
    enumerate_copies,
    induced_substructure,
    are_isomorphic,
)


@dataclass(frozen=True)
class Coloring:
    """A total map from a copy set to ``{0, ..., k-1}``, stored in copy order."""

    copy_set: CopySet
    k: int
    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(c) for c in self.assignment))
        if self.k < 1:
            raise InputError("a coloring needs k >= 1")
        if len(self.assignment) != len(self.copy_set):
            raise InputError(
                f"coloring has {len(self.assignment)} values for {len(self.copy_set)} copies"
            )
        if any(not 0 <= c < self.k for c in self.assignment):
            raise InputError(f"color values must lie in [0, {self.k})")

    def __call__(self, copy: Copy | Sequence[int]) -> int:
        subset = copy.subset if isinstance(copy, Copy) else copy
        return self.assignment[self.copy_set.index(subset)]

    @property
    def partition(self) -> tuple[int, ...]:
        return normalize(self.assignment)

    @property
    def num_colors(self) -> int:
        return len(set(self.assignment))

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "copies": [list(c.subset) for c in self.copy_set],
            "colors": list(self.assignment),
        }


@dataclass(frozen=True)
class ArrowStatement:
    C: FiniteStructure
    B: FiniteStructure
    A: FiniteStructure
    k: int
    t: int

    def __post_init__(self):
        if not (self.C.signature == self.B.signature == self.A.signature):
            raise InputError("C, B and A must share a signature")
        if self.k < 1 or self.t < 1:
            raise InputError("k and t must both be at least 1")
        if self.t > self.k:
            raise InputError(f"t = {self.t} exceeds k = {self.k}")


@dataclass(frozen=True)
class ArrowVerdict:
    statement: ArrowStatement
    holds: bool
    counterexample: Coloring | None = None
    good_copy_witnesses: dict | None = field(default=None, compare=False)

    def report(self) -> str:
        s = self.statement
        lines = [
            f"arrow |C|={s.C.size} |B|={s.B.size} |A|={s.A.size} k={s.k} t={s.t}",
            f"verdict: {'holds' if self.holds else 'fails'}",
        ]
        if self.counterexample is not None:
            chi = self.counterexample
            lines.append(f"counterexample partition: {rgs_to_string(chi.assignment)}")
            for c, col in zip(chi.copy_set, chi.assignment):
                lines.append(f"  {list(c.subset)} -> {col}")
        return "\n".join(lines)


@dataclass(frozen=True)
class ArrowSetup:
    """Everything a coloring search over ``binom(C, A)`` needs."""

    copies_a: CopySet
    copies_b: CopySet
    hyperedges: tuple[tuple[int, ...], ...]
    symmetries: tuple[tuple[int, ...], ...]


def copy_permutations(copies: CopySet, group: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Action of ambient automorphisms on copy indices."""
    perms = set()
    for g in group:
        perms.add(tuple(copies.index(g[x] for x in c.subset) for c in copies))
    return tuple(sorted(perms))


def ambient_symmetries(C: FiniteStructure, copies: CopySet, limits: Limits) -> tuple:
    group = automorphisms(C, limit=limits.max_symmetries)
    if len(group) > limits.max_symmetries:
        return ()
    return copy_permutations(copies, group)


def arrow_setup(C: FiniteStructure, B: FiniteStructure, A: FiniteStructure, limits: Limits | None = None) -> ArrowSetup:
    limits = current_limits(limits)
    copies_a = enumerate_copies(A, C)
    copies_b = enumerate_copies(B, C)
    if len(copies_b) == 0:
        raise NoHostError("the ambient structure contains no copy of B")
    hyper = tuple(tuple(copies_a.inside(b.subset)) for b in copies_b)
    return ArrowSetup(copies_a, copies_b, hyper, ambient_symmetries(C, copies_a, limits))


def colors_on_copy(
    chi: Coloring, b_copy: Copy | Sequence[int], A: FiniteStructure, B: FiniteStructure | None = None
) -> frozenset:
    """Colors ``chi`` takes on the A-copies lying inside ``b_copy``."""
    subset = b_copy.subset if isinstance(b_copy, Copy) else tuple(sorted(b_copy))
    C = chi.copy_set.ambient
    if not are_isomorphic(chi.copy_set.pattern, A):
        raise InputError("coloring is not a coloring of copies of A")
    if B is not None and (len(subset) != B.size or not are_isomorphic(induced_substructure(C, subset), B)):
        raise InputError(f"{list(subset)} is not a copy of B")
    return frozenset(chi.assignment[i] for i in chi.copy_set.inside(subset))


def _coloring_from_rgs(copies: CopySet, k: int, rgs) -> Coloring:
    return Coloring(copies, k, tuple(rgs))


def check_arrow(
    s: ArrowStatement,
    workers: int = 1,
    limits: Limits | None = None,
    witnesses: bool = False,
) -> ArrowVerdict:
    """Decide ``C -> (B)^A_{k,t}``.

    On failure the counterexample is the lexicographically least defeating
    partition (at most ``k`` blocks) in copy order.  With ``witnesses`` and a
    holding arrow, every partition is mapped to the first good B-copy.
    """
    limits = current_limits(limits)
    setup = arrow_setup(s.C, s.B, s.A, limits)
    n = len(setup.copies_a)
    k_eff = max(1, min(s.k, n))
    problem = make_problem(n, k_eff, "distinct", setup.hyperedges, t=s.t, symmetries=setup.symmetries)
    found = find_defeating(problem, limits.node_limit, workers)
    if found is not None:
        chi = _coloring_from_rgs(setup.copies_a, s.k, found)
        for b in setup.copies_b:
            if len(colors_on_copy(chi, b, s.A)) < s.t + 1:
                raise AssertionError("emitted counterexample does not defeat every copy of B")
        return ArrowVerdict(s, False, chi)
    good = None
    if witnesses:
        if count_partitions(n, k_eff) > 100_000:
            raise ResourceGuardError("too many partitions to tabulate good-copy witnesses")
        good = {}
        for rgs in iter_rgs(n, k_eff):
            for j, h in enumerate(setup.hyperedges):
                if len({rgs[i] for i in h}) <= s.t:
                    good[rgs] = setup.copies_b.copies[j]
                    break
    return ArrowVerdict(s, True, None, good)


@dataclass(frozen=True)
class MinTResult:
    t: int
    k: int
    witness: Coloring | None

    def report(self) -> str:
        lines = [f"min_t = {self.t} (k = {self.k})"]
        if self.witness is not None:
            lines.append(
                f"lower-bound witness for t = {self.t - 1}: {rgs_to_string(self.witness.assignment)}"
            )
        return "\n".join(lines)


def min_t(
    C: FiniteStructure,
    B: FiniteStructure,
    A: FiniteStructure,
    k: int | None = None,
    workers: int = 1,
    limits: Limits | None = None,
) -> MinTResult:
    """Least ``t`` such that ``C -> (B)^A_{k,t}``.

    ``k`` defaults to ``|binom(C, A)|``, where every coloring pattern is
    available; the witness is the defeating coloring for ``t - 1``.
    """
    limits = current_limits(limits)
    setup = arrow_setup(C, B, A, limits)
    n = len(setup.copies_a)
    if k is None:
        k = max(1, n)
    if k < 1:
        raise InputError("k must be at least 1")
    witness = None
    for t in range(1, k + 1):
        verdict = check_arrow(ArrowStatement(C, B, A, k, t), workers=workers, limits=limits)
        if verdict.holds:
            return MinTResult(t, k, witness)
        witness = verdict.counterexample
    # t = k always holds: no copy can see more than k colors
    raise AssertionError("unreachable: arrow must hold at t = k")


@dataclass(frozen=True)
class DegreeBounds:
    lower: int
    upper: int | None
    lower_witness: dict | None
    upper_witness: dict

    def report(self) -> str:
        up = "unbounded within fragment" if self.upper is None else str(self.upper)
        lines = [f"lower: {self.lower}", f"upper: {up}"]
        if self.lower_witness:
            w = self.lower_witness
            lines.append(f"lower witness: B size {w['B'].size}, k = {w['k']}, hosts checked = {len(w['colorings'])}")
        for (b_idx, k), (host_idx, value) in sorted(self.upper_witness.items()):
            lines.append(f"  B#{b_idx} k={k}: host #{host_idx} gives t <= {value}")
        return "\n".join(lines)


def degree_bounds(
    A: FiniteStructure,
    fragment,
    size_limit: int,
    k_values: Sequence[int] = (2,),
    workers: int = 1,
    limits: Limits | None = None,
) -> DegreeBounds:
    """Tabulate fragment evidence about the Ramsey degree of ``A``.

    For each pattern ``B`` of the fragment with ``|B| <= size_limit`` that
    contains ``A`` and each ``k``, the value ``v(B, k)`` is the least
    ``min_t(C, B, A, k)`` over all hosts ``C`` of the fragment.  The upper
    bound is the largest ``v`` (each certified by its best host); the lower
    bound is the same largest ``v``, certified by one defeating coloring per
    host.  Both are fragment-relative.
    """
    limits = current_limits(limits)
    members = list(fragment.members)
    keys = [canonical_form(m) for m in members]
    if canonical_form(A) not in keys:
        raise InputError("A is not a member of the fragment")
    upper_witness: dict = {}
    best_val = None
    lower_witness = None
    for b_idx, B in enumerate(members):
        if B.size > size_limit or not embeds(A, B):
            continue
        for k in k_values:
            best = None
            colorings = {}
            for c_idx, C in enumerate(members):
                if C.size < B.size or not embeds(B, C):
                    continue
                res = min_t(C, B, A, k=k, workers=workers, limits=limits)
                colorings[c_idx] = res.witness
                if best is None or res.t < best[1]:
                    best = (c_idx, res.t)
            assert best is not None  # B hosts itself
            upper_witness[(b_idx, k)] = best
            if best_val is None or best[1] > best_val:
                best_val = best[1]
                lower_witness = {"B": B, "B_index": b_idx, "k": k, "colorings": colorings}
    if best_val is None:
        return DegreeBounds(1, None, None, {})
    return DegreeBounds(best_val, best_val, lower_witness, upper_witness)


@dataclass
class CnfExport:
    cnf: CNF
    legend: dict

    def dimacs(self) -> str:
        return self.cnf.to_dimacs()

    def legend_json(self) -> str:
        return json.dumps(self.legend, indent=1, sort_keys=True) + "\n"


def export_cnf(s: ArrowStatement, limits: Limits | None = None) -> CnfExport:
    """CNF that is satisfiable iff the arrow FAILS.

    ``x(c, j)``: A-copy ``c`` gets color ``j`` (exactly one per copy).
    ``u(b, j)``: some A-copy inside B-copy ``b`` gets color ``j``.
    Each B-copy needs at least ``t + 1`` true ``u`` variables.
    """
    setup = arrow_setup(s.C, s.B, s.A, limits)
    n = len(setup.copies_a)
    k = s.k
    cnf = CNF(comments=[f"arrow failure: |C|={s.C.size} |B|={s.B.size} |A|={s.A.size} k={k} t={s.t}"])
    x = [[cnf.new_var() for _ in range(k)] for _ in range(n)]
    u = [[cnf.new_var() for _ in range(k)] for _ in range(len(setup.hyperedges))]
    for c in range(n):
        cnf.add(x[c])
        for j in range(k):
            for j2 in range(j + 1, k):
                cnf.add([-x[c][j], -x[c][j2]])
    for b, h in enumerate(setup.hyperedges):
        for j in range(k):
            cnf.add([-u[b][j]] + [x[c][j] for c in h])
            for c in h:
                cnf.add([-x[c][j], u[b][j]])
        add_at_least(cnf, u[b], s.t + 1)
    legend = {
        "k": k,
        "t": s.t,
        "a_copies": [list(c.subset) for c in setup.copies_a],
        "b_copies": [list(c.subset) for c in setup.copies_b],
        "x": [[x[c][j], c, j] for c in range(n) for j in range(k)],
        "u": [[u[b][j], b, j] for b in range(len(u)) for j in range(k)],
        "num_vars": cnf.num_vars,
    }
    return CnfExport(cnf, legend)


def decode_model(model: Sequence[int], legend: dict, copy_set: CopySet) -> Coloring:
    """Read the coloring off a satisfying assignment using the legend."""
    truth = {abs(v): v > 0 for v in model}
    if [list(c.subset) for c in copy_set] != legend["a_copies"]:
        raise InputError("legend does not match the copy set")
    colors = [None] * len(copy_set)
    for var, c, j in legend["x"]:
        if truth.get(var):
            if colors[c] is not None:
                raise InputError(f"copy {c} has two colors in the model")
            colors[c] = j
    if any(col is None for col in colors):
        raise InputError("model leaves some copy uncolored")
    return Coloring(copy_set, legend["k"], tuple(colors))
