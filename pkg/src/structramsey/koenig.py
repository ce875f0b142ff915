"""Bounded-depth trees of coherent equivalence relations along a chain of substructures.

Level ``m`` of the tree holds the admissible relations with at most ``t``
blocks on ``binom(B_m, A)``; ``(m, E) -> (m+1, F)`` is an edge when ``F``
restricted to ``B_m`` is ``E``.  A branch is a root-to-deepest-level path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from structramsey.config import Limits, current_limits
from structramsey.errors import InputError, ResourceGuardError
from structramsey.kriz import EquivRelation, check_E_ramsey
from structramsey.partitions import iter_rgs
from structramsey.search import parallel_map
from structramsey.structures import FiniteStructure, enumerate_copies, induced_substructure, substructure_on

Oracle = Callable[[int, FiniteStructure, EquivRelation], bool]


@dataclass(frozen=True)
class LevelChain:
    """``B_0 ⊆ ... ⊆ B_d``; each level is the substructure of the next on its initial segment."""

    chain: tuple[FiniteStructure, ...]
    A: FiniteStructure
    ambient: FiniteStructure

    def __post_init__(self):
        object.__setattr__(self, "chain", tuple(self.chain))
        if not self.chain:
            raise InputError("a level chain needs at least one level")
        for lo, hi in zip(self.chain, self.chain[1:]):
            if lo.size > hi.size or induced_substructure(hi, range(lo.size)) != lo:
                raise InputError("each level must be the induced substructure of the next on an initial segment")

    @classmethod
    def from_enumeration(
        cls,
        F: FiniteStructure,
        enumeration: Sequence[int],
        sizes: Sequence[int],
        A: FiniteStructure,
        ambient: FiniteStructure,
    ) -> "LevelChain":
        """Levels supported by the first ``sizes[m]`` elements of ``enumeration`` of ``F``."""
        if sorted(sizes) != list(sizes):
            raise InputError("level sizes must be non-decreasing")
        if any(s > len(enumeration) for s in sizes):
            raise InputError("level size exceeds the enumeration")
        return cls(tuple(substructure_on(F, enumeration[:s]) for s in sizes), A, ambient)

    @property
    def depth(self) -> int:
        return len(self.chain) - 1


def restrict_relation(
    E: EquivRelation, B_m: FiniteStructure, support: Sequence[int] | None = None
) -> EquivRelation:
    """Restriction of ``E`` (on ``binom(B_n, A)``) to ``binom(B_m, A)``.

    ``support`` is the set of elements of ``B_n`` carrying ``B_m``; the
    initial segment of length ``|B_m|`` when omitted.
    """
    B_n = E.base.ambient
    elems = sorted(set(range(B_m.size) if support is None else support))
    if len(elems) != B_m.size or any(not 0 <= x < B_n.size for x in elems):
        raise InputError("support does not match B_m")
    if induced_substructure(B_n, elems) != B_m:
        raise InputError("B_m is not the induced substructure of B_n on the support")
    base = enumerate_copies(E.base.pattern, B_m)
    labels = [E.labels[E.base.index(elems[x] for x in sub)] for sub in base.subsets]
    return EquivRelation.from_labels(base, labels)


def default_oracle(lc: LevelChain, k: int | None = None, limits: Limits | None = None) -> Oracle:
    """Admit ``(B_m, E)`` when ``B_m`` is E-A-Ramsey in the ambient structure for ``k`` colors."""

    def oracle(level: int, B_m: FiniteStructure, E: EquivRelation) -> bool:
        return check_E_ramsey(lc.ambient, B_m, lc.A, E, k=k, limits=limits).holds

    oracle.certificate = f"check_E_ramsey(k={'saturated' if k is None else k})"
    return oracle


@dataclass
class KoenigTree:
    chain: LevelChain
    t: int
    levels: list[list[EquivRelation]]
    children: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    certificate: str = "custom oracle"

    def branching(self, level: int) -> list[int]:
        return [len(self.children.get((level, i), [])) for i in range(len(self.levels[level]))]


def _default_job(args):
    ambient, B_m, A, E, k, limits = args
    return check_E_ramsey(ambient, B_m, A, E, k=k, limits=limits).holds


def build_tree(
    lc: LevelChain,
    t: int,
    admissibility: Oracle | None = None,
    k: int | None = None,
    workers: int = 1,
    limits: Limits | None = None,
) -> KoenigTree:
    """Admissible relations per level plus restriction edges between levels.

    Without ``admissibility`` the E-A-Ramsey check in ``lc.ambient`` is used
    with ``k`` colors (saturated when ``k`` is None); only that default runs
    in worker processes.
    """
    if t < 1:
        raise InputError("t must be at least 1")
    limits = current_limits(limits)
    levels: list[list[EquivRelation]] = []
    for m, B_m in enumerate(lc.chain):
        base = enumerate_copies(lc.A, B_m)
        if len(base) > limits.max_relation_copies:
            raise ResourceGuardError(
                f"level {m} has {len(base)} copies; relation enumeration is capped at {limits.max_relation_copies}"
            )
        candidates = [EquivRelation(base, rgs) for rgs in iter_rgs(len(base), t)]
        if admissibility is None:
            jobs = [(lc.ambient, B_m, lc.A, E, k, limits) for E in candidates]
            keep = parallel_map(_default_job, jobs, workers)
        else:
            keep = [bool(admissibility(m, B_m, E)) for E in candidates]
        levels.append([E for E, ok in zip(candidates, keep) if ok])
    children: dict[tuple[int, int], list[int]] = {}
    for m in range(lc.depth):
        lower = {E.labels: i for i, E in enumerate(levels[m])}
        for j, F in enumerate(levels[m + 1]):
            parent = lower.get(restrict_relation(F, lc.chain[m]).labels)
            if parent is not None:
                children.setdefault((m, parent), []).append(j)
    if admissibility is None:
        cert = f"check_E_ramsey(k={'saturated' if k is None else k})"
    else:
        cert = getattr(admissibility, "certificate", "custom oracle")
    return KoenigTree(lc, t, levels, children, cert)


def find_branch(tree: KoenigTree) -> list[EquivRelation] | None:
    """First root-to-deepest-level path in depth-first, canonical child order."""
    depth = tree.chain.depth
    if not tree.levels or not tree.levels[0]:
        return None

    def dfs(m: int, i: int) -> list[int] | None:
        if m == depth:
            return [i]
        for j in tree.children.get((m, i), []):
            rest = dfs(m + 1, j)
            if rest is not None:
                return [i] + rest
        return None

    for i in range(len(tree.levels[0])):
        path = dfs(0, i)
        if path is not None:
            return [tree.levels[m][j] for m, j in enumerate(path)]
    return None


def verify_branch(lc: LevelChain, branch: Sequence[EquivRelation]) -> bool:
    """Independent coherence check: each relation restricts to its predecessor."""
    if len(branch) != len(lc.chain):
        return False
    for m in range(len(branch) - 1):
        if restrict_relation(branch[m + 1], lc.chain[m]) != branch[m]:
            return False
    return True


def branch_report(tree: KoenigTree, branch: Sequence[EquivRelation] | None) -> str:
    lines = [f"koenig tree depth={tree.chain.depth} t={tree.t}"]
    for m, nodes in enumerate(tree.levels):
        lines.append(f"level {m}: |B|={tree.chain.chain[m].size} nodes={len(nodes)}")
    if branch is None:
        lines.append("branch: none within depth")
    else:
        for m, E in enumerate(branch):
            lines.append(f"branch level {m}: {E.rgs()} [{tree.certificate}]")
    return "\n".join(lines)
