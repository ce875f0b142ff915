"""Built-in structure families and fragment validity checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from structramsey.errors import InputError
from structramsey.expansions import ClassFragment, ExpansionSignature
from structramsey.structures import (
    FiniteStructure,
    Signature,
    canonical_form,
    canonical_structure,
    embeds,
    induced_substructure,
)

CHAIN_SIG = Signature((("lt", 2),))
PURE_SIG = Signature(())
GRAPH_SIG = Signature((("E", 2),))
EQUIV_SIG = Signature((("eq", 2),))

GRAPH_CAP = 7
ORDERED_CAP = 6
FAMILIES = ("chains", "pure_sets", "graphs", "two_class_equivalence")


def chain(n: int) -> FiniteStructure:
    return FiniteStructure.build(CHAIN_SIG, n, {"lt": [(i, j) for i in range(n) for j in range(i + 1, n)]})


def pure_set(n: int) -> FiniteStructure:
    return FiniteStructure(PURE_SIG, n)


def graph(n: int, edges) -> FiniteStructure:
    tuples = set()
    for u, v in edges:
        if u == v:
            raise InputError("graphs are loopless")
        tuples.update({(u, v), (v, u)})
    return FiniteStructure.build(GRAPH_SIG, n, {"E": tuples})


def complete_graph(n: int) -> FiniteStructure:
    return graph(n, itertools.combinations(range(n), 2))


def path_graph(n: int) -> FiniteStructure:
    return graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> FiniteStructure:
    return graph(n, [(i, (i + 1) % n) for i in range(n)] if n >= 3 else [])


def equivalence(classes) -> FiniteStructure:
    """Equivalence relation (reflexive pairs included) with the given classes."""
    classes = [list(c) for c in classes]
    n = sum(len(c) for c in classes)
    if sorted(x for c in classes for x in c) != list(range(n)):
        raise InputError("classes must partition range(n)")
    return FiniteStructure.build(EQUIV_SIG, n, {"eq": [(x, y) for c in classes for x in c for y in c]})


def two_class(n0: int, n1: int, interleaved: bool = False) -> FiniteStructure:
    """Two classes of sizes ``n0`` and ``n1``.

    Blocks ``[0, n0)`` and ``[n0, n0 + n1)`` by default; with ``interleaved``
    the classes alternate (needs ``|n0 - n1| <= 1``), so initial segments
    are balanced.
    """
    if interleaved:
        if abs(n0 - n1) > 1 or n1 > n0:
            raise InputError("interleaving needs n0 == n1 or n0 == n1 + 1")
        n = n0 + n1
        return equivalence([[x for x in range(n) if x % 2 == 0], [x for x in range(n) if x % 2 == 1]])
    return equivalence([list(range(n0)), list(range(n0, n0 + n1))])


@dataclass(frozen=True)
class FamilySpec:
    family: str
    sizes: tuple[int, ...] = ()
    ordered: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        expected = 2 if self.family == "two_class_equivalence" else 1
        if len(self.sizes) != expected:
            raise InputError(f"{self.family} takes {expected} size parameter(s)")
        if any(s < 0 for s in self.sizes):
            raise InputError("sizes must be non-negative")
        if self.family == "graphs" and self.sizes[0] > GRAPH_CAP:
            raise InputError(f"graphs are capped at {GRAPH_CAP} vertices")
        if self.ordered and max(self.sizes, default=0) > ORDERED_CAP and self.family != "two_class_equivalence":
            raise InputError(f"ordered variants are capped at {ORDERED_CAP} elements")
        if self.ordered and self.family == "two_class_equivalence" and sum(self.sizes) > ORDERED_CAP:
            raise InputError(f"ordered variants are capped at {ORDERED_CAP} elements")

    @property
    def name(self) -> str:
        core = f"{self.family}" + "".join(f"_{s}" for s in self.sizes)
        return f"ordered_{core}" if self.ordered else core


def ordered_variant_of(spec: FamilySpec) -> FamilySpec:
    return FamilySpec(spec.family, spec.sizes, ordered=True)


def _graphs_up_to(n: int) -> list[FiniteStructure]:
    """Graphs on at most ``n`` vertices up to isomorphism, by one-vertex augmentation."""
    levels = [[canonical_structure(graph(0, []))]]
    for size in range(1, n + 1):
        seen = {}
        for G in levels[-1]:
            old = {tuple(sorted(e)) for e in G.rel("E")}
            for r in range(size):
                for nbrs in itertools.combinations(range(size - 1), r):
                    H = graph(size, old | {(v, size - 1) for v in nbrs})
                    key = canonical_form(H)
                    if key not in seen:
                        seen[key] = canonical_structure(H)
        levels.append([seen[k] for k in sorted(seen)])
    return [G for level in levels for G in level]


def _base_members(spec: FamilySpec) -> tuple[Signature, list[FiniteStructure]]:
    if spec.family == "chains":
        return CHAIN_SIG, [chain(i) for i in range(spec.sizes[0] + 1)]
    if spec.family == "pure_sets":
        return PURE_SIG, [pure_set(i) for i in range(spec.sizes[0] + 1)]
    if spec.family == "graphs":
        return GRAPH_SIG, _graphs_up_to(spec.sizes[0])
    n0, n1 = spec.sizes
    members = [two_class(a, b) for a in range(n0 + 1) for b in range(n1 + 1)]
    return EQUIV_SIG, members


def _with_all_orders(S: FiniteStructure, esig: ExpansionSignature):
    for perm in itertools.permutations(range(S.size)):
        lt = [(perm[i], perm[j]) for i in range(S.size) for j in range(i + 1, S.size)]
        yield FiniteStructure(esig.full, S.size, S.relations + (frozenset(lt),))


def generate_fragment(spec: FamilySpec) -> ClassFragment:
    """All members of the family up to its size caps, canonical and substructure-closed."""
    sig, members = _base_members(spec)
    if not spec.ordered:
        return ClassFragment.from_structures(sig, members)
    esig = ExpansionSignature(sig, (), "order")
    expanded = (X for S in members for X in _with_all_orders(S, esig))
    return ClassFragment.from_structures(esig, expanded)


@dataclass
class FragmentValidation:
    hereditary: bool
    jep_within_fragment: bool
    violations: list[str] = field(default_factory=list)

    def report(self) -> str:
        lines = [
            f"hereditary: {self.hereditary}",
            f"jep_within_fragment: {'witnessed' if self.jep_within_fragment else 'not witnessed'}",
        ]
        lines += [f"  {v}" for v in self.violations]
        return "\n".join(lines)


def validate_fragment(K: ClassFragment) -> FragmentValidation:
    keys = set(K.keys)
    violations = []
    hereditary = True
    for i, M in enumerate(K.members):
        for r in range(M.size):
            missing = next(
                (
                    sub
                    for sub in itertools.combinations(range(M.size), r)
                    if canonical_form(induced_substructure(M, sub)) not in keys
                ),
                None,
            )
            if missing is not None:
                hereditary = False
                violations.append(f"member #{i}: substructure on {list(missing)} is not a member")
                break
    jep = True
    members = K.members
    for i in range(len(members)):
        for j in range(i, len(members)):
            X, Y = members[i], members[j]
            need = max(X.size, Y.size)
            if not any(Z.size >= need and embeds(X, Z) and embeds(Y, Z) for Z in members):
                jep = False
                violations.append(f"members #{i} and #{j}: joint embedding not witnessed")
    return FragmentValidation(hereditary, jep, violations)
