"""Class-predicate and order expansions of finite structures, and fragment checks.

An expansion adds, for each declared pattern ``A`` with ``t`` classes, the
``|A|``-ary predicates ``P_{A,0} .. P_{A,t-1}`` and optionally a linear order.
A predicate marks a copy of ``A`` by holding on every enumeration of the
copy's subset, so marking does not depend on how the copy is listed.

Every verdict here is relative to the finite fragments passed in.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from structramsey.arrows import ArrowStatement, check_arrow
from structramsey.config import Limits, current_limits
from structramsey.errors import InputError, NoHostError
from structramsey.kriz import EquivRelation
from structramsey.structures import (
    FiniteStructure,
    Signature,
    automorphisms,
    canonical_form,
    canonical_structure,
    embeds,
    enumerate_copies,
    induced_substructure,
    isomorphisms,
    iter_embeddings,
    substructure_on,
)


@dataclass(frozen=True)
class ClassPredicate:
    name: str
    pattern: FiniteStructure
    index: int


@dataclass(frozen=True)
class ExpansionSignature:
    base: Signature
    class_predicates: tuple[ClassPredicate, ...] = ()
    order_symbol: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "class_predicates", tuple(self.class_predicates))
        names = list(self.base.names)
        for p in self.class_predicates:
            if p.pattern.signature != self.base:
                raise InputError(f"pattern of {p.name!r} is not over the base signature")
            if p.pattern.size < 1:
                raise InputError("class predicates need a non-empty pattern")
            names.append(p.name)
        if self.order_symbol is not None:
            names.append(self.order_symbol)
        if len(set(names)) != len(names):
            raise InputError(f"expansion symbols clash with base symbols: {names}")

    @classmethod
    def for_patterns(
        cls,
        base: Signature,
        patterns: Sequence[tuple[FiniteStructure, int]],
        order_symbol: str | None = None,
    ) -> "ExpansionSignature":
        """Predicates named ``P{j}_{i}`` for pattern ``j`` and class ``i``."""
        preds = []
        for j, (pattern, count) in enumerate(patterns):
            canon = canonical_structure(pattern)
            preds.extend(ClassPredicate(f"P{j}_{i}", canon, i) for i in range(count))
        return cls(base, tuple(preds), order_symbol)

    @property
    def full(self) -> Signature:
        extra = [(p.name, p.pattern.size) for p in self.class_predicates]
        if self.order_symbol is not None:
            extra.append((self.order_symbol, 2))
        return self.base.extend(extra)

    def patterns(self) -> list[tuple[FiniteStructure, int]]:
        """Declared ``(pattern, class count)`` pairs in declaration order."""
        out: list[list] = []
        for p in self.class_predicates:
            if out and out[-1][0] == p.pattern:
                out[-1][1] += 1
            else:
                out.append([p.pattern, 1])
        return [(pat, cnt) for pat, cnt in out]

    def predicates_for(self, pattern: FiniteStructure) -> list[ClassPredicate]:
        key = canonical_form(pattern)
        return [p for p in self.class_predicates if canonical_form(p.pattern) == key]


def _order_tuples(order: Sequence[int]) -> frozenset:
    return frozenset((order[i], order[j]) for i in range(len(order)) for j in range(i + 1, len(order)))


@dataclass(frozen=True)
class ExpandedStructure:
    signature: ExpansionSignature
    reduct: FiniteStructure
    predicates: tuple[frozenset, ...]
    order: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "predicates", tuple(frozenset(map(tuple, p)) for p in self.predicates))
        if self.reduct.signature != self.signature.base:
            raise InputError("reduct is not over the base signature")
        if len(self.predicates) != len(self.signature.class_predicates):
            raise InputError("one extent per class predicate is required")
        if (self.order is None) != (self.signature.order_symbol is None):
            raise InputError("order presence must match the order symbol")
        if self.order is not None:
            object.__setattr__(self, "order", tuple(self.order))
            if sorted(self.order) != list(range(self.reduct.size)):
                raise InputError("order must list every element exactly once")
        self.check_partition_discipline()

    @property
    def structure(self) -> FiniteStructure:
        rels = list(self.reduct.relations) + list(self.predicates)
        if self.order is not None:
            rels.append(_order_tuples(self.order))
        return FiniteStructure(self.signature.full, self.reduct.size, tuple(rels))

    @classmethod
    def from_structure(cls, S: FiniteStructure, signature: ExpansionSignature) -> "ExpandedStructure":
        if S.signature != signature.full:
            raise InputError("structure is not over the expanded signature")
        preds = tuple(S.rel(p.name) for p in signature.class_predicates)
        order = None
        if signature.order_symbol is not None:
            lt = S.rel(signature.order_symbol)
            below = {x: sum(1 for (a, b) in lt if b == x) for x in range(S.size)}
            order = tuple(sorted(range(S.size), key=lambda x: below[x]))
            if _order_tuples(order) != lt:
                raise InputError("order symbol is not a strict linear order")
        return cls(signature, S.reduct(signature.base), preds, order)

    def check_partition_discipline(self):
        """Each copy of each declared pattern is marked by exactly one class predicate."""
        for pattern, _count in self.signature.patterns():
            preds = [
                (i, self.predicates[i])
                for i, p in enumerate(self.signature.class_predicates)
                if p.pattern == pattern
            ]
            copies = enumerate_copies(pattern, self.reduct)
            marked: dict[tuple, int] = {}
            for i, ext in preds:
                subsets = {tuple(sorted(tup)) for tup in ext}
                for sub in subsets:
                    if sub not in copies:
                        raise InputError(f"predicate marks {sub}, which is not a copy of its pattern")
                    perms = set(itertools.permutations(sub))
                    if not perms <= ext:
                        raise InputError(f"predicate holds on only some enumerations of {sub}")
                    if sub in marked:
                        raise InputError(f"copy {sub} carries two class predicates")
                    marked[sub] = i
                for tup in ext:
                    if len(set(tup)) != len(tup):
                        raise InputError(f"predicate tuple {tup} repeats an element")
            missing = [c.subset for c in copies if c.subset not in marked]
            if missing:
                raise InputError(f"copies {missing} carry no class predicate")


def expand_by_partitions(
    F: FiniteStructure,
    parts: Sequence[tuple[FiniteStructure, EquivRelation, int | None]],
    order: Sequence[int] | str | None = None,
    order_symbol: str = "order",
) -> ExpandedStructure:
    """Mark block ``i`` of each relation by ``P{j}_{i}``; ``order`` may be ``"lex"``."""
    patterns = []
    extents: list[frozenset] = []
    for A, E, t in parts:
        if E.base.ambient != F or canonical_form(E.base.pattern) != canonical_form(A):
            raise InputError("relation is not over binom(F, A)")
        count = E.num_blocks if t is None else t
        if E.num_blocks > count:
            raise InputError(f"relation has {E.num_blocks} blocks, more than the declared {count}")
        patterns.append((A, count))
        for i in range(count):
            ext = set()
            for blk_i, blk in enumerate(E.block_subsets):
                if blk_i == i:
                    for sub in blk:
                        ext.update(itertools.permutations(sub))
            extents.append(frozenset(ext))
    if isinstance(order, str):
        if order != "lex":
            raise InputError(f"unknown order keyword {order!r}")
        order = tuple(range(F.size))
    esig = ExpansionSignature.for_patterns(F.signature, patterns, order_symbol if order is not None else None)
    return ExpandedStructure(esig, F, tuple(extents), None if order is None else tuple(order))


def expand_by_partition(
    F: FiniteStructure,
    A: FiniteStructure,
    E: EquivRelation,
    order: Sequence[int] | str | None = None,
    t: int | None = None,
    order_symbol: str = "order",
) -> ExpandedStructure:
    return expand_by_partitions(F, [(A, E, t)], order=order, order_symbol=order_symbol)


def structure_sort_key(S: FiniteStructure) -> tuple:
    return (S.size, tuple(tuple(sorted(r)) for r in S.relations))


@dataclass(frozen=True)
class ClassFragment:
    """Finite set of canonical structures, sorted by canonical key."""

    signature: Signature | ExpansionSignature
    members: tuple[FiniteStructure, ...]

    def __post_init__(self):
        full = self.full_signature
        for m in self.members:
            if m.signature != full:
                raise InputError("fragment member is not over the fragment signature")

    @classmethod
    def from_structures(cls, signature, structures) -> "ClassFragment":
        canon = {}
        for S in structures:
            key = canonical_form(S)
            if key not in canon:
                canon[key] = canonical_structure(S)
        return cls(signature, tuple(canon[key] for key in sorted(canon)))

    @classmethod
    def age(cls, S: FiniteStructure | ExpandedStructure, signature=None) -> "ClassFragment":
        """All induced substructures of ``S`` up to isomorphism."""
        if isinstance(S, ExpandedStructure):
            signature = signature or S.signature
            S = S.structure
        signature = signature or S.signature
        subs = (
            induced_substructure(S, sub)
            for r in range(S.size + 1)
            for sub in itertools.combinations(range(S.size), r)
        )
        return cls.from_structures(signature, subs)

    @property
    def full_signature(self) -> Signature:
        return self.signature.full if isinstance(self.signature, ExpansionSignature) else self.signature

    @property
    def base_signature(self) -> Signature:
        return self.signature.base if isinstance(self.signature, ExpansionSignature) else self.signature

    @property
    def keys(self) -> tuple:
        return tuple(canonical_form(m) for m in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, S: FiniteStructure) -> bool:
        return self.index_of(S) is not None

    def index_of(self, S: FiniteStructure) -> int | None:
        key = canonical_form(S)
        for i, k in enumerate(self.keys):
            if k == key:
                return i
        return None

    def reduct_fragment(self) -> "ClassFragment":
        base = self.base_signature
        return ClassFragment.from_structures(base, (m.reduct(base) for m in self.members))


def _check_base(A: FiniteStructure, K_star: ClassFragment):
    if A.signature != K_star.base_signature:
        raise InputError("structure is not over the base signature of the expanded fragment")


def enumerate_expansions(A: FiniteStructure, K_star: ClassFragment) -> tuple[FiniteStructure, ...]:
    """Members of ``K_star`` whose reduct is isomorphic to ``A``."""
    _check_base(A, K_star)
    key = canonical_form(A)
    base = K_star.base_signature
    return tuple(M for M in K_star.members if canonical_form(M.reduct(base)) == key)


@dataclass(frozen=True)
class PrecompactnessReport:
    rows: tuple[tuple[int, int], ...]
    bound: int | None
    violations: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def report(self) -> str:
        lines = ["member  size  expansions"]
        lines += [f"{i:>6}  {size:>4}  {count:>10}" for i, (size, count) in enumerate(self.rows)]
        lines.append(f"bound: {self.bound if self.bound is not None else 'none'}; violations: {list(self.violations)}")
        return "\n".join(lines)


def check_precompactness(K: ClassFragment, K_star: ClassFragment, bound: int | None = None) -> PrecompactnessReport:
    rows = []
    violations = []
    for i, A in enumerate(K.members):
        count = len(enumerate_expansions(A, K_star))
        rows.append((A.size, count))
        if bound is not None and count > bound:
            violations.append(i)
    return PrecompactnessReport(tuple(rows), bound, tuple(violations))


def expansions_inside(B_star: FiniteStructure, A: FiniteStructure, base: Signature) -> list[tuple]:
    """Canonical keys of the pairwise non-isomorphic expansions of ``A`` induced in ``B_star``."""
    keys = set()
    for c in enumerate_copies(A, B_star.reduct(base)):
        keys.add(canonical_form(induced_substructure(B_star, c.subset)))
    return sorted(keys)


@dataclass(frozen=True)
class LowerBoundReport:
    holds: bool
    t: int
    evidence: tuple[tuple[int, int], ...]  # (index of B* in K_star, distinct A-expansions inside)

    def report(self) -> str:
        lines = [f"lower bound t={self.t}: {'holds' if self.holds else 'fails'}"]
        lines += [f"  B* member #{i}: {n} expansions of A" for i, n in self.evidence]
        return "\n".join(lines)


def check_lower_bound(A: FiniteStructure, B: FiniteStructure, K_star: ClassFragment, t: int) -> LowerBoundReport:
    """Does every expansion of ``B`` contain ``t`` non-isomorphic expansions of ``A``?"""
    _check_base(A, K_star)
    exps = enumerate_expansions(B, K_star)
    if not exps:
        raise NoHostError("B has no expansion in the expanded fragment")
    index = {k: i for i, k in enumerate(K_star.keys)}
    evidence = []
    for Bs in exps:
        evidence.append((index[canonical_form(Bs)], len(expansions_inside(Bs, A, K_star.base_signature))))
    return LowerBoundReport(all(n >= t for _, n in evidence), t, tuple(evidence))


@dataclass(frozen=True)
class ExpansionPropertyReport:
    rows: tuple[tuple[int, int | None], ...]  # (member of K, witness member of K or None)

    @property
    def all_witnessed(self) -> bool:
        return all(w is not None for _, w in self.rows)

    def witness(self, i: int) -> int | None:
        return dict(self.rows)[i]

    def report(self) -> str:
        lines = ["A  witness B"]
        for a, w in self.rows:
            lines.append(f"{a}  {w if w is not None else 'no witness within fragment'}")
        return "\n".join(lines)


def check_expansion_property(K: ClassFragment, K_star: ClassFragment) -> ExpansionPropertyReport:
    """Least ``B`` of ``K`` into each of whose expansions every expansion of ``A`` embeds.

    Candidates ``B`` without any expansion in ``K_star`` are skipped rather
    than accepted vacuously.
    """
    exps = [enumerate_expansions(M, K_star) for M in K.members]
    rows = []
    for a, exp_a in enumerate(exps):
        witness = None
        for b, exp_b in enumerate(exps):
            if not exp_b or K.members[b].size < K.members[a].size:
                continue
            if all(embeds(x, y) for x in exp_a for y in exp_b):
                witness = b
                break
        rows.append((a, witness))
    return ExpansionPropertyReport(tuple(rows))


def _expansions_on_universe(B: FiniteStructure, K_star: ClassFragment) -> list[FiniteStructure]:
    """Every expansion of ``B`` in ``K_star`` carried by ``B``'s own universe."""
    base = K_star.base_signature
    out = set()
    for M in enumerate_expansions(B, K_star):
        for phi in isomorphisms(M.reduct(base), B):
            out.add(M.relabel(phi))
    return sorted(out, key=structure_sort_key)


@dataclass(frozen=True)
class ReasonabilityReport:
    holds: bool
    counterexample: tuple | None = None  # (A index, B index, embedding, A* on A's universe)

    def report(self) -> str:
        if self.holds:
            return "reasonability: holds"
        a, b, pi, a_star = self.counterexample
        return f"reasonability: fails\n  pi: member #{a} -> member #{b} via {list(pi)}\n  A*: {a_star!r}"


def check_reasonability(K: ClassFragment, K_star: ClassFragment) -> ReasonabilityReport:
    """Every expansion of an embedding's domain lifts to some expansion of its codomain.

    Embeddings ``A -> B`` are taken up to post-composition with ``Aut(B)``.
    """
    on_universe = [_expansions_on_universe(M, K_star) for M in K.members]
    for a, A in enumerate(K.members):
        for b, B in enumerate(K.members):
            if A.size > B.size:
                continue
            group = automorphisms(B)
            reps = sorted({min(tuple(g[x] for x in f) for g in group) for f in iter_embeddings(A, B)})
            for pi in reps:
                pulled = {substructure_on(Bs, pi) for Bs in on_universe[b]}
                for A_star in on_universe[a]:
                    if A_star not in pulled:
                        return ReasonabilityReport(False, (a, b, pi, A_star))
    return ReasonabilityReport(True)


@dataclass(frozen=True)
class RamseyRow:
    a: int
    b: int
    host: int | None

    @property
    def verdict(self) -> str:
        return "holds" if self.host is not None else "undecided within fragment"


@dataclass(frozen=True)
class RamseyPropertyReport:
    k: int
    rows: tuple[RamseyRow, ...]

    def row(self, a: int, b: int) -> RamseyRow:
        for r in self.rows:
            if (r.a, r.b) == (a, b):
                return r
        raise KeyError((a, b))

    def report(self) -> str:
        lines = [f"Ramsey property at t=1, k={self.k}", "A*  B*  host  verdict"]
        for r in self.rows:
            lines.append(f"{r.a}  {r.b}  {r.host if r.host is not None else '-'}  {r.verdict}")
        return "\n".join(lines)


def check_ramsey_property(
    K_star: ClassFragment,
    host_limit: int,
    k: int = 2,
    pairs: Sequence[tuple[int, int]] | None = None,
    pattern_limit: int | None = None,
    workers: int = 1,
    limits: Limits | None = None,
) -> RamseyPropertyReport:
    """For each pattern pair, the least host (by member order) with ``C -> (B*)^{A*}_{k,1}``.

    Default pairs are all ``(A*, B*)`` with ``A*`` non-empty, embedding into
    ``B*``, ``|A*| < |B*| <= pattern_limit`` (default ``host_limit``).
    """
    limits = current_limits(limits)
    members = K_star.members
    if pairs is None:
        top = host_limit if pattern_limit is None else pattern_limit
        pairs = [
            (a, b)
            for a, A in enumerate(members)
            for b, B in enumerate(members)
            if 0 < A.size < B.size <= top and embeds(A, B)
        ]
    rows = []
    for a, b in pairs:
        A, B = members[a], members[b]
        host = None
        for c, C in enumerate(members):
            if C.size > host_limit or C.size < B.size or not embeds(B, C):
                continue
            if check_arrow(ArrowStatement(C, B, A, k, 1), workers=workers, limits=limits).holds:
                host = c
                break
        rows.append(RamseyRow(a, b, host))
    return RamseyPropertyReport(k, tuple(rows))


@dataclass(frozen=True)
class RigidityReport:
    holds: bool
    first_non_rigid: int | None = None

    def report(self) -> str:
        if self.holds:
            return "rigidity: every member is rigid"
        return f"rigidity: member #{self.first_non_rigid} has a non-trivial automorphism"


def check_rigidity(K_star: ClassFragment) -> RigidityReport:
    for i, M in enumerate(K_star.members):
        if len(automorphisms(M, limit=1)) > 1:
            return RigidityReport(False, i)
    return RigidityReport(True)
