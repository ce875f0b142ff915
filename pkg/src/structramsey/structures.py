"""Finite relational structures and the primitives every other module uses.

A structure lives on the universe ``{0, ..., n-1}`` and carries one tuple set
per relation symbol of its signature.  Copies of a pattern inside an ambient
structure are *subsets* (not embeddings); the copy order is lexicographic on
the sorted subsets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from structramsey.errors import InputError


@dataclass(frozen=True)
class Signature:
    """Ordered sequence of ``(name, arity)`` pairs, purely relational."""

    relations: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        rels = tuple((str(name), int(arity)) for name, arity in self.relations)
        object.__setattr__(self, "relations", rels)
        names = [name for name, _ in rels]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate relation names in signature: {names}")
        for name, arity in rels:
            if not name:
                raise InputError("relation names must be non-empty")
            if arity < 1:
                raise InputError(f"relation {name!r} has arity {arity} < 1")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.relations)

    def arity(self, name: str) -> int:
        for rname, arity in self.relations:
            if rname == name:
                return arity
        raise InputError(f"unknown relation {name!r}")

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown relation {name!r}") from None

    def extend(self, extra: Iterable[tuple[str, int]]) -> "Signature":
        return Signature(self.relations + tuple(extra))

    def __len__(self) -> int:
        return len(self.relations)


def _normalize_tuples(name: str, arity: int, size: int, tuples) -> frozenset:
    out = set()
    for tup in tuples:
        tup = tuple(int(x) for x in tup)
        if len(tup) != arity:
            raise InputError(f"relation {name!r} expects {arity}-tuples, got {tup}")
        for x in tup:
            if not 0 <= x < size:
                raise InputError(f"element {x} of {name!r} tuple {tup} outside universe of size {size}")
        out.add(tup)
    return frozenset(out)


@dataclass(frozen=True)
class FiniteStructure:
    """A finite structure; ``relations[i]`` is the tuple set of ``signature.relations[i]``."""

    signature: Signature
    size: int
    relations: tuple[frozenset, ...] = ()

    def __post_init__(self):
        if self.size < 0:
            raise InputError(f"negative universe size {self.size}")
        rels = tuple(self.relations)
        if not rels and len(self.signature):
            rels = tuple(frozenset() for _ in self.signature.relations)
        if len(rels) != len(self.signature):
            raise InputError("relation count does not match signature")
        rels = tuple(
            _normalize_tuples(name, arity, self.size, tuples)
            for (name, arity), tuples in zip(self.signature.relations, rels)
        )
        object.__setattr__(self, "relations", rels)

    @classmethod
    def build(
        cls, signature: Signature, size: int, relations: Mapping[str, Iterable] | None = None
    ) -> "FiniteStructure":
        relations = dict(relations or {})
        unknown = set(relations) - set(signature.names)
        if unknown:
            raise InputError(f"relations {sorted(unknown)} not in signature")
        return cls(signature, size, tuple(relations.get(name, ()) for name in signature.names))

    @property
    def universe(self) -> range:
        return range(self.size)

    def rel(self, name: str) -> frozenset:
        return self.relations[self.signature.index(name)]

    def relation_map(self) -> dict[str, frozenset]:
        return dict(zip(self.signature.names, self.relations))

    def relabel(self, mapping: Sequence[int]) -> "FiniteStructure":
        """Image of the structure under the bijection ``x -> mapping[x]``."""
        if sorted(mapping) != list(range(self.size)):
            raise InputError("relabel needs a permutation of the universe")
        rels = tuple(frozenset(tuple(mapping[x] for x in t) for t in r) for r in self.relations)
        return FiniteStructure(self.signature, self.size, rels)

    def reduct(self, signature: Signature) -> "FiniteStructure":
        """Forget every relation not named in ``signature``."""
        for name, arity in signature.relations:
            if self.signature.arity(name) != arity:
                raise InputError(f"arity mismatch for {name!r} in reduct")
        return FiniteStructure(signature, self.size, tuple(self.rel(name) for name in signature.names))

    def __repr__(self) -> str:
        parts = ", ".join(f"{name}={sorted(r)}" for name, r in zip(self.signature.names, self.relations))
        return f"FiniteStructure(size={self.size}, {parts})"


@dataclass(frozen=True)
class Embedding:
    domain: FiniteStructure
    codomain: FiniteStructure
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        if not is_embedding(self.map, self.domain, self.codomain):
            raise InputError(f"map {self.map} is not an embedding")

    def __call__(self, x: int) -> int:
        return self.map[x]

    def image(self, subset: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(self.map[x] for x in subset))


@dataclass(frozen=True, eq=False)
class Copy:
    """An induced copy of a pattern; equality and order use the subset only."""

    subset: tuple[int, ...]
    pattern: tuple = field(default=(), repr=False)

    def __eq__(self, other):
        return isinstance(other, Copy) and self.subset == other.subset

    def __hash__(self):
        return hash(self.subset)

    def __lt__(self, other: "Copy"):
        return self.subset < other.subset


@dataclass(frozen=True)
class CopySet:
    ambient: FiniteStructure
    pattern: FiniteStructure
    copies: tuple[Copy, ...]

    def __len__(self) -> int:
        return len(self.copies)

    def __iter__(self) -> Iterator[Copy]:
        return iter(self.copies)

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {c.subset: i for i, c in enumerate(self.copies)}

    def index(self, subset: Iterable[int]) -> int:
        key = tuple(sorted(subset))
        try:
            return self._index[key]
        except KeyError:
            raise InputError(f"{key} is not a copy of the pattern") from None

    def __contains__(self, subset) -> bool:
        if isinstance(subset, Copy):
            subset = subset.subset
        return tuple(sorted(subset)) in self._index

    @property
    def subsets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c.subset for c in self.copies)

    def inside(self, subset: Iterable[int]) -> list[int]:
        """Indices of the copies contained in ``subset``."""
        s = set(subset)
        return [i for i, c in enumerate(self.copies) if s.issuperset(c.subset)]


def _check_same_signature(A: FiniteStructure, C: FiniteStructure):
    if A.signature != C.signature:
        raise InputError(f"signature mismatch: {A.signature.relations} vs {C.signature.relations}")


def induced_substructure(C: FiniteStructure, subset: Iterable[int]) -> FiniteStructure:
    """Substructure on ``subset``, re-indexed in ascending element order."""
    elems = sorted(set(subset))
    for x in elems:
        if not 0 <= x < C.size:
            raise InputError(f"element {x} outside universe of size {C.size}")
    return substructure_on(C, elems)


def substructure_on(C: FiniteStructure, sequence: Sequence[int]) -> FiniteStructure:
    """Substructure on ``sequence`` with position ``i`` standing for ``sequence[i]``."""
    pos = {x: i for i, x in enumerate(sequence)}
    if len(pos) != len(sequence):
        raise InputError("repeated element in substructure sequence")
    for x in pos:
        if not 0 <= x < C.size:
            raise InputError(f"element {x} outside universe of size {C.size}")
    rels = []
    for r in C.relations:
        rels.append(frozenset(tuple(pos[x] for x in t) for t in r if all(x in pos for x in t)))
    return FiniteStructure(C.signature, len(sequence), tuple(rels))


def is_embedding(f: Sequence[int], A: FiniteStructure, C: FiniteStructure) -> bool:
    """True iff ``f`` is injective and preserves and reflects every relation."""
    _check_same_signature(A, C)
    f = tuple(f)
    if len(f) != A.size:
        raise InputError(f"map has {len(f)} entries for a domain of size {A.size}")
    if any(not 0 <= y < C.size for y in f):
        raise InputError("map leaves the codomain universe")
    if len(set(f)) != len(f):
        return False
    image = set(f)
    inv = {y: x for x, y in enumerate(f)}
    for ra, rc in zip(A.relations, C.relations):
        for t in ra:
            if tuple(f[x] for x in t) not in rc:
                return False
        # reflection: every codomain tuple inside the image must come from a domain tuple
        for t in rc:
            if all(y in image for y in t) and tuple(inv[y] for y in t) not in ra:
                return False
    return True


def _position_tuples(p: int, arity: int) -> list[tuple[int, ...]]:
    """All ``arity``-tuples over ``0..p`` whose maximum is ``p``, in lex order."""
    return [t for t in itertools.product(range(p + 1), repeat=arity) if max(t) == p]


def _extension_checks(A: FiniteStructure) -> list[list[tuple[int, tuple[int, ...], bool]]]:
    checks = []
    for i in range(A.size):
        step = []
        for ri, ((_, arity), ra) in enumerate(zip(A.signature.relations, A.relations)):
            for pt in _position_tuples(i, arity):
                step.append((ri, pt, pt in ra))
        checks.append(step)
    return checks


def iter_embeddings(
    A: FiniteStructure,
    C: FiniteStructure,
    candidates: Sequence[Sequence[int]] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield every embedding ``A -> C`` as a tuple, in lexicographic order.

    Backtracks over the domain in ascending order, rejecting a partial map as
    soon as some tuple over already-mapped elements is not preserved and
    reflected.  ``candidates[i]`` optionally restricts the image of ``i``.
    """
    _check_same_signature(A, C)
    m = A.size
    if m > C.size:
        return
    checks = _extension_checks(A)
    rc = C.relations
    assigned: list[int] = []
    used = [False] * C.size
    pools = [list(candidates[i]) if candidates is not None else list(range(C.size)) for i in range(m)]

    def feasible(i: int) -> bool:
        for ri, pt, in_a in checks[i]:
            if (tuple(assigned[x] for x in pt) in rc[ri]) != in_a:
                return False
        return True

    def rec(i: int):
        if i == m:
            yield tuple(assigned)
            return
        for w in pools[i]:
            if used[w]:
                continue
            assigned.append(w)
            if feasible(i):
                used[w] = True
                yield from rec(i + 1)
                used[w] = False
            assigned.pop()

    yield from rec(0)


def embeds(A: FiniteStructure, C: FiniteStructure) -> bool:
    return next(iter_embeddings(A, C), None) is not None


@lru_cache(maxsize=4096)
def enumerate_copies(A: FiniteStructure, C: FiniteStructure) -> CopySet:
    """All copies of ``A`` in ``C``, sorted lexicographically by subset."""
    _check_same_signature(A, C)
    subsets = {tuple(sorted(f)) for f in iter_embeddings(A, C)}
    key = canonical_form(A)
    copies = tuple(Copy(s, key) for s in sorted(subsets))
    return CopySet(C, A, copies)


def _invariants(A: FiniteStructure) -> list[tuple]:
    """Isomorphism-invariant element labels (degree profile plus one refinement round)."""
    n = A.size
    base: list[list[int]] = [[] for _ in range(n)]
    for (_, arity), r in zip(A.signature.relations, A.relations):
        counts = [[0] * (arity + 1) for _ in range(n)]
        for t in r:
            for j, x in enumerate(t):
                counts[x][j] += 1
            if len(set(t)) == 1:
                counts[t[0]][arity] += 1
        for x in range(n):
            base[x].extend(counts[x])
    first = [tuple(b) for b in base]
    refined: list[list] = [[] for _ in range(n)]
    for ri, r in enumerate(A.relations):
        for t in r:
            profile = tuple(first[y] for y in t)
            for j, x in enumerate(t):
                refined[x].append((ri, j, profile))
    return [(first[x], tuple(sorted(refined[x]))) for x in range(n)]


def _swap_is_automorphism(A: FiniteStructure, u: int, v: int) -> bool:
    def sw(x):
        return v if x == u else u if x == v else x

    for r in A.relations:
        for t in r:
            if (u in t or v in t) and tuple(sw(x) for x in t) not in r:
                return False
    return True


def _twin_classes(A: FiniteStructure, inv: list[tuple]) -> list[int]:
    """rep[x] = least element y with the transposition (x y) an automorphism."""
    rep = list(range(A.size))
    reps: list[int] = []
    for x in range(A.size):
        for y in reps:
            if inv[x] == inv[y] and _swap_is_automorphism(A, x, y):
                rep[x] = y
                break
        else:
            reps.append(x)
    return rep


@lru_cache(maxsize=65536)
def canonical_labeling(A: FiniteStructure) -> tuple[bytes, tuple[int, ...]]:
    """Return ``(code, order)`` with ``order[i]`` the element placed at position ``i``.

    ``code`` is the lexicographically least adjacency code over all orderings
    that fill invariant cells in rank order.  Position ``p`` contributes one
    block of bits: for each relation (signature order) and each position tuple
    with maximum ``p`` (lex order), whether the tuple holds.  Only candidates
    yielding the least block at a node are expanded, interchangeable
    elements (transpositions that are automorphisms) are expanded once, and
    prefixes worse than the best leaf so far are cut.
    """
    n = A.size
    if n == 0:
        return b"", ()
    inv = _invariants(A)
    ranks = {v: i for i, v in enumerate(sorted(set(inv)))}
    cell_of = [ranks[inv[x]] for x in range(n)]
    twin = _twin_classes(A, inv)
    arities = [a for _, a in A.signature.relations]
    pos_lists = [[_position_tuples(p, a) for a in arities] for p in range(n)]
    rels = A.relations
    best_blocks: list[bytes] | None = None
    best_order: list[int] | None = None
    order: list[int] = []
    blocks: list[bytes] = []
    used = [False] * n

    def block(p: int, v: int) -> bytes:
        elems = order + [v]
        bits = bytearray()
        for ri, ptuples in enumerate(pos_lists[p]):
            r = rels[ri]
            for pt in ptuples:
                bits.append(1 if tuple(elems[i] for i in pt) in r else 0)
        return bytes(bits)

    def rec():
        nonlocal best_blocks, best_order
        p = len(order)
        if p == n:
            if best_blocks is None or blocks < best_blocks:
                best_blocks = list(blocks)
                best_order = list(order)
            return
        cell = min(cell_of[x] for x in range(n) if not used[x])
        seen_twins = set()
        cands = []
        for x in range(n):
            if used[x] or cell_of[x] != cell:
                continue
            # a twin of x that's still unused gives an identical subtree
            if twin[x] in seen_twins:
                continue
            seen_twins.add(twin[x])
            cands.append(x)
        scored = [(block(p, v), v) for v in cands]
        low = min(b for b, _ in scored)
        for b, v in scored:
            if b != low:
                continue
            blocks.append(b)
            if best_blocks is not None and blocks > best_blocks[: p + 1]:
                blocks.pop()
                return
            order.append(v)
            used[v] = True
            rec()
            used[v] = False
            order.pop()
            blocks.pop()

    rec()
    assert best_blocks is not None and best_order is not None
    return b"".join(best_blocks), tuple(best_order)


def canonical_form(A: FiniteStructure) -> tuple:
    """Isomorphism-invariant key; keys are equal iff structures are isomorphic.

    Keys compare by signature, then size, then adjacency code, which gives a
    deterministic total order on isomorphism types.  The empty structure
    gets the least key of its signature.
    """
    code, _ = canonical_labeling(A)
    return (A.signature.relations, A.size, code)


def canonical_structure(A: FiniteStructure) -> FiniteStructure:
    """The representative of A's isomorphism type (the canonical relabeling)."""
    _, order = canonical_labeling(A)
    mapping = [0] * A.size
    for pos, x in enumerate(order):
        mapping[x] = pos
    return A.relabel(mapping)


def are_isomorphic(A: FiniteStructure, B: FiniteStructure) -> bool:
    return canonical_form(A) == canonical_form(B)


@lru_cache(maxsize=4096)
def automorphisms(A: FiniteStructure, limit: int | None = None) -> tuple[tuple[int, ...], ...]:
    """The full automorphism group as a sorted tuple of permutations.

    With ``limit`` set, stops after ``limit + 1`` elements so callers can
    detect oversized groups cheaply.
    """
    inv = _invariants(A)
    cands = [[y for y in range(A.size) if inv[y] == inv[x]] for x in range(A.size)]
    out = []
    for f in iter_embeddings(A, A, candidates=cands):
        out.append(f)
        if limit is not None and len(out) > limit:
            break
    return tuple(out)


def isomorphisms(A: FiniteStructure, B: FiniteStructure) -> Iterator[tuple[int, ...]]:
    if A.size != B.size:
        return iter(())
    return iter_embeddings(A, B)
