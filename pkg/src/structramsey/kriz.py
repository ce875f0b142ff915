"""E-A-Ramsey checks and the product-coloring reduction from t-Ramsey to E-Ramsey.

Everything is relative to an explicit finite ambient structure ``C``: "B is
E-A-Ramsey" means that for every coloring of ``binom(C, A)`` some embedding
``b: B -> C`` makes every E-class monochromatic after transport along ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from structramsey.arrows import Coloring, ambient_symmetries, colors_on_copy
from structramsey.config import Limits, current_limits
from structramsey.errors import InputError, NoHostError, ResourceGuardError
from structramsey.partitions import blocks_of, is_rgs, iter_rgs, normalize, rgs_to_string
from structramsey.search import find_defeating, is_defeating, make_problem, parallel_map
from structramsey.structures import (
    CopySet,
    Embedding,
    FiniteStructure,
    are_isomorphic,
    enumerate_copies,
    iter_embeddings,
)


@dataclass(frozen=True)
class EquivRelation:
    """A partition of a copy set, stored as a restricted-growth string."""

    base: CopySet
    labels: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) != len(self.base):
            raise InputError(f"relation has {len(labels)} labels for {len(self.base)} copies")
        if not is_rgs(labels):
            raise InputError(f"labels {labels} are not a restricted-growth string")

    @classmethod
    def from_labels(cls, base: CopySet, labels: Sequence[int]) -> "EquivRelation":
        return cls(base, normalize(labels))

    @classmethod
    def from_blocks(cls, base: CopySet, blocks: Sequence[Sequence]) -> "EquivRelation":
        """Blocks given either as copy indices or as copy subsets."""
        labels = [-1] * len(base)
        for b, block in enumerate(blocks):
            for item in block:
                i = item if isinstance(item, int) else base.index(item)
                if labels[i] != -1:
                    raise InputError("blocks overlap")
                labels[i] = b
        if -1 in labels:
            raise InputError("blocks do not cover the copy set")
        return cls.from_labels(base, labels)

    @classmethod
    def full(cls, base: CopySet) -> "EquivRelation":
        return cls(base, tuple(0 for _ in base))

    @classmethod
    def discrete(cls, base: CopySet) -> "EquivRelation":
        return cls(base, tuple(range(len(base))))

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return blocks_of(self.labels)

    @property
    def block_subsets(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        subs = self.base.subsets
        return tuple(tuple(subs[i] for i in blk) for blk in self.blocks)

    @property
    def num_blocks(self) -> int:
        return len(set(self.labels))

    def related(self, i: int, j: int) -> bool:
        return self.labels[i] == self.labels[j]

    def rgs(self) -> str:
        return rgs_to_string(self.labels)

    def to_json(self) -> dict:
        return {"copies": [list(s) for s in self.base.subsets], "rgs": self.rgs()}


@dataclass(frozen=True)
class EVerdict:
    relation: EquivRelation
    k: int
    holds: bool
    counterexample: Coloring | None = None

    def report(self) -> str:
        lines = [f"E-A-Ramsey relation {self.relation.rgs()} k={self.k}: {'holds' if self.holds else 'fails'}"]
        if self.counterexample is not None:
            lines.append(f"defeating coloring: {rgs_to_string(self.counterexample.assignment)}")
        return "\n".join(lines)


def _check_relation(B: FiniteStructure, A: FiniteStructure, E: EquivRelation):
    if E.base.ambient != B or not are_isomorphic(E.base.pattern, A):
        raise InputError("relation is not over binom(B, A)")


@dataclass(frozen=True)
class _ESetup:
    copies_c: CopySet
    constraints: tuple
    symmetries: tuple


@lru_cache(maxsize=256)
def embedding_images(A: FiniteStructure, B: FiniteStructure, C: FiniteStructure) -> tuple:
    """Distinct vectors ``(index in binom(C, A) of b(copy)) for copy in binom(B, A)``
    over all embeddings ``b: B -> C``."""
    copies_b = enumerate_copies(A, B)
    copies_c = enumerate_copies(A, C)
    images = set()
    for f in iter_embeddings(B, C):
        images.add(tuple(copies_c.index(f[x] for x in sub) for sub in copies_b.subsets))
    return tuple(sorted(images))


def _e_setup(C, B, A, E, limits: Limits) -> _ESetup:
    _check_relation(B, A, E)
    copies_c = enumerate_copies(A, C)
    images = embedding_images(A, B, C)
    if not images:
        raise NoHostError("no embedding of B into the ambient structure")
    groups = [blk for blk in E.blocks if len(blk) >= 2]
    constraints = {tuple(sorted(tuple(sorted([img[i] for i in blk])) for blk in groups)) for img in images}
    return _ESetup(copies_c, tuple(sorted(constraints)), ambient_symmetries(C, copies_c, limits))


def _e_problem(setup: _ESetup, k: int):
    return make_problem(
        len(setup.copies_c), k, "split", setup.constraints, symmetries=setup.symmetries, normalized=True
    )


def check_E_ramsey(
    C: FiniteStructure,
    B: FiniteStructure,
    A: FiniteStructure,
    E: EquivRelation,
    k: int | None = None,
    workers: int = 1,
    limits: Limits | None = None,
) -> EVerdict:
    """Is ``B`` E-A-Ramsey inside ``C`` for ``k``-colorings?

    ``k`` defaults to ``|binom(C, A)|``, past which extra colors change nothing.
    """
    limits = current_limits(limits)
    setup = _e_setup(C, B, A, E, limits)
    n = len(setup.copies_c)
    if k is None:
        k = max(1, n)
    if k < 1:
        raise InputError("k must be at least 1")
    problem = _e_problem(setup, max(1, min(k, n)))
    found = find_defeating(problem, limits.node_limit, workers)
    if found is None:
        return EVerdict(E, k, True)
    chi = Coloring(setup.copies_c, k, found)
    assert is_defeating(problem, found)
    return EVerdict(E, k, False, chi)


def find_defeating_coloring(
    C: FiniteStructure,
    B: FiniteStructure,
    A: FiniteStructure,
    E: EquivRelation,
    workers: int = 1,
    limits: Limits | None = None,
    k_max: int | None = None,
) -> Coloring | None:
    """Least-k, lexicographically least coloring defeating ``E``; ``None`` if B is E-A-Ramsey."""
    limits = current_limits(limits)
    setup = _e_setup(C, B, A, E, limits)
    n = len(setup.copies_c)
    top = max(1, n) if k_max is None else max(1, min(k_max, n))
    for k in range(1, top + 1):
        found = find_defeating(_e_problem(setup, k), limits.node_limit, workers)
        if found is not None:
            return Coloring(setup.copies_c, k, found)
    return None


@dataclass(frozen=True)
class WitnessFamily:
    ambient: FiniteStructure
    B: FiniteStructure
    A: FiniteStructure
    members: tuple[tuple[EquivRelation, Coloring], ...]

    def __post_init__(self):
        limits = current_limits()
        for E, chi in self.members:
            setup = _e_setup(self.ambient, self.B, self.A, E, limits)
            if chi.copy_set.subsets != setup.copies_c.subsets:
                raise InputError("witness coloring is not over binom(C, A)")
            if not is_defeating(_e_problem(setup, chi.k), chi.assignment):
                raise InputError(f"coloring does not defeat relation {E.rgs()}")

    def to_json(self) -> dict:
        return {
            "members": [
                {"relation": E.rgs(), "k": chi.k, "colors": list(chi.assignment)}
                for E, chi in self.members
            ]
        }


def product_coloring(family: WitnessFamily | Sequence[Coloring]) -> Coloring:
    """Color each copy by the tuple of member colors, densely re-indexed in lex order."""
    colorings = [chi for _, chi in family.members] if isinstance(family, WitnessFamily) else list(family)
    if not colorings:
        raise InputError("product of an empty family")
    base = colorings[0].copy_set
    for chi in colorings[1:]:
        if chi.copy_set.subsets != base.subsets or chi.copy_set.ambient != base.ambient:
            raise InputError("product members color different copy sets")
    tuples = [tuple(chi.assignment[i] for chi in colorings) for i in range(len(base))]
    index = {tup: j for j, tup in enumerate(sorted(set(tuples)))}
    return Coloring(base, max(1, len(index)), tuple(index[tup] for tup in tuples))


def induced_relation(b: Embedding, chi: Coloring) -> EquivRelation:
    """The relation on ``binom(B, A)`` of having equal colors after transport along ``b``."""
    if not isinstance(b, Embedding):
        raise InputError("induced_relation needs an Embedding")
    if b.codomain != chi.copy_set.ambient:
        raise InputError("embedding codomain is not the colored structure")
    base = enumerate_copies(chi.copy_set.pattern, b.domain)
    return EquivRelation.from_labels(base, [chi(b.image(sub)) for sub in base.subsets])


@dataclass(frozen=True)
class KrizResult:
    success: bool
    relation: EquivRelation | None = None
    certificate: EVerdict | None = None
    coloring: Coloring | None = None
    family: WitnessFamily | None = None

    def report(self) -> str:
        if self.success:
            return "\n".join(
                [
                    "branch: success",
                    f"relation: {self.relation.rgs()} ({self.relation.num_blocks} blocks)",
                    f"certificate: check_E_ramsey k={self.certificate.k} holds",
                ]
            )
        chi = self.coloring
        lines = [
            "branch: failure",
            f"relations defeated: {len(self.family.members)}",
            f"product coloring ({chi.k} colors): {rgs_to_string(chi.assignment)}",
        ]
        for E, w in self.family.members:
            lines.append(f"  {E.rgs()} <- k={w.k} {rgs_to_string(w.assignment)}")
        return "\n".join(lines)


def _defeat_job(args):
    C, B, A, E, k, limits = args
    return find_defeating_coloring(C, B, A, E, limits=limits, k_max=k)


def kriz_reduce(
    C: FiniteStructure,
    B: FiniteStructure,
    A: FiniteStructure,
    t: int,
    k: int | None = None,
    workers: int = 1,
    limits: Limits | None = None,
) -> KrizResult:
    """Either a relation with at most ``t`` blocks making B E-A-Ramsey, or a
    coloring taking at least ``t + 1`` colors on every copy of B.

    Relations are tried in restricted-growth order and the first survivor is
    returned.  Otherwise the defeating colorings of all candidates are
    combined into their product, whose guarantee is re-checked copy by copy.
    ``k`` caps the colors of the defeating colorings (default: saturated).
    """
    if t < 1:
        raise InputError("t must be at least 1")
    limits = current_limits(limits)
    base = enumerate_copies(A, B)
    m = len(base)
    if m > limits.max_relation_copies:
        raise ResourceGuardError(
            f"binom(B, A) has {m} copies; relation enumeration is capped at {limits.max_relation_copies}"
        )
    if next(iter_embeddings(B, C), None) is None:
        raise NoHostError("no embedding of B into the ambient structure")
    relations = [EquivRelation(base, rgs) for rgs in iter_rgs(m, t)]
    jobs = [(C, B, A, E, k, limits) for E in relations]
    witnesses = parallel_map(_defeat_job, jobs, workers)
    for E, chi in zip(relations, witnesses):
        if chi is None:
            cert = check_E_ramsey(C, B, A, E, k=k, limits=limits)
            assert cert.holds
            return KrizResult(True, relation=E, certificate=cert)
    family = WitnessFamily(C, B, A, tuple(zip(relations, witnesses)))
    chi = product_coloring(family)
    for bc in enumerate_copies(B, C):
        if len(colors_on_copy(chi, bc, A)) < t + 1:
            raise AssertionError("product coloring misses the t + 1 guarantee")
    return KrizResult(False, coloring=chi, family=family)
