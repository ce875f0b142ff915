"""Lex-first search for defeating colorings.

Both partition arrows and E-A-Ramsey statements reduce to one question: is
there a coloring of ``n`` items (the A-copies of the ambient structure) by
at most ``k`` colors that *defeats* every constraint?  Colorings are walked
as restricted-growth strings in lexicographic order, so the first hit is the
lexicographically least defeating partition.

Constraint kinds:

``"distinct"``
    a constraint is a tuple of items; it is defeated when the items carry
    at least ``t + 1`` distinct colors.
``"split"``
    a constraint is a tuple of groups of items; it is defeated when some
    group is not monochromatic.

Symmetries are permutations of the items that map constraints onto
constraints.  A prefix is cut when a symmetry stabilizing it setwise maps it
to a lexicographically smaller RGS; the least defeating coloring is never
cut because its orbit has no smaller element.
"""

from __future__ import annotations

import atexit
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from structramsey.errors import InputError, ResourceGuardError
from structramsey.partitions import normalize

# below this many items a search is cheap enough that workers only add overhead
PARALLEL_THRESHOLD = 12


@dataclass(frozen=True)
class ColoringProblem:
    n: int
    k: int
    kind: str
    constraints: tuple
    t: int = 1
    symmetries: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.kind not in ("distinct", "split"):
            raise InputError(f"unknown constraint kind {self.kind!r}")
        if self.k < 1:
            raise InputError("k must be at least 1")


def _dedupe_constraints(kind: str, constraints) -> tuple:
    if kind == "distinct":
        keyed = {tuple(sorted(set(c))) for c in constraints}
        return tuple(sorted(keyed))
    keyed = set()
    for groups in constraints:
        gs = tuple(sorted(tuple(sorted(set(g))) for g in groups if len(set(g)) >= 2))
        keyed.add(gs)
    return tuple(sorted(keyed))


def make_problem(n, k, kind, constraints, t=1, symmetries=(), normalized=False) -> ColoringProblem:
    """``normalized`` promises constraints are already sorted and duplicate-free."""
    cons = tuple(constraints) if normalized else _dedupe_constraints(kind, constraints)
    sym = tuple(sorted({tuple(p) for p in symmetries if tuple(p) != tuple(range(n))}))
    return ColoringProblem(n=n, k=k, kind=kind, constraints=cons, t=t, symmetries=sym)


def trivially_safe(problem: ColoringProblem) -> bool:
    """True when some constraint can never be defeated, whatever the coloring."""
    if not problem.constraints:
        return False
    if problem.kind == "distinct":
        need = problem.t + 1
        return any(len(c) < need for c in problem.constraints) or need > problem.k
    return any(len(groups) == 0 for groups in problem.constraints) or problem.k < 2


class _Searcher:
    def __init__(self, problem: ColoringProblem, node_limit: int):
        self.p = problem
        self.node_limit = node_limit
        self.nodes = 0
        n = problem.n
        self.triggers: list[list] = [[] for _ in range(n)]
        if problem.kind == "distinct":
            for c in problem.constraints:
                for pos in c:
                    upto = tuple(i for i in c if i <= pos)
                    rest = sum(1 for i in c if i > pos)
                    self.triggers[pos].append((upto, rest))
        else:
            for groups in problem.constraints:
                top = max(max(g) for g in groups)
                self.triggers[top].append(groups)
        self.stab: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
        for perm in problem.symmetries:
            for p in range(n):
                head = perm[: p + 1]
                if max(head) == p and any(head[i] != i for i in range(p + 1)):
                    self.stab[p].append(perm)
        for p in range(n):
            seen = set()
            uniq = []
            for perm in self.stab[p]:
                head = perm[: p + 1]
                if head not in seen:
                    seen.add(head)
                    uniq.append(perm)
            self.stab[p] = uniq
        self.colors = [-1] * n

    def _ok(self, pos: int) -> bool:
        colors = self.colors
        if self.p.kind == "distinct":
            need = self.p.t + 1
            for upto, rest in self.triggers[pos]:
                if len({colors[i] for i in upto}) + rest < need:
                    return False
        else:
            for groups in self.triggers[pos]:
                for g in groups:
                    c0 = colors[g[0]]
                    if any(colors[i] != c0 for i in g):
                        break
                else:
                    return False
        prefix = colors[: pos + 1]
        for perm in self.stab[pos]:
            img = [0] * (pos + 1)
            for i in range(pos + 1):
                img[perm[i]] = prefix[i]
            if list(normalize(img)) < prefix:
                return False
        return True

    def run(self, prefix: tuple[int, ...] = (), depth: int | None = None):
        """Lex-first defeating RGS extending ``prefix``; with ``depth``, collect
        viable prefixes of that length instead."""
        n = self.p.n
        k = self.p.k
        colors = self.colors
        out_prefixes: list[tuple[int, ...]] = []
        for i, c in enumerate(prefix):
            colors[i] = c
            if not self._ok(i):
                return out_prefixes if depth is not None else None
        start = len(prefix)
        top0 = max(prefix) if prefix else -1

        def rec(i: int, top: int):
            if depth is not None and i == depth:
                out_prefixes.append(tuple(colors[:i]))
                return None
            if i == n:
                return tuple(colors)
            for c in range(min(top + 2, k)):
                self.nodes += 1
                if self.nodes > self.node_limit:
                    raise ResourceGuardError(
                        f"coloring search exceeded node limit {self.node_limit}"
                    )
                colors[i] = c
                if self._ok(i):
                    found = rec(i + 1, max(top, c))
                    if found is not None:
                        return found
            colors[i] = -1
            return None

        if n == 0:
            return () if depth is None else [()]
        if start == 0:
            colors[0] = 0
            self.nodes += 1
            if not self._ok(0):
                return out_prefixes if depth is not None else None
            found = rec(1, 0)
        else:
            found = rec(start, top0)
        return out_prefixes if depth is not None else found


def _search_prefix(problem: ColoringProblem, prefix: tuple[int, ...], node_limit: int):
    return _Searcher(problem, node_limit).run(prefix)


_EXECUTORS: dict[int, ProcessPoolExecutor] = {}


def _executor(workers: int) -> ProcessPoolExecutor:
    ex = _EXECUTORS.get(workers)
    if ex is None:
        ex = ProcessPoolExecutor(max_workers=workers, mp_context=multiprocessing.get_context("fork"))
        _EXECUTORS[workers] = ex
    return ex


@atexit.register
def _shutdown_executors():
    for ex in _EXECUTORS.values():
        ex.shutdown(wait=False, cancel_futures=True)
    _EXECUTORS.clear()


def find_defeating(problem: ColoringProblem, node_limit: int, workers: int = 1):
    """Lexicographically least defeating RGS, or ``None`` if none exists.

    With ``workers > 1`` the tree is split into prefixes which are searched in
    worker processes; the answer is the hit from the earliest prefix, so it
    does not depend on the worker count.
    """
    if trivially_safe(problem):
        return None
    if workers <= 1 or problem.n < PARALLEL_THRESHOLD:
        return _Searcher(problem, node_limit).run()
    depth = 1
    prefixes = [()]
    while depth < problem.n - 1 and len(prefixes) < 4 * workers:
        depth += 1
        prefixes = _Searcher(problem, node_limit).run(depth=depth)
        if not prefixes:
            return None
    ex = _executor(workers)
    futures = [ex.submit(_search_prefix, problem, pre, node_limit) for pre in prefixes]
    for fut in futures:
        found = fut.result()
        if found is not None:
            for other in futures:
                other.cancel()
            return found
    return None


def is_defeating(problem: ColoringProblem, colors) -> bool:
    """Direct check of a complete coloring against every constraint."""
    if len(colors) != problem.n:
        return False
    if problem.kind == "distinct":
        return all(len({colors[i] for i in c}) >= problem.t + 1 for c in problem.constraints)
    return all(
        any(len({colors[i] for i in g}) > 1 for g in groups) for groups in problem.constraints
    )


def parallel_map(fn, items, workers: int = 1) -> list:
    """Order-preserving map, in worker processes when ``workers > 1``."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    return list(_executor(workers).map(fn, items))
