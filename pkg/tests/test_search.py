import itertools

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from structramsey.errors import ResourceGuardError
from structramsey.partitions import normalize
from structramsey.search import find_defeating, is_defeating, make_problem


@st.composite
def distinct_problems(draw):
    n = draw(st.integers(1, 8))
    k = draw(st.integers(1, 3))
    t = draw(st.integers(1, k))
    cons = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1, max_size=n).map(tuple), max_size=6))
    return make_problem(n, k, "distinct", cons, t=t)


@st.composite
def split_problems(draw):
    n = draw(st.integers(1, 8))
    k = draw(st.integers(1, 3))
    group = st.sets(st.integers(0, n - 1), min_size=2, max_size=n).map(tuple) if n >= 2 else st.nothing()
    cons = draw(st.lists(st.lists(group, min_size=1, max_size=2), max_size=5)) if n >= 2 else []
    return make_problem(n, k, "split", cons)


def brute_first(problem):
    hits = [
        normalize(c)
        for c in itertools.product(range(problem.k), repeat=problem.n)
        if is_defeating(problem, c)
    ]
    return min(hits) if hits else None


@settings(max_examples=150)
@given(st.one_of(distinct_problems(), split_problems()))
def test_search_returns_lex_least_defeating_rgs(problem):
    assert find_defeating(problem, node_limit=10**7) == brute_first(problem)


def test_symmetry_pruning_keeps_lex_least():
    # triangles of K5 edges; the full S5 action on edges
    edges = list(itertools.combinations(range(5), 2))
    idx = {e: i for i, e in enumerate(edges)}
    tris = [tuple(idx[p] for p in itertools.combinations(t, 2)) for t in itertools.combinations(range(5), 3)]
    syms = []
    for g in itertools.permutations(range(5)):
        syms.append(tuple(idx[tuple(sorted((g[a], g[b])))] for a, b in edges))
    plain = make_problem(10, 2, "distinct", tris, t=1)
    pruned = make_problem(10, 2, "distinct", tris, t=1, symmetries=syms)
    assert find_defeating(plain, 10**7) == find_defeating(pruned, 10**7)
    assert find_defeating(pruned, 10**7) is not None


def test_node_limit_trips():
    triples = list(itertools.combinations(range(14), 3))
    problem = make_problem(14, 2, "distinct", triples, t=1)
    with pytest.raises(ResourceGuardError):
        find_defeating(problem, node_limit=5)
