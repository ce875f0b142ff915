import hypothesis.strategies as st

from structramsey.structures import FiniteStructure, Signature

GRAPH = Signature((("E", 2),))
MIXED = Signature((("R", 2), ("U", 1)))


@st.composite
def graphs(draw, max_size=6, min_size=0):
    n = draw(st.integers(min_size, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    edges = set(chosen) | {(j, i) for i, j in chosen}
    return FiniteStructure.build(GRAPH, n, {"E": edges})


@st.composite
def mixed(draw, max_size=5, min_size=0):
    """Directed relation (loops allowed) plus a unary predicate."""
    n = draw(st.integers(min_size, max_size))
    cells = [(i, j) for i in range(n) for j in range(n)]
    r = draw(st.lists(st.sampled_from(cells), unique=True)) if cells else []
    u = draw(st.lists(st.integers(0, n - 1), unique=True)) if n else []
    return FiniteStructure.build(MIXED, n, {"R": r, "U": [(x,) for x in u]})


@st.composite
def permutations_of(draw, n):
    return tuple(draw(st.permutations(list(range(n)))))
