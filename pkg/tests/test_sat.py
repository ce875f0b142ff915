import itertools

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

import oracles
from structramsey.errors import InputError
from structramsey.sat import CNF, add_at_least, add_at_most, check_model, parse_dimacs, solve


@st.composite
def cnfs(draw):
    n = draw(st.integers(1, 8))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=3), max_size=30))
    cnf = CNF(num_vars=n)
    for c in clauses:
        cnf.add(c)
    return cnf


@settings(max_examples=200)
@given(cnfs())
def test_dpll_agrees_with_truth_table(cnf):
    model = solve(cnf)
    assert (model is not None) == oracles.satisfiable(cnf.num_vars, cnf.clauses)
    if model is not None:
        assert check_model(cnf, model)


@given(cnfs())
def test_dimacs_round_trip(cnf):
    again = parse_dimacs(cnf.to_dimacs())
    assert again.num_vars == cnf.num_vars and again.clauses == cnf.clauses


@pytest.mark.parametrize("m", range(0, 6))
@pytest.mark.parametrize("bound", range(-1, 7))
def test_cardinality_encodings_are_exact(m, bound):
    for enc, ok in ((add_at_most, lambda s: s <= bound), (add_at_least, lambda s: s >= bound)):
        for bits in itertools.product((False, True), repeat=m):
            cnf = CNF()
            xs = [cnf.new_var() for _ in range(m)]
            enc(cnf, xs, bound)
            for x, b in zip(xs, bits):
                cnf.add([x if b else -x])
            assert (solve(cnf) is not None) == ok(sum(bits))


def test_bad_dimacs():
    with pytest.raises(InputError):
        parse_dimacs("p cnf 2 2\n1 2 0\n")
    with pytest.raises(InputError):
        parse_dimacs("1 2 0\n")
