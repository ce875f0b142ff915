import itertools

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

import oracles
from strategies import GRAPH, graphs, mixed
from structramsey.catalog import chain, complete_graph, cycle_graph, graph, pure_set
from structramsey.errors import InputError
from structramsey.structures import (
    Embedding,
    FiniteStructure,
    Signature,
    are_isomorphic,
    automorphisms,
    canonical_form,
    canonical_structure,
    enumerate_copies,
    induced_substructure,
    is_embedding,
    iter_embeddings,
    substructure_on,
)


def test_chain_copies_of_two_chain():
    cs = enumerate_copies(chain(2), chain(3))
    assert cs.subsets == ((0, 1), (0, 2), (1, 2))


def test_edges_of_four_cycle():
    assert len(enumerate_copies(complete_graph(2), cycle_graph(4))) == 4


def test_copies_are_lex_ordered():
    cs = enumerate_copies(complete_graph(3), complete_graph(5))
    assert list(cs.subsets) == sorted(cs.subsets)
    assert len(cs) == 10


def test_empty_pattern_has_one_copy():
    cs = enumerate_copies(chain(0), chain(4))
    assert cs.subsets == ((),)


def test_relabeled_chains_share_encoding():
    a = chain(3)
    b = a.relabel((2, 0, 1))
    assert a != b
    assert canonical_form(a) == canonical_form(b)


def test_edge_differs_from_two_points():
    assert canonical_form(complete_graph(2)) != canonical_form(graph(2, []))


def test_empty_structure_encoding_is_fixed():
    e = FiniteStructure(GRAPH, 0)
    assert canonical_form(e) == (GRAPH.relations, 0, b"")
    assert canonical_form(e) < canonical_form(graph(1, []))


def test_bad_tuples_are_rejected():
    with pytest.raises(InputError):
        FiniteStructure.build(GRAPH, 2, {"E": [(0, 2)]})
    with pytest.raises(InputError):
        FiniteStructure.build(GRAPH, 2, {"E": [(0,)]})
    with pytest.raises(InputError):
        FiniteStructure.build(GRAPH, 2, {"F": [(0, 1)]})
    with pytest.raises(InputError):
        Signature((("E", 2), ("E", 1)))


def test_embedding_validation():
    with pytest.raises(InputError):
        Embedding(complete_graph(2), cycle_graph(4), (0, 2))
    e = Embedding(complete_graph(2), cycle_graph(4), (3, 0))
    assert e.image((0, 1)) == (0, 3)


def test_signature_mismatch_is_an_error():
    with pytest.raises(InputError):
        enumerate_copies(chain(2), complete_graph(3))


def test_substructure_on_follows_sequence():
    S = substructure_on(chain(4), (3, 1))
    assert S.rel("lt") == frozenset({(1, 0)})
    assert induced_substructure(chain(4), (3, 1)) == chain(2)


def test_pure_set_automorphisms():
    assert len(automorphisms(pure_set(4))) == 24
    assert automorphisms(chain(4)) == ((0, 1, 2, 3),)


@settings(max_examples=80)
@given(mixed(max_size=3, min_size=0), mixed(max_size=5))
def test_copy_count_times_automorphisms_is_embedding_count(A, C):
    embs = oracles.embeddings(A, C)
    cs = enumerate_copies(A, C)
    assert len(cs) * len(oracles.automorphisms(A)) == len(embs)
    assert list(cs.subsets) == oracles.copies(A, C)


@settings(max_examples=60)
@given(graphs(max_size=3), graphs(max_size=6))
def test_graph_embeddings_match_brute_force(A, C):
    assert sorted(iter_embeddings(A, C)) == sorted(oracles.embeddings(A, C))
    assert len(enumerate_copies(A, C)) * len(automorphisms(A)) == len(oracles.embeddings(A, C))


@settings(max_examples=1000)
@given(st.data())
def test_canonical_form_ignores_relabeling(data):
    S = data.draw(st.one_of(graphs(max_size=6), mixed(max_size=6)))
    perm = data.draw(st.permutations(list(range(S.size))))
    T = S.relabel(perm)
    assert canonical_form(S) == canonical_form(T)
    assert canonical_structure(S) == canonical_structure(T)


@settings(max_examples=150)
@given(mixed(max_size=4), mixed(max_size=4))
def test_equal_encodings_iff_isomorphic(S, T):
    assert are_isomorphic(S, T) == oracles.isomorphic(S, T)


@given(mixed(max_size=5))
def test_automorphisms_match_brute_force(S):
    assert sorted(automorphisms(S)) == sorted(oracles.automorphisms(S))


@given(mixed(max_size=5))
def test_canonical_structure_is_isomorphic_and_idempotent(S):
    K = canonical_structure(S)
    assert oracles.isomorphic(S, K)
    assert canonical_structure(K) == K


@settings(max_examples=60)
@given(st.data())
def test_copies_restrict_to_subsets(data):
    A = data.draw(graphs(max_size=3))
    C = data.draw(graphs(max_size=6))
    S = sorted(data.draw(st.sets(st.integers(0, max(C.size - 1, 0)), max_size=C.size)) if C.size else [])
    inside = [c for c in enumerate_copies(A, C).subsets if set(c) <= set(S)]
    sub = enumerate_copies(A, induced_substructure(C, S))
    assert [tuple(S[x] for x in c) for c in sub.subsets] == inside


@given(mixed(max_size=4), mixed(max_size=4))
def test_is_embedding_agrees_with_oracle(A, C):
    for f in itertools.permutations(range(C.size), A.size):
        assert is_embedding(f, A, C) == oracles.is_embedding(f, A, C)
