import pytest

from structramsey.catalog import (
    FamilySpec,
    chain,
    cycle_graph,
    equivalence,
    generate_fragment,
    path_graph,
    two_class,
    validate_fragment,
)
from structramsey.errors import InputError
from structramsey.expansions import ClassFragment
from structramsey.structures import automorphisms, are_isomorphic

# graphs on n vertices up to isomorphism (OEIS A000088)
GRAPH_COUNTS = [1, 1, 2, 4, 11, 34]


def test_graph_counts():
    K = generate_fragment(FamilySpec("graphs", (5,)))
    by_size = [sum(1 for m in K.members if m.size == n) for n in range(6)]
    assert by_size == GRAPH_COUNTS


def test_small_families():
    assert len(generate_fragment(FamilySpec("chains", (4,)))) == 5
    assert len(generate_fragment(FamilySpec("two_class_equivalence", (2, 2)))) == 6
    ordered = generate_fragment(FamilySpec("pure_sets", (3,), ordered=True))
    assert [m.size for m in ordered.members] == [0, 1, 2, 3]
    # class patterns along the order: aa, ab | aab, aba, abb | aabb, abab, abba
    og = generate_fragment(FamilySpec("two_class_equivalence", (2, 2), ordered=True))
    assert [sum(1 for m in og.members if m.size == n) for n in range(5)] == [1, 1, 2, 3, 3]


def test_caps_and_bad_specs():
    with pytest.raises(InputError):
        FamilySpec("graphs", (8,))
    with pytest.raises(InputError):
        FamilySpec("chains", (7,), ordered=True)
    with pytest.raises(InputError):
        FamilySpec("trees", (3,))
    with pytest.raises(InputError):
        FamilySpec("two_class_equivalence", (3,))


def test_interleaved_two_class():
    S = two_class(3, 3, interleaved=True)
    assert are_isomorphic(S, two_class(3, 3))
    assert (0, 2) in S.rel("eq") and (0, 1) not in S.rel("eq")
    with pytest.raises(InputError):
        two_class(1, 3, interleaved=True)


def test_builders():
    assert len(automorphisms(cycle_graph(5))) == 10
    assert len(automorphisms(path_graph(4))) == 2
    with pytest.raises(InputError):
        equivalence([[0], [0, 1]])


@pytest.mark.parametrize(
    "spec", [FamilySpec("chains", (4,)), FamilySpec("graphs", (4,)), FamilySpec("two_class_equivalence", (2, 2))]
)
def test_generated_fragments_are_hereditary(spec):
    assert validate_fragment(generate_fragment(spec)).hereditary


def test_validation_reports_missing_substructures():
    K = ClassFragment.from_structures(chain(0).signature, [chain(0), chain(3)])
    res = validate_fragment(K)
    assert not res.hereditary and "not a member" in res.violations[0]


def test_joint_embedding_inside_chains():
    assert validate_fragment(generate_fragment(FamilySpec("chains", (4,)))).jep_within_fragment
    # two 3-vertex graphs with no common 3-vertex host
    assert not validate_fragment(generate_fragment(FamilySpec("graphs", (3,)))).jep_within_fragment


def test_catalog_examples():
    assert len(generate_fragment(FamilySpec("chains", (3,)))) == 4
    assert len(generate_fragment(FamilySpec("pure_sets", (3,)))) == 4
    assert len(generate_fragment(FamilySpec("graphs", (3,)))) == 8


def test_missing_one_chain_breaks_heredity():
    K = ClassFragment.from_structures(chain(0).signature, [chain(0), chain(2)])
    assert not validate_fragment(K).hereditary


def test_edge_and_non_edge_do_not_jointly_embed_at_size_two():
    res = validate_fragment(generate_fragment(FamilySpec("graphs", (2,))))
    assert res.hereditary and not res.jep_within_fragment


def test_generation_is_deterministic(tmp_path):
    from structramsey.fileformat import write_fragment

    spec = FamilySpec("graphs", (4,), ordered=False)
    a = write_fragment(generate_fragment(spec), tmp_path / "a")
    b = write_fragment(generate_fragment(spec), tmp_path / "b")
    assert a.read_text() == b.read_text()
    for name in sorted(p.name for p in (tmp_path / "a" / "members").iterdir()):
        assert (tmp_path / "a" / "members" / name).read_bytes() == (tmp_path / "b" / "members" / name).read_bytes()
