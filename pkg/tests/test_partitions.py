import itertools

import pytest
from hypothesis import given
import hypothesis.strategies as st

from structramsey.errors import InputError
from structramsey.partitions import (
    blocks_of,
    count_partitions,
    from_blocks,
    is_rgs,
    iter_rgs,
    normalize,
    rgs_from_string,
    rgs_to_string,
)

BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140]


def test_bell_numbers():
    for m, b in enumerate(BELL):
        assert sum(1 for _ in iter_rgs(m)) == b
        assert count_partitions(m) == b


def test_rgs_lex_order_small():
    assert list(iter_rgs(3)) == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (0, 1, 2)]
    assert list(iter_rgs(3, 1)) == [(0, 0, 0)]


@given(st.integers(0, 7), st.integers(0, 7))
def test_bounded_enumeration_is_lex_sorted_and_counted(m, j):
    out = list(iter_rgs(m, j))
    assert out == sorted(out)
    assert len(out) == count_partitions(m, j)
    assert all(is_rgs(a) and len(set(a)) <= max(j, 0 if m else 0) or m == 0 for a in out)


@given(st.integers(1, 7), st.integers(1, 3))
def test_enumeration_equals_normalized_product(m, k):
    brute = sorted({normalize(c) for c in itertools.product(range(k), repeat=m)})
    assert list(iter_rgs(m, k)) == brute


@given(st.lists(st.integers(0, 40), max_size=12))
def test_string_round_trip(labels):
    rgs = normalize(labels)
    assert rgs_from_string(rgs_to_string(rgs)) == rgs


def test_blocks_round_trip():
    rgs = (0, 1, 0, 2, 1)
    assert blocks_of(rgs) == ((0, 2), (1, 4), (3,))
    assert from_blocks(blocks_of(rgs), 5) == rgs
    with pytest.raises(InputError):
        from_blocks([[0], [0, 1]], 2)
    with pytest.raises(InputError):
        rgs_from_string("10")
