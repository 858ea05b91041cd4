"""Red-blue difference graphs, matchings, trail decomposition."""

import pytest

from switchmix.degseq import parse_sequence_text
from switchmix.errors import InvalidMatching, Unbalanced
from switchmix.graph import chord_model_of, Realization
from switchmix.redblue import (RedBlueGraph, Trail, decompose, induced_matching,
                               is_primitive, symmetric_difference, trail_of)

# two pentagons on the same five vertices: a cycle and its complement
PENTA_RED = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]
PENTA_BLUE = [(0, 2), (2, 4), (1, 4), (1, 3), (0, 3)]


def square_states():
    seq = parse_sequence_text("uc: 2 2 2 2")
    cm = chord_model_of(seq)
    a = Realization(cm, {(0, 1), (1, 2), (2, 3), (0, 3)})
    b = Realization(cm, {(0, 1), (1, 3), (2, 3), (0, 2)})
    return a, b


def test_constructor_rejects():
    with pytest.raises(Unbalanced):
        RedBlueGraph({(0, 1)}, {(0, 1)})
    with pytest.raises(Unbalanced):
        RedBlueGraph({(0, 0)}, set())


def test_symmetric_difference_square():
    a, b = square_states()
    rb = symmetric_difference(a, b)
    assert rb.red == frozenset({(1, 2), (0, 3)})
    assert rb.blue == frozenset({(1, 3), (0, 2)})
    assert rb.is_balanced()
    assert rb.count_matchings() == 1
    (s,) = rb.enumerate_matchings()
    (t,) = decompose(rb, s)
    assert t.closed and len(t) == 4
    assert is_primitive(t)
    assert t.edge_set() == rb.red | rb.blue


def test_unbalanced_has_no_matchings():
    rb = RedBlueGraph({(0, 1)}, set())
    assert not rb.is_balanced()
    with pytest.raises(Unbalanced):
        rb.count_matchings()


def test_double_pentagon_matchings():
    rb = RedBlueGraph(PENTA_RED, PENTA_BLUE)
    assert rb.count_matchings() == 32
    all_s = list(rb.enumerate_matchings())
    assert len(all_s) == 32
    assert len(set(all_s)) == 32
    assert [rb.matching_by_index(i) for i in range(32)] == all_s
    assert rb.canonical_matching() == all_s[0]
    with pytest.raises(InvalidMatching):
        rb.matching_by_index(32)


def test_decompose_partitions_edges():
    rb = RedBlueGraph(PENTA_RED, PENTA_BLUE)
    for s in rb.enumerate_matchings():
        trails = decompose(rb, s)
        got = set()
        for t in trails:
            assert t.closed
            assert len(t) % 2 == 0
            es = t.edge_set()
            assert not (got & es)
            got |= es
        assert got == rb.red | rb.blue


def test_decompose_rejects_foreign_matching():
    a, b = square_states()
    rb = symmetric_difference(a, b)
    bad = frozenset({(0, (0, 1), (0, 2))})
    with pytest.raises(InvalidMatching):
        decompose(rb, bad)


def test_empty_matching_gives_open_trails():
    a, b = square_states()
    rb = symmetric_difference(a, b)
    trails = decompose(rb, frozenset())
    assert len(trails) == 4
    assert all(not t.closed and len(t) == 1 for t in trails)


def test_is_primitive():
    assert is_primitive(Trail((0, 1, 2, 3), True))
    assert is_primitive(Trail((0, 1, 2, 0, 3, 4), True))          # bow-tie
    assert not is_primitive(Trail((0, 1, 2, 3, 4, 1, 5, 6), True))  # even repeat
    assert not is_primitive(Trail((0, 1, 2, 0, 3, 4, 0, 5), True))  # vertex thrice
    assert not is_primitive(Trail((0, 1, 2), True))               # odd length
    assert not is_primitive(Trail((0, 1, 2, 3), True, closed=False))


def test_trail_of_and_induced_matching():
    t = Trail((0, 1, 2, 3), True)
    assert trail_of(t) == (0, 1, 2, 3, 0)
    s = induced_matching(t)
    assert len(s) == 4
    rb = RedBlueGraph([e for e, red in t.edges() if red],
                      [e for e, red in t.edges() if not red])
    assert decompose(rb, s) == (t,)
