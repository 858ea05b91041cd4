"""Switch sequences along circuits and the position-inverting bundles."""

import pytest

from switchmix.degseq import parse_sequence_text
from switchmix.errors import InvalidCircuit
from switchmix.graph import Realization, chord_model_of
from switchmix.mixflow import build_markov_graph
from switchmix.redblue import RedBlueGraph, symmetric_difference
from switchmix.sweep import (bundle, bundle_at, canonical_path,
                             choose_cornerstone, oriented_sweep, reconstruct,
                             sweep)


def hexagon():
    seq = parse_sequence_text("uc: 2 2 2 2 2 2")
    cm = chord_model_of(seq)
    return Realization(cm, {(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)})


def test_sweep_square_circuit():
    g = hexagon()
    run = sweep(g, (0, 2, 3, 5))
    assert len(run.steps) == 1
    assert run.steps[0].tag == "switch"
    assert run.steps[0].r_set == frozenset()
    # endpoint is the circuit toggled onto the graph: two triangles
    assert run.states[-1].edges == frozenset(
        {(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)})


def test_sweep_rejects_bad_circuits():
    g = hexagon()
    with pytest.raises(InvalidCircuit):
        sweep(g, (0, 2, 3))              # odd length
    with pytest.raises(InvalidCircuit):
        sweep(g, (0, 1, 2, 4))           # starts on an edge
    with pytest.raises(InvalidCircuit):
        sweep(g, (0, 2, 2, 5))           # loop pair


def test_choose_cornerstone_starts_on_non_edge():
    g = hexagon()
    lab = choose_cornerstone(g, (0, 2, 3, 5))
    assert set(lab) == {0, 2, 3, 5}
    assert not g.has_edge(lab[0], lab[1])
    orient, run = oriented_sweep(g, (0, 2, 3, 5))
    assert orient[0] == lab[0]
    assert run.states[-1].edges == sweep(g, orient).states[-1].edges


def test_canonical_path_square_pair():
    mg = build_markov_graph(parse_sequence_text("uc: 2 2 2 2"))
    x, y = mg.states[0], mg.states[1]
    rb = symmetric_difference(x, y)
    (s,) = rb.enumerate_matchings()
    path = canonical_path(x, y, s)
    assert path.states[0] == x and path.states[-1] == y
    assert len(path.states) == 2
    assert len(path.comps) == 1 and len(path.rounds) == 1
    assert path.moves()[0].kind == "switch"
    assert path.round_of(1, 1).x1 == path.rounds[0].oriented[0]


def test_path_length_bound_and_distinct_states():
    mg = build_markov_graph(parse_sequence_text("uc: 2 2 2 2 2"))
    for x in mg.states:
        for y in mg.states:
            if x == y:
                continue
            rb = symmetric_difference(x, y)
            for s in rb.enumerate_matchings():
                path = canonical_path(x, y, s)
                nabla = x.edges ^ y.edges
                assert len(path.states) - 1 <= len(nabla) // 2
                assert len(set(path.states)) == len(path.states)
                cur = path.states[0]
                for mv in path.moves():
                    cur = Realization(cur.cm, (cur.edges - mv.removed) | mv.added)
                assert cur == y


def test_milestones_carry_no_correction_set():
    mg = build_markov_graph(parse_sequence_text("uc: 2 2 2 2 2"))
    x, y = mg.states[0], mg.states[-1]
    rb = symmetric_difference(x, y)
    for s in rb.enumerate_matchings():
        path = canonical_path(x, y, s)
        for rr in path.rounds:
            assert rr.result.steps[-1].r_set == frozenset()


def test_bundle_roundtrip_small():
    mg = build_markov_graph(parse_sequence_text("uc: 2 2 2 2 2"))
    for x in mg.states[:4]:
        for y in mg.states:
            if x == y:
                continue
            rb = symmetric_difference(x, y)
            for s in rb.enumerate_matchings():
                path = canonical_path(x, y, s)
                for pos, z in enumerate(path.states):
                    b = bundle_at(path, pos)
                    assert reconstruct(z, b) == (x, y, s)
                    assert bundle(path, z) == b


def test_bundle_kinds():
    mg = build_markov_graph(parse_sequence_text("uc: 2 2 2 2"))
    x, y = mg.states[0], mg.states[1]
    rb = symmetric_difference(x, y)
    (s,) = rb.enumerate_matchings()
    path = canonical_path(x, y, s)
    first = bundle_at(path, 0)
    last = bundle_at(path, len(path.states) - 1)
    assert first.kind != last.kind
    assert reconstruct(y, last) == (x, y, s)
