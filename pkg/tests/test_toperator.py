"""Interval reversals: trajectories, round extraction, witnesses."""

import pytest

from switchmix.errors import InvalidCircuit
from switchmix.redblue import Trail
from switchmix.toperator import (closed_verts, decompose_rounds, greenify,
                                 initial_state, primitive_decompose,
                                 relative_apply, relative_witness, roundtrip,
                                 t_step, trace_rounds, trajectory)


def test_closed_verts_validation():
    assert closed_verts(Trail((0, 1, 2, 3), True)) == (0, 1, 2, 3, 0)
    assert closed_verts((0, 1, 2, 0)) == (0, 1, 2, 0)
    with pytest.raises(InvalidCircuit):
        closed_verts((0, 1, 2))          # does not close
    with pytest.raises(InvalidCircuit):
        closed_verts((0, 0))             # too short
    with pytest.raises(InvalidCircuit):
        closed_verts(Trail((0, 1, 2, 3), True, closed=False))


def test_square_single_reversal():
    ts = initial_state((0, 1, 2, 3, 0))
    assert ts.mu == 5
    assert ts.elig == frozenset({(1, 5)})
    assert ts.perm == (1, 2, 3, 4, 5)
    nxt = t_step(ts)
    assert nxt.perm == (5, 4, 3, 2, 1)
    assert nxt.red == frozenset({1, 2, 3, 4})
    assert t_step(nxt) == nxt            # fixed point
    assert len(trajectory(ts)) == 2


def test_roundtrip_requires_green_start():
    ts = initial_state((0, 1, 2, 3, 0))
    with pytest.raises(InvalidCircuit):
        roundtrip(t_step(ts), 1)
    w, red = roundtrip(ts, 0)
    assert w == 0 and red == frozenset()


def test_roundtrip_restores_permutation():
    verts = (0, 1, 2, 0, 3, 4, 0)        # two triangles glued at 0
    ts = initial_state(verts)
    for r in range(len(trajectory(ts))):
        w, _ = roundtrip(ts, r)
        assert w <= ts.mu * ts.mu


def test_decompose_rounds_bowtie():
    # the repeat at odd distance makes the whole trail one primitive round
    t = Trail((0, 1, 2, 0, 3, 4), True)
    run = decompose_rounds(t)
    assert run.mu == 7
    assert [rd.circuit.verts for rd in run.rounds] == [(0, 1, 2, 0, 3, 4)]
    assert len(trace_rounds(run)) == 1


def test_decompose_rounds_partitions_edges():
    # vertex 0 repeats at even distance, so the eight-edge trail splits
    t = Trail((0, 1, 2, 3, 0, 5, 2, 7), True)
    parts = primitive_decompose(t)
    assert len(parts) >= 2
    got = set()
    for c in parts:
        es = c.edge_set()
        assert not (got & es)
        got |= es
    assert got == t.edge_set()


def test_primitive_trail_is_one_round():
    t = Trail((0, 1, 2, 3), True)
    assert [c.verts for c in primitive_decompose(t)] == [(0, 1, 2, 3)]


def test_relative_witness_inverts_apply():
    labels = (0, 1, 2, 0, 3, 4)
    ts = initial_state(labels + (0,))
    for r in range(len(trajectory(ts))):
        target = relative_apply(labels, r)
        w = relative_witness(labels, target)
        assert relative_apply(labels, w) == target
        assert w <= r
