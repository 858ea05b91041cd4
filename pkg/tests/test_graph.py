"""Chord models, realizations, moves, file round-trips."""

import pytest

from switchmix.degseq import DegreeSequence, Model, initial_realization, parse_sequence_text
from switchmix.errors import InvalidMove, ModelMismatch, ParseError, PreconditionViolation
from switchmix.graph import (Realization, SwitchMove, adjacency_matrix,
                             apply_switch, chord_model_of, from_json_dict,
                             read_edge_list, read_json, realization_from_pairs,
                             to_json_dict, write_edge_list, write_json)


def test_chord_model_uc():
    cm = chord_model_of(DegreeSequence(Model.UC, (2, 2, 2, 2)))
    assert cm.is_chord(0, 3) and cm.is_chord(3, 0)
    assert not cm.is_chord(1, 1)          # loops are never chords
    assert not cm.is_chord(0, 4)
    assert len(list(cm.chords())) == 6


def test_chord_model_bipartite():
    cm = chord_model_of(DegreeSequence(Model.BIPARTITE, (1, 1), (1, 1)))
    assert cm.is_chord(0, 2) and cm.is_chord(1, 3)
    assert not cm.is_chord(0, 1)          # same side
    assert not cm.is_chord(2, 3)
    assert len(list(cm.chords())) == 4


def test_chord_model_directed():
    # the split representation forbids each u_x v_x diagonal
    cm = chord_model_of(DegreeSequence(Model.DIRECTED, (1, 1, 1), (1, 1, 1)))
    assert cm.n == 6 and cm.n_left == 3
    for x in range(3):
        assert not cm.is_chord(x, 3 + x)
    assert cm.is_chord(0, 4)
    assert len(list(cm.chords())) == 6


def test_realization_rejects_non_chord():
    cm = chord_model_of(DegreeSequence(Model.BIPARTITE, (1, 1), (1, 1)))
    with pytest.raises(PreconditionViolation):
        Realization(cm, {(0, 1)})


def test_realization_queries():
    g = initial_realization(DegreeSequence(Model.UC, (2, 2, 2, 2)))
    assert g.degree(0) == 2
    assert len(g.neighbors(0)) == 2
    for (x, y) in g.edges:
        assert g.has_edge(x, y) and g.has_edge(y, x)
    m = adjacency_matrix(g)
    assert all(m[i][j] == m[j][i] for i in range(4) for j in range(4))
    assert all(sum(row) == 2 for row in m)


def test_switch_move_validation():
    with pytest.raises(InvalidMove):
        SwitchMove(frozenset({(0, 1)}), frozenset({(0, 2)}))
    with pytest.raises(InvalidMove):
        SwitchMove(frozenset({(0, 1), (2, 3)}), frozenset({(0, 1), (1, 2)}))
    mv = SwitchMove(frozenset({(0, 1), (2, 3)}), frozenset({(0, 2), (1, 3)}))
    assert mv.kind == "switch"


def test_apply_switch_square():
    seq = DegreeSequence(Model.UC, (2, 2, 2, 2))
    cm = chord_model_of(seq)
    g = Realization(cm, {(0, 1), (1, 2), (2, 3), (0, 3)})
    mv = SwitchMove(frozenset({(0, 1), (2, 3)}), frozenset({(0, 2), (1, 3)}))
    h = apply_switch(g, mv)
    assert h.edges == frozenset({(0, 2), (1, 3), (1, 2), (0, 3)})
    assert h.degseq() == seq


def test_edge_list_roundtrip(tmp_path):
    for text in ("uc: 3 2 2 2 1", "bip: 2 2 1 / 2 2 1", "dir: 2:1 1:2 1:1"):
        seq = parse_sequence_text(text)
        g = initial_realization(seq)
        p = tmp_path / "g.edges"
        write_edge_list(g, p)
        assert read_edge_list(seq, p) == g


def test_edge_list_rejects(tmp_path):
    seq = parse_sequence_text("uc: 2 2 2 2")
    p = tmp_path / "bad.edges"
    p.write_text("0 1\n0 1\n")
    with pytest.raises(ParseError):
        read_edge_list(seq, p)
    p.write_text("0 1 2\n")
    with pytest.raises(ParseError):
        read_edge_list(seq, p)
    p.write_text("0 1\n")     # degrees do not match
    with pytest.raises(ParseError):
        read_edge_list(seq, p)


def test_json_roundtrip(tmp_path):
    for text in ("uc: 3 2 2 2 1", "bip: 2 2 1 / 2 2 1", "dir: 2:1 1:2 1:1"):
        seq = parse_sequence_text(text)
        g = initial_realization(seq)
        assert from_json_dict(to_json_dict(g)) == g
        p = tmp_path / "g.json"
        write_json(g, p)
        assert read_json(p) == g
    with pytest.raises(ParseError):
        from_json_dict({"model": "uc", "edges": []})


def test_directed_arcs_labels():
    # a vertex of prescribed degree zero keeps its original label in arcs
    seq = DegreeSequence(Model.DIRECTED, (1, 0, 1), (1, 0, 1))
    g = initial_realization(seq)
    arcs = g.directed_arcs()
    assert set(a for a, _ in arcs) == {0, 2}
    assert all(x != y for x, y in arcs)
    with pytest.raises(ModelMismatch):
        initial_realization(parse_sequence_text("uc: 2 2 2 2")).directed_arcs()


def test_realization_from_pairs_directed_zero_degree():
    seq = DegreeSequence(Model.DIRECTED, (1, 0, 1), (1, 0, 1))
    with pytest.raises(ParseError):
        realization_from_pairs(seq, [(0, 1), (2, 0)])
