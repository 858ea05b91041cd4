"""Sequence parsing, graphicality, realization enumeration."""

from fractions import Fraction

import pytest

from switchmix.degseq import (DegreeSequence, Model, count_realizations,
                              enumerate_realizations, format_sequence,
                              graphical_bipartite_sequences,
                              graphical_directed_sequences,
                              graphical_uc_sequences, initial_realization,
                              is_graphical, load_sequence, parse_sequence_text,
                              perturbations, stability_ratio)
from switchmix.errors import CapExceeded, NotGraphical, ParseError


def test_parse_uc():
    s = parse_sequence_text("uc: 2 2 2 2")
    assert s.model is Model.UC
    assert s.a == (2, 2, 2, 2)
    assert s.b is None
    assert s.n == 4
    assert s.edge_count() == 4


def test_parse_bipartite():
    s = parse_sequence_text("bip: 2 1 1 / 2 1 1")
    assert s.model is Model.BIPARTITE
    assert s.a == (2, 1, 1)
    assert s.b == (2, 1, 1)
    assert s.n == 6
    assert s.edge_count() == 4


def test_parse_directed():
    s = parse_sequence_text("dir: 1:1 1:1 1:1")
    assert s.model is Model.DIRECTED
    assert s.a == (1, 1, 1)
    assert s.b == (1, 1, 1)


@pytest.mark.parametrize("text", [
    "2 2 2 2",              # missing prefix
    "uc: 2 x 2",            # not an integer
    "uc: -1 1",             # negative
    "bip: 1 1",             # missing side separator
    "bip: 1 / 1 / 1",       # too many separators
    "dir: 1 1",             # entries must be out:in
    "zz: 1 1",              # unknown model
    "uc:",                  # empty
])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        parse_sequence_text(text)


def test_format_roundtrip():
    for text in ("uc: 3 2 2 1", "bip: 2 1 1 / 2 2", "dir: 2:1 0:1 1:1"):
        s = parse_sequence_text(text)
        assert format_sequence(s) == text
        assert parse_sequence_text(format_sequence(s)) == s


def test_load_sequence_skips_comments(tmp_path):
    p = tmp_path / "s.txt"
    p.write_text("# prescribed degrees\n\nuc: 2 2 2 2\n")
    assert load_sequence(p) == DegreeSequence(Model.UC, (2, 2, 2, 2))
    p.write_text("uc: 1 1\nuc: 2 2 2\n")
    with pytest.raises(ParseError):
        load_sequence(p)


def test_constructor_rejects_malformed():
    with pytest.raises(ParseError):
        DegreeSequence(Model.UC, (1, 1), (1, 1))
    with pytest.raises(ParseError):
        DegreeSequence(Model.DIRECTED, (1, 1), (1,))
    with pytest.raises(ParseError):
        DegreeSequence(Model.UC, ())


def test_graphical_uc():
    assert is_graphical(DegreeSequence(Model.UC, (2, 2, 2, 2)))
    assert is_graphical(DegreeSequence(Model.UC, (3, 3, 3, 3)))
    assert not is_graphical(DegreeSequence(Model.UC, (3, 1)))
    assert not is_graphical(DegreeSequence(Model.UC, (1, 1, 1)))       # odd sum
    assert not is_graphical(DegreeSequence(Model.UC, (4, 4, 2, 1, 1)))


def test_graphical_bipartite():
    assert is_graphical(DegreeSequence(Model.BIPARTITE, (2, 1), (1, 1, 1)))
    assert not is_graphical(DegreeSequence(Model.BIPARTITE, (2, 1), (1, 1)))   # sums differ
    assert not is_graphical(DegreeSequence(Model.BIPARTITE, (3, 3), (1, 1)))   # degree too big


def test_graphical_directed():
    assert is_graphical(DegreeSequence(Model.DIRECTED, (1, 1, 1), (1, 1, 1)))
    assert not is_graphical(DegreeSequence(Model.DIRECTED, (2, 0), (1, 1)))    # no loops
    assert not is_graphical(DegreeSequence(Model.DIRECTED, (1, 0), (0, 0)))    # sums differ


def test_initial_realization_degrees():
    for text in ("uc: 3 2 2 2 1", "bip: 2 2 1 / 2 2 1", "dir: 2:1 1:2 1:1"):
        s = parse_sequence_text(text)
        g = initial_realization(s)
        assert g.degseq() == s


def test_initial_realization_rejects_nongraphical():
    with pytest.raises(NotGraphical):
        initial_realization(DegreeSequence(Model.UC, (3, 1)))


def test_enumerate_realizations_counts():
    cases = {
        "uc: 2 2 2 2": 3,
        "uc: 1 1 1 1": 3,
        "uc: 2 2 2 2 2": 12,
        "bip: 2 1 1 / 2 1 1": 5,
        "dir: 1:1 1:1 1:1": 2,
    }
    for text, want in cases.items():
        seq = parse_sequence_text(text)
        states = enumerate_realizations(seq)
        assert len(states) == want
        assert count_realizations(seq) == want
        assert len(set(states)) == want
        assert states == sorted(states, key=lambda g: g.sort_key())
        for g in states:
            assert g.degseq() == seq


def test_enumerate_cap():
    seq = parse_sequence_text("uc: 2 2 2 2 2")
    with pytest.raises(CapExceeded):
        enumerate_realizations(seq, cap=5)


def test_perturbations_directions():
    seq = parse_sequence_text("uc: 2 2 2 2")
    ups = perturbations(seq, direction="up")
    downs = perturbations(seq, direction="down")
    assert all(sum(p.seq.a) == 10 for p in ups)
    assert all(sum(p.seq.a) == 6 for p in downs)
    # up: x < y only; down additionally allows x == y
    assert len(ups) == 6
    assert len(downs) == 10


def test_stability_ratio_regular_quad():
    seq = parse_sequence_text("uc: 2 2 2 2")
    assert stability_ratio(seq) == Fraction(3)


def test_family_enumerators():
    uc4 = graphical_uc_sequences(4)
    assert DegreeSequence(Model.UC, (2, 2, 2, 2)) in uc4
    assert all(s.a == tuple(sorted(s.a, reverse=True)) for s in uc4)

    bip = graphical_bipartite_sequences(2, 2)
    assert DegreeSequence(Model.BIPARTITE, (1, 1), (1, 1)) in bip
    assert all(sum(s.a) == sum(s.b) for s in bip)

    dirs = graphical_directed_sequences(3)
    assert DegreeSequence(Model.DIRECTED, (1, 1, 1), (1, 1, 1)) in dirs
    assert all(is_graphical(s) for s in dirs)
