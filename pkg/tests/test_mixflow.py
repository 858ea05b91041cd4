"""Exact kernels, spectra, congestion, the counting bound."""

from fractions import Fraction

import pytest

from switchmix.degseq import initial_realization, parse_sequence_text
from switchmix.errors import CapExceeded, NotGraphical
from switchmix.mixflow import (audit_instance, build_markov_graph, congestion,
                               counting_bound_check, mixing_time_bound,
                               spectral, tv_at)


def test_build_rejects_nongraphical():
    with pytest.raises(NotGraphical):
        build_markov_graph(parse_sequence_text("uc: 3 1"))
    with pytest.raises(CapExceeded):
        build_markov_graph(parse_sequence_text("uc: 2 2 2 2 2"), cap=5)


def test_square_kernel_exact():
    mg = build_markov_graph(parse_sequence_text("uc: 2 2 2 2"))
    assert mg.n_states == 3
    for i in range(3):
        assert sum(mg.p[i]) == 1
        for j in range(3):
            assert mg.p[i][j] == (Fraction(5, 6) if i == j else Fraction(1, 12))


def test_square_spectrum():
    mg = build_markov_graph(parse_sequence_text("uc: 2 2 2 2"))
    lam2, trel = spectral(mg)
    assert abs(lam2 - 0.75) < 1e-12
    assert abs(trel - 4.0) < 1e-11


def test_single_state_spectrum():
    mg = build_markov_graph(parse_sequence_text("uc: 3 1 1 1"))
    assert mg.n_states == 1
    assert spectral(mg) == (0.0, 1.0)


def test_tv_decay_closed_form():
    mg = build_markov_graph(parse_sequence_text("uc: 2 2 2 2"))
    for t in range(11):
        want = (2.0 / 3.0) * 0.75 ** t
        assert abs(tv_at(mg, t) - want) < 1e-12


def test_mixing_time_bound_values():
    mg = build_markov_graph(parse_sequence_text("uc: 2 2 2 2"))
    assert mixing_time_bound(mg, 0.1) == 14
    assert mixing_time_bound(mg, 0.01) == 23


@pytest.mark.parametrize("text,want", [
    ("uc: 2 2 2 2", Fraction(4)),
    ("uc: 2 2 2 2 2", Fraction(1305, 32)),
    ("uc: 2 2 2 1 1", Fraction(300, 7)),
    ("bip: 2 1 1 / 2 1 1", Fraction(18)),
    ("dir: 1:1 1:1 1:1", Fraction(12)),
])
def test_congestion_constants(text, want):
    rep = congestion(parse_sequence_text(text))
    assert rep.kappa == want
    assert rep.bound_ok
    assert rep.t_relax <= float(rep.kappa) + 1e-8


def test_audit_counters_square():
    mg = build_markov_graph(parse_sequence_text("uc: 2 2 2 2"))
    audit = audit_instance(mg, cross_check=3)
    assert audit.n_states == 3
    assert audit.n_paths == 6            # one matching per ordered pair
    assert audit.n_rounds == 6
    assert audit.n_steps == 6
    assert audit.max_r_verts == 0
    assert audit.flow.max_path_len == 1
    assert audit.flow.kappa == Fraction(4)


def test_counting_bound_square():
    seq = parse_sequence_text("uc: 2 2 2 2")
    z = initial_realization(seq)
    rep = counting_bound_check(seq, z)
    assert rep.ok
    assert rep.lhs == Fraction(4)
    assert rep.rhs == 4 ** 4 * rep.census
    assert rep.lhs <= rep.rhs


def test_flow_witness_is_edge_of_state_space():
    rep = congestion(parse_sequence_text("uc: 2 2 2 2 2"))
    a, b = rep.witness
    assert a != b
    assert len(rep.state_load_ratio) == rep.n_states
