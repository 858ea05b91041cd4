"""Shared fixtures: the exhaustively audited instance families.

The heavyweight fixture walks every canonical path of every desk-scale
instance once; the per-criterion tests then read off the counters instead
of repeating the pass.
"""

import time
from dataclasses import dataclass

import pytest

from switchmix.degseq import (DegreeSequence, graphical_bipartite_sequences,
                              graphical_directed_sequences,
                              graphical_uc_sequences)
from switchmix.mixflow import (InstanceAudit, MarkovGraph, audit_instance,
                               build_markov_graph)


def family_sequences() -> list[DegreeSequence]:
    """Sorted representatives: UC n <= 6, bipartite n1+n2 <= 7, directed n <= 4."""
    out = []
    for n in range(2, 7):
        out.extend(graphical_uc_sequences(n))
    for nl in range(1, 7):
        for nr in range(nl, 8 - nl):
            out.extend(graphical_bipartite_sequences(nl, nr))
    for n in range(2, 5):
        out.extend(graphical_directed_sequences(n))
    return out


@dataclass
class FamilyRecord:
    seq: DegreeSequence
    mg: MarkovGraph
    audit: InstanceAudit


@pytest.fixture(scope="session")
def family():
    """(records, phase seconds) for the full instance families."""
    records = []
    t_build = t_audit = 0.0
    for seq in family_sequences():
        t0 = time.perf_counter()
        mg = build_markov_graph(seq)
        t_build += time.perf_counter() - t0
        t0 = time.perf_counter()
        audit = audit_instance(mg)
        t_audit += time.perf_counter() - t0
        records.append(FamilyRecord(seq, mg, audit))
    return records, {"build": t_build, "audit": t_audit}
