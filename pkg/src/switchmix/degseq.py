"""Degree sequences: parsing, graphicality checks, exact enumeration.

A sequence is one of three kinds: plain (one degree per vertex), bipartite
(one list per side) or directed (out/in pairs).  Text form carries a model
prefix, e.g. ``uc: 2 2 2 2``, ``bip: 2 1 / 1 2``, ``dir: 1:1 2:0 0:2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import CapExceeded, NotGraphical, ParseError


class Model(Enum):
    UC = "uc"
    BIPARTITE = "bip"
    DIRECTED = "dir"


@dataclass(frozen=True)
class DegreeSequence:
    """A prescribed degree sequence.

    ``a`` holds the degrees (plain model), left-side degrees (bipartite) or
    out-degrees (directed); ``b`` holds right-side respectively in-degrees
    and must be None for the plain model.  Parity and class-sum conditions
    are deliberately not constructor errors; a sequence violating them is
    simply not graphical.
    """

    model: Model
    a: tuple[int, ...]
    b: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        if self.b is not None:
            object.__setattr__(self, "b", tuple(self.b))
        for d in self.a + (self.b or ()):
            if not isinstance(d, int) or d < 0:
                raise ParseError(f"degrees must be non-negative integers, got {d!r}")
        if self.model is Model.UC:
            if self.b is not None:
                raise ParseError("plain sequences take a single degree list")
            if not self.a:
                raise ParseError("empty degree sequence")
        elif self.model is Model.BIPARTITE:
            if self.b is None or not self.a or not self.b:
                raise ParseError("bipartite sequences need a degree list per side")
        elif self.model is Model.DIRECTED:
            if self.b is None or len(self.a) != len(self.b) or not self.a:
                raise ParseError("directed sequences need out and in lists of equal length")
        else:
            raise ParseError(f"unknown model {self.model!r}")

    @property
    def n(self) -> int:
        if self.model is Model.BIPARTITE:
            return len(self.a) + len(self.b)
        return len(self.a)

    @property
    def n_left(self) -> int:
        return len(self.a)

    @property
    def n_right(self) -> int:
        return len(self.b) if self.b is not None else 0

    def edge_count(self) -> int:
        """Number of edges (arcs) in any realization."""
        if self.model is Model.UC:
            return sum(self.a) // 2
        return sum(self.a)


def parse_sequence_text(text: str) -> DegreeSequence:
    s = text.strip()
    head, sep, rest = s.partition(":")
    if not sep:
        raise ParseError("missing model prefix (expected uc:, bip: or dir:)")
    head = head.strip().lower()
    if head == "uc":
        return DegreeSequence(Model.UC, _ints(rest.split()))
    if head == "bip":
        if rest.count("/") != 1:
            raise ParseError("bipartite text needs exactly one '/' between the sides")
        left, _, right = rest.partition("/")
        return DegreeSequence(Model.BIPARTITE, _ints(left.split()), _ints(right.split()))
    if head == "dir":
        toks = rest.split()
        if not toks:
            raise ParseError("empty degree sequence")
        outs, ins = [], []
        for tok in toks:
            o, sep2, i = tok.partition(":")
            if not sep2:
                raise ParseError(f"directed entries look like out:in, got {tok!r}")
            outs.append(_int(o))
            ins.append(_int(i))
        return DegreeSequence(Model.DIRECTED, tuple(outs), tuple(ins))
    raise ParseError(f"unknown model prefix {head!r}")


def format_sequence(seq: DegreeSequence) -> str:
    """Inverse of parse_sequence_text."""
    if seq.model is Model.UC:
        return "uc: " + " ".join(map(str, seq.a))
    if seq.model is Model.BIPARTITE:
        return "bip: %s / %s" % (" ".join(map(str, seq.a)), " ".join(map(str, seq.b)))
    return "dir: " + " ".join(f"{o}:{i}" for o, i in zip(seq.a, seq.b))


def load_sequence(path) -> DegreeSequence:
    """Read a sequence file: one sequence line, '#' comments and blanks allowed."""
    lines = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if line and not line.startswith("#"):
                lines.append(line)
    if len(lines) != 1:
        raise ParseError(f"expected exactly one sequence line in {path!s}, found {len(lines)}")
    return parse_sequence_text(lines[0])


def _int(tok: str) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"not an integer: {tok!r}") from None
    if v < 0:
        raise ParseError(f"negative degree: {v}")
    return v


def _ints(tokens) -> tuple[int, ...]:
    if not tokens:
        raise ParseError("empty degree sequence")
    return tuple(_int(t) for t in tokens)


# ---------------------------------------------------------------------------
# graphicality


def is_graphical(seq: DegreeSequence) -> bool:
    if seq.model is Model.UC:
        return erdos_gallai(seq.a)
    if sum(seq.a) != sum(seq.b):
        return False
    return _flow_realize(seq) is not None


def erdos_gallai(degrees) -> bool:
    """Classical inequality test for plain degree sequences."""
    n = len(degrees)
    if sum(degrees) % 2:
        return False
    d = sorted(degrees, reverse=True)
    if d and d[0] > n - 1:
        return False
    for k in range(1, n + 1):
        if sum(d[:k]) > k * (k - 1) + sum(min(x, k) for x in d[k:]):
            return False
    return True


def havel_hakimi_edges(degrees):
    """Greedy realization of a plain sequence; returns edge list or None."""
    rem = [[d, v] for v, d in enumerate(degrees)]
    edges = []
    while True:
        rem.sort(key=lambda t: (-t[0], t[1]))
        d0, v0 = rem[0]
        if d0 == 0:
            return edges
        if d0 > len(rem) - 1:
            return None
        targets = rem[1:1 + d0]
        if targets[-1][0] == 0:
            return None
        for t in targets:
            t[0] -= 1
            a, b = sorted((v0, t[1]))
            edges.append((a, b))
        rem[0][0] = 0


def _rep_degrees(seq, cm):
    """Prescribed degrees indexed by representation vertex."""
    if seq.model is Model.UC:
        return list(seq.a)
    if seq.model is Model.BIPARTITE:
        return list(seq.a) + list(seq.b)
    return [seq.a[x] for x in cm.left_map] + [seq.b[y] for y in cm.right_map]


def _flow_realize(seq):
    """Max-flow feasibility for bipartite/directed sequences.

    Returns (chord model, edge set in representation coordinates) when the
    sequence is graphical, else None.
    """
    import numpy as np
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import maximum_flow

    from .graph import chord_model_of

    cm = chord_model_of(seq)
    caps = _rep_degrees(seq, cm)
    nl = cm.n_left
    need = sum(caps[:nl])
    if need != sum(caps[nl:]):
        return None
    if cm.n == 0:
        return cm, frozenset()
    # node ids: 0 is the source, 1 + v for representation vertex v, last is the sink
    src, sink = 0, cm.n + 1
    rows, cols, data = [], [], []
    for v in range(nl):
        if caps[v]:
            rows.append(src)
            cols.append(1 + v)
            data.append(caps[v])
    for v in range(nl, cm.n):
        if caps[v]:
            rows.append(1 + v)
            cols.append(sink)
            data.append(caps[v])
    for (x, y) in cm.chords():
        rows.append(1 + x)
        cols.append(1 + y)
        data.append(1)
    mat = csr_matrix((np.asarray(data, dtype=np.int32), (rows, cols)),
                     shape=(sink + 1, sink + 1), dtype=np.int32)
    res = maximum_flow(mat, src, sink)
    if res.flow_value != need:
        return None
    flow = res.flow.tocoo()
    edges = set()
    for i, j, v in zip(flow.row, flow.col, flow.data):
        if v == 1 and 1 <= i <= nl and nl < j <= cm.n:
            edges.add((int(i) - 1, int(j) - 1))
    return cm, frozenset(edges)


def initial_realization(seq: DegreeSequence):
    """Some realization of the sequence, or NotGraphical."""
    from .graph import Realization, chord_model_of

    if seq.model is Model.UC:
        edges = havel_hakimi_edges(seq.a)
        if edges is None:
            raise NotGraphical(format_sequence(seq))
        return Realization(chord_model_of(seq), frozenset(edges))
    got = _flow_realize(seq)
    if got is None:
        raise NotGraphical(format_sequence(seq))
    cm, edges = got
    return Realization(cm, edges)


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _gen_edge_sets(cm, residual):
    """Yield each realization's edge set exactly once.

    The lowest-index vertex with remaining degree picks its full set of
    later partners, so distinct choice sequences give distinct graphs.
    """
    n = cm.n
    edges = []

    def rec(v):
        while v < n and residual[v] == 0:
            v += 1
        if v == n:
            yield frozenset(edges)
            return
        need = residual[v]
        cands = [w for w in range(v + 1, n) if residual[w] > 0 and cm.is_chord(v, w)]
        if len(cands) < need:
            return
        for combo in itertools.combinations(cands, need):
            residual[v] = 0
            for w in combo:
                residual[w] -= 1
            edges.extend((v, w) for w in combo)
            yield from rec(v + 1)
            del edges[len(edges) - need:]
            for w in combo:
                residual[w] += 1
            residual[v] = need

    yield from rec(0)


def enumerate_realizations(seq: DegreeSequence, cap: int | None = None):
    """All realizations of the sequence, sorted; CapExceeded past the cap."""
    from .graph import Realization, chord_model_of

    cm = chord_model_of(seq)
    out = []
    for es in _gen_edge_sets(cm, _rep_degrees(seq, cm)):
        out.append(Realization(cm, es))
        if cap is not None and len(out) > cap:
            raise CapExceeded(cap)
    out.sort(key=lambda r: r.sort_key())
    return out


def count_realizations(seq: DegreeSequence, cap: int | None = None) -> int:
    from .graph import chord_model_of

    cm = chord_model_of(seq)
    k = 0
    for _ in _gen_edge_sets(cm, _rep_degrees(seq, cm)):
        k += 1
        if cap is not None and k > cap:
            raise CapExceeded(cap)
    return k


# ---------------------------------------------------------------------------
# perturbed sequences and the stability ratio


@dataclass(frozen=True)
class Perturbation:
    x: int
    y: int
    seq: DegreeSequence


def perturbations(seq: DegreeSequence, direction: str = "up"):
    """Unit perturbations of the sequence.

    "up" adds one to two degrees: an unordered pair of distinct vertices
    (plain), one vertex per side (bipartite), or an ordered vertex pair with
    repeats allowed (directed, acting on out then in).  "down" subtracts one
    instead and additionally allows x == y for the plain model; perturbations
    that would drive a degree negative are skipped (their realization sets
    are empty).
    """
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    step = 1 if direction == "up" else -1
    out = []
    if seq.model is Model.UC:
        n = len(seq.a)
        for x in range(n):
            for y in range(x + 1 if direction == "up" else x, n):
                a = list(seq.a)
                a[x] += step
                a[y] += step
                if a[x] < 0 or a[y] < 0:
                    continue
                out.append(Perturbation(x, y, DegreeSequence(Model.UC, tuple(a))))
    elif seq.model is Model.BIPARTITE:
        for x in range(len(seq.a)):
            for y in range(len(seq.b)):
                a = list(seq.a)
                b = list(seq.b)
                a[x] += step
                b[y] += step
                if a[x] < 0 or b[y] < 0:
                    continue
                out.append(Perturbation(x, y, DegreeSequence(Model.BIPARTITE, tuple(a), tuple(b))))
    else:
        n = len(seq.a)
        for x in range(n):
            for y in range(n):
                a = list(seq.a)
                b = list(seq.b)
                a[x] += step
                b[y] += step
                if a[x] < 0 or b[y] < 0:
                    continue
                out.append(Perturbation(x, y, DegreeSequence(Model.DIRECTED, tuple(a), tuple(b))))
    return out


def stability_ratio(seq: DegreeSequence, cap: int | None = None,
                    direction: str = "up") -> Fraction:
    """(realizations of seq + of all its perturbations) / realizations of seq."""
    base = count_realizations(seq, cap)
    if base == 0:
        raise NotGraphical(format_sequence(seq))
    total = base
    for p in perturbations(seq, direction):
        total += count_realizations(p.seq, cap)
    return Fraction(total, base)


# ---------------------------------------------------------------------------
# instance families (one representative per relabeling class)


def graphical_uc_sequences(n: int):
    out = []
    for comb in itertools.combinations_with_replacement(range(n), n):
        s = DegreeSequence(Model.UC, tuple(reversed(comb)))
        if is_graphical(s):
            out.append(s)
    return out


def graphical_bipartite_sequences(n_left: int, n_right: int):
    out = []
    for ca in itertools.combinations_with_replacement(range(n_right + 1), n_left):
        a = tuple(reversed(ca))
        for cb in itertools.combinations_with_replacement(range(n_left + 1), n_right):
            b = tuple(reversed(cb))
            if sum(a) != sum(b):
                continue
            s = DegreeSequence(Model.BIPARTITE, a, b)
            if is_graphical(s):
                out.append(s)
    return out


def graphical_directed_sequences(n: int):
    out = []
    pairs = list(itertools.product(range(n), repeat=2))
    for chosen in itertools.combinations_with_replacement(pairs, n):
        a = tuple(p[0] for p in chosen)
        b = tuple(p[1] for p in chosen)
        if sum(a) != sum(b):
            continue
        s = DegreeSequence(Model.DIRECTED, a, b)
        if is_graphical(s):
            out.append(s)
    return out
