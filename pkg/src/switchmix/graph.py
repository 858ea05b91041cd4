"""Labeled realizations over a chord model.

All three graph models run through one representation: a vertex set with a
set of admissible vertex pairs ("chords").  Plain graphs admit every pair,
bipartite graphs only cross-side pairs, and directed graphs are handled as
bipartite graphs on out/in copies with the diagonal pairs forbidden (a loop
would correspond to an arc x -> x).  Out/in copies of vertices whose
out/in-degree is zero are dropped from the representation; index maps back
to the original labels are kept.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .degseq import DegreeSequence, Model
from .errors import InvalidMove, ModelMismatch, ParseError, PreconditionViolation


@dataclass(frozen=True)
class ChordModel:
    model: Model
    n: int
    n_left: int
    forbidden: frozenset
    left_map: tuple[int, ...]
    right_map: tuple[int, ...]
    orig_n: int

    def is_chord(self, x: int, y: int) -> bool:
        if x > y:
            x, y = y, x
        if x < 0 or y >= self.n or x == y:
            return False
        if self.model is Model.UC:
            return True
        return x < self.n_left <= y and (x, y) not in self.forbidden

    def chords(self):
        if self.model is Model.UC:
            yield from itertools.combinations(range(self.n), 2)
            return
        for x in range(self.n_left):
            for y in range(self.n_left, self.n):
                if (x, y) not in self.forbidden:
                    yield (x, y)

    @property
    def n_right(self) -> int:
        return self.n - self.n_left


def chord_model_of(seq: DegreeSequence) -> ChordModel:
    if seq.model is Model.UC:
        n = len(seq.a)
        return ChordModel(Model.UC, n, 0, frozenset(), (), (), n)
    if seq.model is Model.BIPARTITE:
        n1, n2 = len(seq.a), len(seq.b)
        return ChordModel(Model.BIPARTITE, n1 + n2, n1, frozenset(),
                          tuple(range(n1)), tuple(range(n2)), n1 + n2)
    n = len(seq.a)
    left = tuple(x for x in range(n) if seq.a[x] > 0)
    right = tuple(x for x in range(n) if seq.b[x] > 0)
    li = {x: i for i, x in enumerate(left)}
    ri = {x: j for j, x in enumerate(right)}
    forb = frozenset((li[x], len(left) + ri[x]) for x in range(n) if x in li and x in ri)
    return ChordModel(Model.DIRECTED, len(left) + len(right), len(left), forb, left, right, n)


def norm_edge(x: int, y: int) -> tuple[int, int]:
    return (x, y) if x <= y else (y, x)


class Realization:
    """A simple graph whose edge set lives on a chord model."""

    __slots__ = ("cm", "edges", "_key", "_hash")

    def __init__(self, cm: ChordModel, edges):
        es = set()
        for (x, y) in edges:
            e = norm_edge(x, y)
            if not cm.is_chord(*e):
                raise PreconditionViolation(f"edge {e} is not a chord of the model")
            es.add(e)
        self.cm = cm
        self.edges = frozenset(es)
        self._key = tuple(sorted(self.edges))
        self._hash = hash((cm, self._key))

    def __eq__(self, other):
        return (isinstance(other, Realization)
                and self.cm == other.cm and self.edges == other.edges)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Realization({self.cm.model.value}, {list(self._key)})"

    def sort_key(self):
        return self._key

    def has_edge(self, x: int, y: int) -> bool:
        return norm_edge(x, y) in self.edges

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def neighbors(self, v: int):
        return sorted(x + y - v for (x, y) in self.edges if v in (x, y))

    def degseq(self) -> DegreeSequence:
        cm = self.cm
        if cm.model is Model.UC:
            deg = [0] * cm.n
            for (x, y) in self.edges:
                deg[x] += 1
                deg[y] += 1
            return DegreeSequence(Model.UC, tuple(deg))
        if cm.model is Model.BIPARTITE:
            a = [0] * cm.n_left
            b = [0] * cm.n_right
            for (x, y) in self.edges:
                a[x] += 1
                b[y - cm.n_left] += 1
            return DegreeSequence(Model.BIPARTITE, tuple(a), tuple(b))
        outs = [0] * cm.orig_n
        ins = [0] * cm.orig_n
        for (x, y) in self.edges:
            outs[cm.left_map[x]] += 1
            ins[cm.right_map[y - cm.n_left]] += 1
        return DegreeSequence(Model.DIRECTED, tuple(outs), tuple(ins))

    def directed_arcs(self):
        """Arcs (x, y) meaning x -> y, in original vertex labels."""
        cm = self.cm
        if cm.model is not Model.DIRECTED:
            raise ModelMismatch("arcs are only defined for directed realizations")
        return sorted((cm.left_map[x], cm.right_map[y - cm.n_left]) for (x, y) in self.edges)


@dataclass(frozen=True)
class SwitchMove:
    """An edge exchange: remove ``removed``, add ``added``.

    Two edges a side is a plain switch (the four endpoints form an
    alternating 4-cycle); three a side is the directed-model triple
    exchange along an alternating 6-cycle.
    """

    removed: frozenset
    added: frozenset

    def __post_init__(self):
        object.__setattr__(self, "removed", frozenset(norm_edge(*e) for e in self.removed))
        object.__setattr__(self, "added", frozenset(norm_edge(*e) for e in self.added))
        if len(self.removed) not in (2, 3) or len(self.added) != len(self.removed):
            raise InvalidMove("a move exchanges two or three edges a side")
        if self.removed & self.added:
            raise InvalidMove("removed and added edges must be disjoint")

    @property
    def kind(self) -> str:
        return "switch" if len(self.removed) == 2 else "triple"


def _as_single_cycle(edge_set):
    """Cyclic vertex order if the edges form one simple cycle, else None."""
    adj = {}
    for (x, y) in edge_set:
        adj.setdefault(x, []).append(y)
        adj.setdefault(y, []).append(x)
    if len(edge_set) != len(adj) or any(len(nb) != 2 for nb in adj.values()):
        return None
    start = min(adj)
    order = []
    prev, cur = None, start
    for _ in range(len(adj)):
        order.append(cur)
        step = [w for w in adj[cur] if w != prev]
        if not step:
            return None
        prev, cur = cur, step[0]
    return order if cur == start else None


def hexagon_diagonals(order):
    """The three vertex pairs at distance 3 along a 6-cycle order."""
    return [norm_edge(order[i], order[i + 3]) for i in range(3)]


def check_move_shape(cm: ChordModel, move: SwitchMove):
    """Validate cycle structure; returns the cyclic vertex order."""
    order = _as_single_cycle(move.removed | move.added)
    if order is None or len(order) != 2 * len(move.removed):
        raise InvalidMove("removed and added edges must form one alternating cycle")
    if move.kind == "triple":
        deg = {}
        for (x, y) in move.removed:
            deg[x] = deg.get(x, 0) + 1
            deg[y] = deg.get(y, 0) + 1
        if len(deg) != 6 or any(d != 1 for d in deg.values()):
            raise InvalidMove("triple exchange needs two perfect matchings on six vertices")
        if all(cm.is_chord(*p) for p in hexagon_diagonals(order)):
            raise InvalidMove("triple exchange requires a forbidden hexagon diagonal")
    return order


def apply_switch(g: Realization, move: SwitchMove) -> Realization:
    if not move.removed <= g.edges:
        raise InvalidMove("removed edges not all present")
    if move.added & g.edges:
        raise InvalidMove("added edges not all absent")
    for e in move.added:
        if not g.cm.is_chord(*e):
            raise InvalidMove(f"added edge {e} is not a chord")
    check_move_shape(g.cm, move)
    return Realization(g.cm, (g.edges - move.removed) | move.added)


def adjacency_matrix(g: Realization):
    import numpy as np

    mat = np.zeros((g.cm.n, g.cm.n), dtype=np.int64)
    for (x, y) in g.edges:
        mat[x, y] = 1
        mat[y, x] = 1
    return mat


# ---------------------------------------------------------------------------
# IO


def write_edge_list(g: Realization, path):
    """One line per edge; directed models write original-label arcs."""
    with open(path, "w", encoding="utf-8") as fh:
        if g.cm.model is Model.DIRECTED:
            for (x, y) in g.directed_arcs():
                fh.write(f"{x} {y}\n")
        else:
            for (x, y) in sorted(g.edges):
                fh.write(f"{x} {y}\n")


def realization_from_pairs(seq: DegreeSequence, pairs) -> Realization:
    """Build a realization of ``seq`` from vertex pairs; validates degrees."""
    cm = chord_model_of(seq)
    edges = set()
    if seq.model is Model.DIRECTED:
        li = {x: i for i, x in enumerate(cm.left_map)}
        ri = {x: j for j, x in enumerate(cm.right_map)}
        for (x, y) in pairs:
            if x not in li or y not in ri:
                raise ParseError(f"arc ({x}, {y}) touches a vertex of prescribed degree zero")
            e = (li[x], cm.n_left + ri[y])
            if e in edges:
                raise ParseError(f"duplicate arc ({x}, {y})")
            edges.add(e)
    else:
        for (x, y) in pairs:
            e = norm_edge(x, y)
            if not cm.is_chord(*e):
                raise ParseError(f"pair {(x, y)} is not an admissible edge")
            if e in edges:
                raise ParseError(f"duplicate edge {(x, y)}")
            edges.add(e)
    g = Realization(cm, edges)
    if g.degseq() != seq:
        raise ParseError("edge list does not realize the given degree sequence")
    return g


def read_edge_list(seq: DegreeSequence, path) -> Realization:
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if len(toks) != 2:
                raise ParseError(f"{path!s}:{lineno}: expected two vertex labels")
            try:
                pairs.append((int(toks[0]), int(toks[1])))
            except ValueError:
                raise ParseError(f"{path!s}:{lineno}: vertex labels must be integers") from None
    return realization_from_pairs(seq, pairs)


def to_json_dict(g: Realization) -> dict:
    cm = g.cm
    if cm.model is Model.UC:
        return {"model": "uc", "n": cm.n, "edges": [list(e) for e in sorted(g.edges)]}
    if cm.model is Model.BIPARTITE:
        return {"model": "bip", "n_left": cm.n_left, "n_right": cm.n_right,
                "edges": [list(e) for e in sorted(g.edges)]}
    return {"model": "dir", "n": cm.orig_n,
            "arcs": [list(a) for a in g.directed_arcs()]}


def from_json_dict(d: dict) -> Realization:
    try:
        model = Model(d["model"])
        if model is Model.UC:
            n = int(d["n"])
            pairs = [(int(x), int(y)) for x, y in d["edges"]]
            deg = [0] * n
            for (x, y) in pairs:
                deg[x] += 1
                deg[y] += 1
            seq = DegreeSequence(Model.UC, tuple(deg))
        elif model is Model.BIPARTITE:
            n1, n2 = int(d["n_left"]), int(d["n_right"])
            pairs = [(int(x), int(y)) for x, y in d["edges"]]
            a = [0] * n1
            b = [0] * n2
            for (x, y) in pairs:
                a[x] += 1
                b[y - n1] += 1
            seq = DegreeSequence(Model.BIPARTITE, tuple(a), tuple(b))
        else:
            n = int(d["n"])
            pairs = [(int(x), int(y)) for x, y in d["arcs"]]
            outs = [0] * n
            ins = [0] * n
            for (x, y) in pairs:
                outs[x] += 1
                ins[y] += 1
            seq = DegreeSequence(Model.DIRECTED, tuple(outs), tuple(ins))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed graph object: {exc}") from None
    return realization_from_pairs(seq, pairs)


def write_json(g: Realization, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(g), fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_json(path) -> Realization:
    with open(path, "r", encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))
