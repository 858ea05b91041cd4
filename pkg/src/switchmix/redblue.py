"""Two-colored symmetric-difference graphs and their trail decompositions.

The symmetric difference of two realizations is a balanced red-blue graph:
red edges come from the first graph, blue ones from the second, and the two
color degrees agree at every vertex.  A matching parameter pairs the red and
blue edges at each vertex; following partner edges decomposes the whole edge
set into closed alternating trails.  Partial matchings are allowed, in which
case some trails are open and stop at unmatched edge ends.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import InternalInvariant, InvalidMatching, Unbalanced

Edge = tuple[int, int]


def _other(e: Edge, v: int) -> int:
    return e[1] if e[0] == v else e[0]


@dataclass(frozen=True)
class Trail:
    """An alternating trail; ``verts`` lists visited vertices in order.

    For a closed trail ``verts`` has one entry per edge (the return to the
    start is implicit).  For an open trail ``verts`` has one more entry than
    there are edges.  ``first_red`` is the color of the first edge.
    """

    verts: tuple[int, ...]
    first_red: bool
    closed: bool = True

    def __len__(self) -> int:
        return len(self.verts) if self.closed else len(self.verts) - 1

    def edges(self):
        """Yield (edge, is_red) pairs in traversal order."""
        m = len(self)
        red = self.first_red
        for k in range(m):
            a = self.verts[k]
            b = self.verts[(k + 1) % len(self.verts)]
            yield (min(a, b), max(a, b)), red
            red = not red

    def edge_set(self) -> frozenset:
        return frozenset(e for e, _ in self.edges())


def trail_of(t: Trail) -> tuple[int, ...]:
    """Closed-walk vertex tuple: for closed trails the start is repeated."""
    if t.closed:
        return t.verts + (t.verts[0],)
    return t.verts


def is_primitive(t: Trail) -> bool:
    """No vertex more than twice, and repeats only at odd distance.

    Equivalent to: the circuit admits no split at an even-distance repeat.
    """
    if not t.closed:
        return False
    m = len(t.verts)
    pos: dict[int, list[int]] = {}
    for k, v in enumerate(t.verts):
        pos.setdefault(v, []).append(k)
    for occ in pos.values():
        if len(occ) > 2:
            return False
        if len(occ) == 2 and (occ[1] - occ[0]) % 2 == 0:
            return False
    return m % 2 == 0


class RedBlueGraph:
    """Edge-colored graph with disjoint red and blue simple edge sets."""

    __slots__ = ("red", "blue", "_inc")

    def __init__(self, red, blue):
        red = frozenset((min(a, b), max(a, b)) for a, b in red)
        blue = frozenset((min(a, b), max(a, b)) for a, b in blue)
        if red & blue:
            raise Unbalanced("red and blue edge sets overlap")
        for a, b in red | blue:
            if a == b:
                raise Unbalanced("loop edge in red-blue graph")
        self.red = red
        self.blue = blue
        inc: dict[int, tuple[list, list]] = {}
        for e in red:
            for v in e:
                inc.setdefault(v, ([], []))[0].append(e)
        for e in blue:
            for v in e:
                inc.setdefault(v, ([], []))[1].append(e)
        for v, (r, b) in inc.items():
            r.sort()
            b.sort()
        self._inc = inc

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self._inc))

    def red_at(self, v: int):
        return tuple(self._inc.get(v, ((), ()))[0])

    def blue_at(self, v: int):
        return tuple(self._inc.get(v, ((), ()))[1])

    def is_balanced(self) -> bool:
        return all(len(r) == len(b) for r, b in self._inc.values())

    def count_matchings(self) -> int:
        """Number of ways to pair red with blue edges at every vertex."""
        if not self.is_balanced():
            raise Unbalanced("color degrees differ at some vertex")
        out = 1
        for r, _ in self._inc.values():
            out *= math.factorial(len(r))
        return out

    def enumerate_matchings(self):
        """Yield all vertex-local red-blue pairings as triple sets.

        A matching is a frozenset of (vertex, red_edge, blue_edge) triples.
        The iteration order is deterministic: vertices ascending, blue-side
        permutations in lexicographic order.
        """
        if not self.is_balanced():
            raise Unbalanced("color degrees differ at some vertex")
        verts = self.vertices
        choices = []
        for v in verts:
            r = self.red_at(v)
            opts = [tuple(zip(r, perm)) for perm in itertools.permutations(self.blue_at(v))]
            choices.append(opts)
        for combo in itertools.product(*choices):
            yield frozenset(
                (v, re, be) for v, local in zip(verts, combo) for re, be in local
            )

    def matching_by_index(self, index: int):
        """Mixed-radix selection consistent with enumerate_matchings order."""
        total = self.count_matchings()
        if not 0 <= index < total:
            raise InvalidMatching(f"matching index {index} out of range [0, {total})")
        out = []
        for v in reversed(self.vertices):
            r = self.red_at(v)
            radix = math.factorial(len(r))
            index, rem = divmod(index, radix)
            perms = list(itertools.permutations(self.blue_at(v)))
            out.extend((v, re, be) for re, be in zip(r, perms[rem]))
        return frozenset(out)

    def canonical_matching(self):
        return self.matching_by_index(0)


def symmetric_difference(g, h) -> RedBlueGraph:
    """Red: edges of g missing from h.  Blue: edges of h missing from g."""
    eg, eh = frozenset(g.edges), frozenset(h.edges)
    return RedBlueGraph(eg - eh, eh - eg)


def _matching_map(s):
    """Partner lookup: (vertex, edge) -> opposite-color edge, both ways."""
    m: dict[tuple[int, Edge], Edge] = {}
    for v, re, be in s:
        if (v, re) in m or (v, be) in m:
            raise InvalidMatching(f"edge matched twice at vertex {v}")
        m[(v, re)] = be
        m[(v, be)] = re
    return m


def decompose(rb: RedBlueGraph, s) -> tuple[Trail, ...]:
    """Split the edge set into trails by following matched partners.

    With a perfect matching every trail is closed.  Unmatched (vertex, edge)
    ends break the walk there, producing open trails.  Output is ordered by
    each trail's lexicographically smallest edge; closed trails start at the
    smaller endpoint of that edge, open trails at their smaller endpoint end.
    """
    smap = _matching_map(s)
    all_edges = sorted(rb.red | rb.blue)
    for v, re, be in s:
        for e in (re, be):
            if e not in rb.red and e not in rb.blue:
                raise InvalidMatching(f"matched edge {e} not in the graph")
        if not (re in rb.red and be in rb.blue):
            raise InvalidMatching(f"triple at {v} does not pair red with blue")
        if v not in re or v not in be:
            raise InvalidMatching(f"triple at {v} uses edges not incident to it")
    seen: set[Edge] = set()
    out = []
    for e0 in all_edges:
        if e0 in seen:
            continue
        out.append(_walk(rb, smap, e0, seen))
    return tuple(out)


def _walk(rb, smap, e0, seen) -> Trail:
    # Walk forward from e0 until the trail closes or hits an unmatched end.
    edges = [e0]
    v = _other(e0, min(e0))
    open_tail = None
    while True:
        nxt = smap.get((v, edges[-1]))
        if nxt is None:
            open_tail = v
            break
        if nxt == e0:
            if v != min(e0):
                raise InternalInvariant("trail closed at the wrong endpoint")
            break
        edges.append(nxt)
        v = _other(nxt, v)
    if open_tail is None:
        verts = [min(e0)]
        for e in edges:
            verts.append(_other(e, verts[-1]))
        if verts.pop() != verts[0]:
            raise InternalInvariant("closed trail does not return to start")
        t = Trail(tuple(verts), e0 in rb.red, closed=True)
    else:
        # e0's other end may extend backwards; walk the reverse direction too.
        back = []
        v = min(e0)
        cur = e0
        while True:
            nxt = smap.get((v, cur))
            if nxt is None:
                break
            back.append(nxt)
            cur = nxt
            v = _other(nxt, v)
        full = list(reversed(back)) + edges
        start = v
        verts = [start]
        for e in full:
            verts.append(_other(e, verts[-1]))
        fr = full[0] in rb.red
        fwd = tuple(verts)
        rev = tuple(reversed(verts))
        if rev < fwd:
            lr = (full[-1] in rb.red)
            t = Trail(rev, lr, closed=False)
        else:
            t = Trail(fwd, fr, closed=False)
    for e, _ in t.edges():
        if e in seen:
            raise InternalInvariant("edge visited twice during decomposition")
        seen.add(e)
    return t


def induced_matching(t: Trail) -> frozenset:
    """The vertex-local pairing a trail induces between its own edges.

    Consecutive edges share a vertex and have opposite colors; each such
    incidence contributes one (vertex, red_edge, blue_edge) triple.  For
    closed trails the wrap-around pair at the start vertex is included.
    """
    es = list(t.edges())
    m = len(es)
    pairs = []
    last = m if t.closed else m - 1
    for k in range(last):
        (e1, r1) = es[k]
        (e2, r2) = es[(k + 1) % m]
        v = t.verts[(k + 1) % len(t.verts)]
        if r1 == r2:
            raise InvalidMatching("consecutive edges have equal colors")
        red_e, blue_e = (e1, e2) if r1 else (e2, e1)
        pairs.append((v, red_e, blue_e))
    return frozenset(pairs)
