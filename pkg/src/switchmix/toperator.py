"""Interval-reversal operator on closed trails.

A closed trail with an odd slot count mu (the start vertex occupies both
slot 1 and slot mu) carries a permutation of the slots and a green/red
coloring of the mu-1 gaps between consecutive slots.  Index pairs holding
the same vertex at the same parity are eligible reversals.  Repeatedly
reversing the selected stretch and recoloring it red carves the trail into
primitive alternating circuits, one per effective step.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInvariant, InvalidCircuit, NonTermination
from .redblue import Trail, is_primitive


@dataclass(frozen=True)
class TrailState:
    mu: int
    elig: frozenset          # sorted (x, y) slot pairs, x < y
    perm: tuple[int, ...]    # perm[k-1] is the slot mapped to position k
    red: frozenset           # red gap indices, subset of 1..mu-1

    def pi(self, k: int) -> int:
        return self.perm[k - 1]

    def is_green(self, gap: int) -> bool:
        return gap not in self.red


def closed_verts(trail) -> tuple[int, ...]:
    """Explicit closed slot list v_1..v_mu with v_mu = v_1."""
    if isinstance(trail, Trail):
        if not trail.closed:
            raise InvalidCircuit("trail is not closed")
        return trail.verts + (trail.verts[0],)
    verts = tuple(trail)
    if len(verts) < 3:
        raise InvalidCircuit("trail too short")
    if verts[0] != verts[-1]:
        raise InvalidCircuit("vertex list does not close")
    return verts


def eligible_reversals(trail) -> frozenset:
    """All slot pairs {x, y} with equal vertex and equal parity."""
    verts = closed_verts(trail)
    mu = len(verts)
    if mu % 2 == 0:
        raise InvalidCircuit("closed trail must have an odd slot count")
    elig = _elig_of(verts)
    _check_cliques(elig)
    return elig


def _elig_of(verts) -> frozenset:
    by_vertex: dict[tuple[int, int], list[int]] = {}
    for k, v in enumerate(verts, start=1):
        by_vertex.setdefault((v, k % 2), []).append(k)
    pairs = set()
    for slots in by_vertex.values():
        for a in range(len(slots)):
            for b in range(a + 1, len(slots)):
                pairs.add((slots[a], slots[b]))
    return frozenset(pairs)


def _check_cliques(elig):
    adj: dict[int, set[int]] = {}
    for x, y in elig:
        adj.setdefault(x, set()).add(y)
        adj.setdefault(y, set()).add(x)
    for x, nbrs in adj.items():
        for y in nbrs:
            if adj[y] - {x} != nbrs - {y}:
                raise InternalInvariant("eligible pairs do not form cliques")


def initial_state(trail) -> TrailState:
    verts = closed_verts(trail)
    mu = len(verts)
    return TrailState(mu, eligible_reversals(verts), tuple(range(1, mu + 1)), frozenset())


def _a(red, k: int) -> int:
    while k > 1 and (k - 1) in red:
        k -= 1
    return k


def _b(red, mu: int, k: int) -> int:
    while k < mu and k in red:
        k += 1
    return k


def select_reversal(ts: TrailState):
    """The acting pair (i, j): minimal j, then maximal i below it."""
    in_elig = lambda p, q: (min(p, q), max(p, q)) in ts.elig
    best_j = None
    for jp in range(2, ts.mu + 1):
        if (jp - 1) in ts.red:
            continue
        for ip in range(1, jp):
            if ip in ts.red:
                continue
            if in_elig(ts.pi(ip), ts.pi(jp)):
                best_j = jp
                break
        if best_j is not None:
            break
    if best_j is None:
        return None
    j = best_j
    i = max(
        ip
        for ip in range(1, j)
        if ip not in ts.red and in_elig(ts.pi(ip), ts.pi(j))
    )
    return (i, j)


def t_step(ts: TrailState) -> TrailState:
    """One reversal step; fixed points map to themselves."""
    sel = select_reversal(ts)
    if sel is None:
        return ts
    i, j = sel
    red, mu = ts.red, ts.mu
    ai = _a(red, i)
    bj = _b(red, mu, j)
    lar = lambda m: _a(red, m) + _b(red, mu, m) - m
    perm = list(ts.perm)
    for k in range(ai, bj + 1):
        perm[k - 1] = ts.perm[lar(ai + bj - k) - 1]
    new = TrailState(mu, ts.elig, tuple(perm), red | frozenset(range(ai, bj)))
    _check_state(new)
    return new


def _check_state(ts: TrailState):
    for k in range(1, ts.mu + 1):
        if ts.pi(k) % 2 != k % 2:
            raise InternalInvariant("permutation breaks slot parity")
    # endpoints of every maximal red run must be an eligible pair
    gap = 1
    while gap < ts.mu:
        if gap in ts.red:
            start = gap
            while gap in ts.red:
                gap += 1
            pair = (min(ts.pi(start), ts.pi(gap)), max(ts.pi(start), ts.pi(gap)))
            if pair not in ts.elig:
                raise InternalInvariant("red run endpoints not eligible")
        else:
            gap += 1


def greenify(ts: TrailState) -> TrailState:
    return TrailState(ts.mu, ts.elig, ts.perm, frozenset())


def trajectory(ts: TrailState):
    """States up to and including the first fixed point."""
    out = [ts]
    for _ in range(ts.mu + 1):
        nxt = t_step(out[-1])
        if nxt == out[-1]:
            return out
        out.append(nxt)
    raise NonTermination("reversal steps exceeded the slot count")


def roundtrip(ts0: TrailState, r: int):
    """Run r steps, reset the coloring, then count steps to restore pi.

    Returns (w, g): the step count w and the coloring g at the restoring
    state.  Guarded at mu^2 iterations.
    """
    if ts0.red:
        raise InvalidCircuit("roundtrip expects an all-green start state")
    cur = ts0
    for _ in range(r):
        cur = t_step(cur)
    cur = greenify(cur)
    target = ts0.perm
    w = 0
    while cur.perm != target:
        nxt = t_step(cur)
        if nxt == cur:
            raise NonTermination("fixed point before permutation was restored")
        cur = nxt
        w += 1
        if w > ts0.mu * ts0.mu:
            raise NonTermination("restore witness exceeded mu^2")
    return w, cur.red


@dataclass(frozen=True)
class TRound:
    index: int
    state_before: TrailState
    i: int
    j: int
    a_i: int
    b_j: int
    window_greens: tuple[int, ...]
    circuit: Trail


@dataclass(frozen=True)
class DecompRun:
    trail: Trail
    verts: tuple[int, ...]   # v_1..v_mu, explicit closure
    mu: int
    rounds: tuple[TRound, ...]
    final: TrailState

    def vert(self, x: int) -> int:
        return self.verts[x - 1]

    def gap_edge(self, x: int) -> tuple[int, int]:
        a, b = self.vert(x), self.vert(x + 1)
        return (min(a, b), max(a, b))

    def gap_color(self, x: int) -> bool:
        """True when the gap-x edge has the trail's red color."""
        return self.trail.first_red == (x % 2 == 1)

    def swept_edges(self, r: int) -> frozenset:
        """Edges at red gaps of the round-r start coloring (r >= 1)."""
        red = self.rounds[r - 1].state_before.red if r <= len(self.rounds) else self.final.red
        return frozenset(self.gap_edge(x) for x in red)

    def state_labels(self, ts: TrailState) -> tuple[int, ...]:
        out = tuple(self.vert(ts.pi(x)) for x in range(1, self.mu))
        if self.vert(ts.pi(self.mu)) != out[0]:
            raise InternalInvariant("permuted trail does not close")
        return out


def decompose_rounds(t: Trail) -> DecompRun:
    """Run the operator from (identity, all-green), extracting one
    primitive circuit per effective step."""
    verts = closed_verts(t)
    mu = len(verts)
    ts = initial_state(verts)
    rounds = []
    seen_edges: set = set()
    r = 0
    prev_j = 0
    while True:
        sel = select_reversal(ts)
        if sel is None:
            break
        r += 1
        if r > mu:
            raise NonTermination("more effective steps than slots")
        i, j = sel
        if j <= prev_j:
            raise InternalInvariant("selected j failed to increase")
        prev_j = j
        greens = tuple(x for x in range(i, j) if x not in ts.red)
        circ_verts = tuple(verts[x - 1] for x in greens)
        first = t.first_red == (greens[0] % 2 == 1)
        circuit = Trail(circ_verts, first, closed=True)
        if not is_primitive(circuit):
            raise InternalInvariant("extracted circuit is not primitive")
        for e, _ in circuit.edges():
            if e in seen_edges:
                raise InternalInvariant("circuit overlaps an earlier one")
            seen_edges.add(e)
        nxt = t_step(ts)
        rounds.append(TRound(r, ts, i, j, _a(ts.red, i), _b(ts.red, mu, j), greens, circuit))
        ts = nxt
    if seen_edges != set(t.edge_set()):
        raise InternalInvariant("circuits do not partition the trail edges")
    return DecompRun(t, verts, mu, tuple(rounds), ts)


def primitive_decompose(t: Trail) -> list[Trail]:
    return [rd.circuit for rd in decompose_rounds(t).rounds]


def trace_rounds(run: DecompRun) -> list[dict]:
    return [
        {
            "r": rd.index,
            "i": rd.i,
            "j": rd.j,
            "a": rd.a_i,
            "b": rd.b_j,
            "red_interval": [rd.a_i, rd.b_j],
            "circuit": list(rd.circuit.verts),
        }
        for rd in run.rounds
    ]


def _labels_state(labels) -> TrailState:
    verts = tuple(labels) + (labels[0],)
    mu = len(verts)
    if mu % 2 == 0:
        raise InvalidCircuit("label tuple does not describe a closed trail")
    return TrailState(mu, _elig_of(verts), tuple(range(1, mu + 1)), frozenset())


def relative_apply(labels, w: int) -> tuple[int, ...]:
    """Labels after w steps of a fresh run started from the given trail."""
    verts = tuple(labels) + (labels[0],)
    ts = _labels_state(labels)
    cur = ts
    for _ in range(w):
        cur = t_step(cur)
    return tuple(verts[cur.pi(x) - 1] for x in range(1, ts.mu))


def relative_witness(labels, target) -> int:
    """Minimal step count carrying the given trail onto the target labels."""
    labels, target = tuple(labels), tuple(target)
    verts = labels + (labels[0],)
    ts = _labels_state(labels)
    cur = ts
    w = 0
    while True:
        got = tuple(verts[cur.pi(x) - 1] for x in range(1, ts.mu))
        if got == target:
            return w
        nxt = t_step(cur)
        if nxt == cur:
            raise NonTermination("fixed point before reaching the target trail")
        cur = nxt
        w += 1
        if w > ts.mu * ts.mu:
            raise NonTermination("witness search exceeded mu^2")


def restricted_fixed_perm(labels) -> tuple[int, ...]:
    """Fixed-point permutation of a fresh run on an open slot window.

    The window is treated as its own reversal problem: identity start,
    all-green, eligibility recomputed from the window labels alone (no
    closure pair is added).
    """
    labels = tuple(labels)
    mu = len(labels)
    ts = TrailState(mu, _elig_of(labels), tuple(range(1, mu + 1)), frozenset())
    for _ in range(mu + 1):
        nxt = t_step(ts)
        if nxt == ts:
            return ts.perm
        ts = nxt
    raise NonTermination("restricted run failed to reach a fixed point")
