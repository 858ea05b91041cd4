"""Switch sequences along primitive alternating circuits.

A primitive circuit with its edges alternating between a realization G and
its complement is swept by a fixed scan: a cornerstone vertex x1 is chosen,
the circuit is labeled x1..x_{2l} starting on a non-edge, and the scan
converts G into G ^ E(C) through at most l-1 valid switches.  Chaining the
sweeps over all circuits of a red-blue decomposition produces the canonical
path between two realizations.  For every state on such a path a compact
parameter bundle is emitted; the bundle, together with the state itself,
suffices to rebuild the endpoints and the matching that generated the path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    InternalInvariant,
    InvalidCircuit,
    ModelMismatch,
    NoBranch,
    ReconstructionMismatch,
    SwitchmixError,
)
from .graph import Model, Realization, SwitchMove, adjacency_matrix, apply_switch, norm_edge
from .redblue import RedBlueGraph, Trail, decompose, induced_matching
from .toperator import (
    DecompRun,
    decompose_rounds,
    relative_apply,
    relative_witness,
    restricted_fixed_perm,
)


# ---------------------------------------------------------------------------
# sweeping one circuit


@dataclass(frozen=True)
class SweepStep:
    """One switch of a sweep; r_set and q_set describe the resulting state."""

    move: SwitchMove
    tag: str          # switch | special1 | special2 | double1 | double2 | triple
    t2: int
    start: int
    end: int
    r_set: frozenset
    q_set: frozenset


@dataclass(frozen=True)
class SweepResult:
    circuit: tuple[int, ...]
    states: tuple[Realization, ...]
    steps: tuple[SweepStep, ...]
    special_used: bool


def _validate_circuit(g: Realization, circuit):
    xs = (None,) + tuple(circuit)
    two_l = len(circuit)
    if two_l < 4 or two_l % 2 != 0:
        raise InvalidCircuit("a circuit has an even number of at least four edges")
    pairs = []
    for i in range(1, two_l + 1):
        a, b = xs[i], xs[i + 1] if i < two_l else xs[1]
        if a == b or not g.cm.is_chord(*norm_edge(a, b)):
            raise InvalidCircuit(f"circuit pair {(a, b)} is not a chord")
        if g.has_edge(a, b) != (i % 2 == 0):
            raise InvalidCircuit("circuit must alternate non-edge, edge, ...")
        pairs.append(norm_edge(a, b))
    if len(set(pairs)) != two_l:
        raise InvalidCircuit("circuit repeats an edge")
    return xs, frozenset(pairs)


def _toggle(acc: set, e):
    if e[0] == e[1]:
        return
    if e in acc:
        acc.remove(e)
    else:
        acc.add(e)


def _gap_pairs(acc: set, xs, lo: int, hi: int):
    for i in range(lo, hi):
        _toggle(acc, norm_edge(xs[i], xs[i + 1]))


def _check_scan_invariant(e0, cur, xs, end, start, t2):
    """The standing shape of the partially swept graph at each scan stop."""
    acc: set = set()
    _gap_pairs(acc, xs, 1, end)
    _gap_pairs(acc, xs, t2 + 2, start)
    _toggle(acc, norm_edge(xs[1], xs[end]))
    _toggle(acc, norm_edge(xs[1], xs[start]))
    _toggle(acc, norm_edge(xs[1], xs[t2 + 2]))
    if (e0 ^ frozenset(acc)) != cur.edges:
        raise InternalInvariant("scan invariant violated")


def _double_branch(z: Realization, quint) -> int:
    a, b, c, d, e = quint
    if z.cm.is_chord(*norm_edge(a, d)):
        return 1 if z.has_edge(a, d) else 2
    if z.cm.is_chord(*norm_edge(b, e)):
        return 3 if z.has_edge(b, e) else 4
    raise NoBranch("neither diagonal of the local path is a chord")


def _check_after_first_double(e0, cur, xs, end, start, t2, br: int):
    a, b, d, e = xs[t2 - 2], xs[t2 - 1], xs[t2 + 1], xs[t2 + 2]
    acc: set = set()
    _gap_pairs(acc, xs, 1, end)
    if br == 1:
        _gap_pairs(acc, xs, t2 + 1, start)
        extra = [norm_edge(xs[1], a), norm_edge(a, d)]
    elif br == 2:
        _gap_pairs(acc, xs, t2 - 2, start)
        extra = [norm_edge(xs[1], e), norm_edge(a, d), norm_edge(d, e)]
    elif br == 3:
        _gap_pairs(acc, xs, t2 - 1, start)
        extra = [norm_edge(xs[1], e), norm_edge(e, b)]
    else:
        _gap_pairs(acc, xs, t2 + 2, start)
        extra = [norm_edge(xs[1], a), norm_edge(e, b), norm_edge(a, b)]
    _toggle(acc, norm_edge(xs[1], xs[end]))
    _toggle(acc, norm_edge(xs[1], xs[start]))
    for p in extra:
        _toggle(acc, p)
    if (e0 ^ frozenset(acc)) != cur.edges:
        raise InternalInvariant("graph shape after first double step is wrong")


def _check_after_second_double(e0, cur, xs, end, start, t2):
    acc: set = set()
    _gap_pairs(acc, xs, 1, end)
    _gap_pairs(acc, xs, t2 - 2, start)
    _toggle(acc, norm_edge(xs[1], xs[end]))
    _toggle(acc, norm_edge(xs[1], xs[start]))
    _toggle(acc, norm_edge(xs[1], xs[t2 - 2]))
    if (e0 ^ frozenset(acc)) != cur.edges:
        raise InternalInvariant("graph shape after second double step is wrong")


def double_step(g: Realization, x1: int, quint) -> tuple[Realization, SwitchMove]:
    """Resolve one half of a chord-assisted double exchange.

    quint lists the five consecutive circuit vertices around the current
    scan position.  The branch is picked by which diagonal of the local
    path is an admissible chord and whether it is currently an edge.
    """
    a, b, c, d, e = quint
    if g.cm.is_chord(*norm_edge(a, d)):
        if g.has_edge(a, d):
            mv = SwitchMove(removed=(norm_edge(a, d), norm_edge(x1, e)),
                            added=(norm_edge(x1, a), norm_edge(d, e)))
        else:
            mv = SwitchMove(removed=(norm_edge(a, b), norm_edge(c, d)),
                            added=(norm_edge(a, d), norm_edge(b, c)))
    elif g.cm.is_chord(*norm_edge(b, e)):
        if g.has_edge(b, e):
            mv = SwitchMove(removed=(norm_edge(b, e), norm_edge(c, d)),
                            added=(norm_edge(d, e), norm_edge(b, c)))
        else:
            mv = SwitchMove(removed=(norm_edge(x1, e), norm_edge(a, b)),
                            added=(norm_edge(x1, a), norm_edge(b, e)))
    else:
        raise NoBranch("neither diagonal of the local path is a chord")
    return apply_switch(g, mv), mv


def _first_double_q(xs, t2, br: int, end, start, diff_c) -> frozenset:
    """Circuit edges carried along with the off-circuit residue after the
    first half of a double exchange.

    The set is whatever separates the circuit part of the current
    displacement from two contiguous runs of gap edges.  Away from
    cornerstone revisits this is the single gap edge the branch displaces
    (or nothing); at a revisit the diagonals can land on far gaps and the
    difference picks those up as well.
    """
    acc: set = set()
    _gap_pairs(acc, xs, 1, end)
    lo = {1: t2 + 1, 2: t2 - 2, 3: t2 - 1, 4: t2 + 2}[br]
    _gap_pairs(acc, xs, lo, start)
    return frozenset(diff_c ^ acc)


def _anchor_sets(g: Realization, xs, two_l: int):
    """Segment boundaries (lset) and scan positions needing avoidance (mset).

    Without a second visit of the cornerstone both sets are trivial.  A
    second visit at slot r2 makes the chords from x1 to its circuit
    neighbors circuit edges themselves, so the even slots holding those two
    vertices need care.  A slot right next to r2 is covered by the
    degenerate exchange at r2.  A slot whose chord is a non-edge of G is
    served by a double pair wherever it sits.  A slot whose chord is an
    edge of G either behaves like an ordinary position (its chord has
    already been flipped when the scan arrives) or is promoted to a
    segment boundary so the chord is consumed as an anchor first.
    """
    base = {p for p in range(4, two_l + 1, 2) if g.has_edge(xs[1], xs[p])}
    r2 = next((p for p in range(4, two_l + 1, 2) if xs[p] == xs[1]), None)
    if r2 is None:
        return base, set()
    pm1 = next((p for p in range(4, two_l, 2) if xs[p] == xs[r2 - 1]), None)
    pp1 = next((p for p in range(4, two_l, 2) if xs[p] == xs[r2 + 1]), None)
    lset = base - {pp1}
    mset = {r2}
    if pm1 is not None and pm1 != r2 + 2:
        mset.add(pm1)
    if pp1 is not None and pp1 != r2 - 2:
        if pp1 < r2:
            if any(pp1 < q <= r2 for q in lset):
                lset.add(pp1)
        elif pm1 == pp1 + 2 and not any(r2 < q <= pp1 for q in lset):
            lset.add(pp1)
        else:
            mset.add(pp1)
    return lset, mset


def sweep(g: Realization, circuit) -> SweepResult:
    """Sweep an alternating circuit over g; plain and bipartite models."""
    xs, cedges = _validate_circuit(g, circuit)
    two_l = len(circuit)
    e0 = g.edges

    lset, mset = _anchor_sets(g, xs, two_l)
    if two_l not in lset or (lset & mset) or 2 in mset or two_l in mset:
        raise InternalInvariant("scan anchor sets are malformed")

    cur = g
    states = [g]
    steps = []

    def record(mv, tag, t2, start, end, qset=frozenset()):
        nonlocal cur
        cur = apply_switch(cur, mv)
        rset = frozenset((cur.edges ^ e0) - cedges) | qset
        states.append(cur)
        steps.append(SweepStep(mv, tag, t2, start, end, rset, qset))

    special = 0
    end = 2
    while end < two_l:
        start = min(p for p in lset if p > end)
        t2 = start - 2
        while t2 >= end:
            _check_scan_invariant(e0, cur, xs, end, start, t2)
            if t2 in mset:
                if xs[1] == xs[t2] and xs[t2 + 2] == xs[t2 - 1]:
                    mv = SwitchMove(
                        removed=(norm_edge(xs[t2], xs[t2 + 1]), norm_edge(xs[t2 - 2], xs[t2 - 1])),
                        added=(norm_edge(xs[t2 + 1], xs[t2 + 2]), norm_edge(xs[1], xs[t2 - 2])))
                    record(mv, "special1", t2, start, end)
                    special += 1
                elif xs[1] == xs[t2] and xs[t2 + 1] == xs[t2 - 2]:
                    mv = SwitchMove(
                        removed=(norm_edge(xs[1], xs[t2 + 2]), norm_edge(xs[t2 - 2], xs[t2 - 1])),
                        added=(norm_edge(xs[t2 + 1], xs[t2 + 2]), norm_edge(xs[t2 - 1], xs[t2])))
                    record(mv, "special2", t2, start, end)
                    special += 1
                else:
                    quint = tuple(xs[t2 - 2:t2 + 3])
                    br = _double_branch(cur, quint)
                    nxt, mv = double_step(cur, xs[1], quint)
                    cur = nxt
                    qset = _first_double_q(xs, t2, br, end, start,
                                           (cur.edges ^ e0) & cedges)
                    states.append(cur)
                    steps.append(SweepStep(mv, "double1", t2, start, end,
                                           frozenset((cur.edges ^ e0) - cedges) | qset, qset))
                    _check_after_first_double(e0, cur, xs, end, start, t2, br)
                    nxt, mv = double_step(cur, xs[1], tuple(xs[t2 - 2:t2 + 3]))
                    cur = nxt
                    states.append(cur)
                    steps.append(SweepStep(mv, "double2", t2, start, end,
                                           frozenset((cur.edges ^ e0) - cedges), frozenset()))
                    _check_after_second_double(e0, cur, xs, end, start, t2)
                t2 -= 2
            else:
                mv = SwitchMove(
                    removed=(norm_edge(xs[1], xs[t2 + 2]), norm_edge(xs[t2], xs[t2 + 1])),
                    added=(norm_edge(xs[1], xs[t2]), norm_edge(xs[t2 + 1], xs[t2 + 2])))
                record(mv, "switch", t2, start, end)
            t2 -= 2
        end = start

    if special > 1:
        raise InternalInvariant("more than one degenerate exchange in a sweep")
    if len(steps) != two_l // 2 - 1 - special:
        raise InternalInvariant("sweep produced an unexpected number of switches")
    if cur.edges != (e0 ^ cedges):
        raise InternalInvariant("sweep did not land on the far milestone")
    return SweepResult(tuple(circuit), tuple(states), tuple(steps), special > 0)


def directed_sweep(g: Realization, circuit) -> SweepResult:
    """Sweep for the directed model; forbidden diagonals are bypassed with
    triple exchanges instead of chord-assisted double steps."""
    xs, cedges = _validate_circuit(g, circuit)
    two_l = len(circuit)
    e0 = g.edges
    lset = {p for p in range(4, two_l + 1, 2) if g.has_edge(xs[1], xs[p])}
    if two_l not in lset:
        raise InternalInvariant("scan anchor sets are malformed")

    cur = g
    states = [g]
    steps = []

    def record(mv, tag, t2, start, end):
        nonlocal cur
        cur = apply_switch(cur, mv)
        states.append(cur)
        steps.append(SweepStep(mv, tag, t2, start, end,
                               frozenset((cur.edges ^ e0) - cedges), frozenset()))

    triples = 0
    end = 2
    while end < two_l:
        start = min(p for p in lset if p > end)
        t2 = start - 2
        while t2 >= end:
            _check_scan_invariant(e0, cur, xs, end, start, t2)
            if not g.cm.is_chord(*norm_edge(xs[1], xs[t2])):
                mv = SwitchMove(
                    removed=(norm_edge(xs[t2 - 2], xs[t2 - 1]), norm_edge(xs[t2], xs[t2 + 1]),
                             norm_edge(xs[t2 + 2], xs[1])),
                    added=(norm_edge(xs[1], xs[t2 - 2]), norm_edge(xs[t2 - 1], xs[t2]),
                           norm_edge(xs[t2 + 1], xs[t2 + 2])))
                record(mv, "triple", t2, start, end)
                triples += 1
                t2 -= 2
            else:
                mv = SwitchMove(
                    removed=(norm_edge(xs[1], xs[t2 + 2]), norm_edge(xs[t2], xs[t2 + 1])),
                    added=(norm_edge(xs[1], xs[t2]), norm_edge(xs[t2 + 1], xs[t2 + 2])))
                record(mv, "switch", t2, start, end)
            t2 -= 2
        end = start

    if len(steps) != two_l // 2 - 1 - triples:
        raise InternalInvariant("sweep produced an unexpected number of exchanges")
    if cur.edges != (e0 ^ cedges):
        raise InternalInvariant("sweep did not land on the far milestone")
    return SweepResult(tuple(circuit), tuple(states), tuple(steps), False)


def cornerstone_candidates(g: Realization, circuit):
    """Rotations of a circuit that can serve as sweep labelings, preferred
    candidate first: occurrences of low induced degree vertices, each
    turned so the labeling starts on a non-edge."""
    cv = tuple(circuit.verts) if isinstance(circuit, Trail) else tuple(circuit)
    vs = set(cv)
    deg = {v: sum(1 for (x, y) in g.edges if x in vs and y in vs and v in (x, y)) for v in vs}
    for p0 in sorted(range(len(cv)), key=lambda i: (deg[cv[i]], i)):
        rot = cv[p0:] + cv[:p0]
        back = (rot[0],) + tuple(reversed(rot[1:]))
        fw_ok = not g.has_edge(rot[0], rot[1])
        bw_ok = not g.has_edge(back[0], back[1])
        if fw_ok == bw_ok:
            raise InternalInvariant("circuit does not alternate at the cornerstone")
        yield rot if fw_ok else back


def choose_cornerstone(g: Realization, circuit) -> tuple[int, ...]:
    """Label a circuit for sweeping: rotate to the first vertex of minimum
    induced degree and pick the direction starting on a non-edge."""
    return next(cornerstone_candidates(g, circuit))


def oriented_sweep(g: Realization, circuit) -> tuple[tuple[int, ...], SweepResult]:
    """Sweep a circuit with the first workable cornerstone labeling.

    Candidates are tried in a fixed order, so the outcome is a
    deterministic function of the graph and the circuit alone.  If none
    succeeds, the error of the preferred candidate is re-raised.
    """
    run = directed_sweep if g.cm.model is Model.DIRECTED else sweep
    first_exc = None
    for cand in cornerstone_candidates(g, circuit):
        try:
            return cand, run(g, cand)
        except SwitchmixError as exc:
            if first_exc is None:
                first_exc = exc
    raise first_exc


# ---------------------------------------------------------------------------
# canonical paths


@dataclass(frozen=True)
class RoundRecord:
    k: int
    r: int
    base_pos: int
    oriented: tuple[int, ...]
    x1: int
    result: SweepResult


@dataclass(frozen=True)
class CanonicalPath:
    x: Realization
    y: Realization
    s: frozenset
    comps: tuple[Trail, ...]
    runs: tuple[DecompRun, ...]
    rounds: tuple[RoundRecord, ...]
    states: tuple[Realization, ...]
    locator: tuple[tuple[int, int, int], ...]

    def round_of(self, k: int, r: int) -> RoundRecord:
        for rr in self.rounds:
            if rr.k == k and rr.r == r:
                return rr
        raise InternalInvariant(f"no round ({k}, {r}) on this path")

    def moves(self):
        return [st.move for rr in self.rounds for st in rr.result.steps]


def _canonical_path(x: Realization, y: Realization, s: frozenset) -> CanonicalPath:
    if x.cm != y.cm:
        raise ModelMismatch("path endpoints live on different chord models")
    if x == y:
        if s:
            raise InvalidCircuit("equal endpoints admit only the empty matching")
        return CanonicalPath(x, y, frozenset(), (), (), (), (x,), ((0, 0, 0),))
    rb = RedBlueGraph(x.edges - y.edges, y.edges - x.edges)
    comps = decompose(rb, s)
    mins = [min(t.edge_set()) for t in comps]
    if mins != sorted(mins):
        raise InternalInvariant("components are not in edge order")
    runs = tuple(decompose_rounds(t) for t in comps)

    cur = x
    states = [x]
    rounds = []
    loc: dict[int, tuple[int, int, int]] = {}
    pos = 0
    for k, (w, run) in enumerate(zip(comps, runs), start=1):
        for r, trd in enumerate(run.rounds, start=1):
            expected = x.edges
            for i in range(k - 1):
                expected = expected ^ comps[i].edge_set()
            expected = expected ^ run.swept_edges(r)
            if cur.edges != expected:
                raise InternalInvariant("off the milestone at a round boundary")
            loc[pos] = (k, r, 0)
            oriented, res = oriented_sweep(cur, trd.circuit)
            base = pos
            for t, st in enumerate(res.states[1:], start=1):
                pos += 1
                states.append(st)
                loc[pos] = (k, r, t)
            rounds.append(RoundRecord(k, r, base, oriented, oriented[0], res))
            cur = states[-1]
    if cur != y:
        raise InternalInvariant("canonical path did not terminate at its target")
    nabla = len(x.edges ^ y.edges)
    if len(states) - 1 > nabla // 2:
        raise InternalInvariant("canonical path is longer than half the difference")
    loc[pos] = (0, 0, 0)
    locator = tuple(loc[i] for i in range(len(states)))
    return CanonicalPath(x, y, s, comps, runs, tuple(rounds), tuple(states), locator)


canonical_path = lru_cache(maxsize=4096)(_canonical_path)


# ---------------------------------------------------------------------------
# parameter bundles


@dataclass(frozen=True)
class ParamBundle:
    """Everything beyond the state itself needed to invert a path position."""

    kind: int              # 0 past the last switch, 1 at a milestone, 2 strictly inside
    x1: int
    r_set: frozenset
    w: int
    case2: bool
    glue_pick: int
    lin_pick: int
    interval_pick: int
    m_hat: tuple
    s_z: frozenset


def _m_hat(x: Realization, y: Realization, z: Realization) -> tuple:
    m = adjacency_matrix(x) + adjacency_matrix(y) - adjacency_matrix(z)
    return tuple(tuple(int(v) for v in row) for row in m)


def _swap_all(s: frozenset) -> frozenset:
    return frozenset((v, b, a) for (v, a, b) in s)


def _trail_triples(lab: tuple, zp_edges: frozenset):
    """Pairings of consecutive trail edges; non-alternating sites are
    dropped and reported separately."""
    m = len(lab)
    edges = [norm_edge(lab[p], lab[(p + 1) % m]) for p in range(m)]
    triples = set()
    sites = []
    for p in range(m):
        before = edges[p - 1]
        after = edges[p]
        b_in = before in zp_edges
        a_in = after in zp_edges
        if b_in == a_in:
            sites.append(p + 1)
        elif b_in:
            triples.add((lab[p], before, after))
        else:
            triples.add((lab[p], after, before))
    return frozenset(triples), sites


def _rotations_of(cyc: tuple):
    out = []
    for p in range(len(cyc)):
        rot = cyc[p:] + cyc[:p]
        out.append(rot)
        out.append((rot[0],) + tuple(reversed(rot[1:])))
    return out


def _lab_candidates(closed, pieces):
    """Deterministic label-sequence candidates for the active trail.

    With no open pieces the trail is one of the closed components, read
    from some start in one of two directions; otherwise the open pieces
    are glued end to end and then rotated.  Returns (glue domain, builder)."""
    if not pieces:
        cands = []
        for ci, t in enumerate(closed):
            cands.extend((ci, rot) for rot in _rotations_of(t.verts))
        return [None], lambda gi: cands
    plans = []
    rest = list(range(1, len(pieces)))
    for perm in itertools.permutations(rest):
        order = (0,) + perm
        for flips in itertools.product((0, 1), repeat=len(pieces)):
            seqs = [tuple(reversed(pieces[i])) if flips[i] else pieces[i] for i in order]
            if all(seqs[t][-1] == seqs[(t + 1) % len(seqs)][0] for t in range(len(seqs))):
                plans.append((order, flips))

    def rotations(gi):
        order, flips = plans[gi]
        seqs = [tuple(reversed(pieces[i])) if flips[i] else pieces[i] for i in order]
        glued = tuple(v for sq in seqs for v in sq[:-1])
        return [(None, rot) for rot in _rotations_of(glued)]

    return plans, rotations


def _eq1_domain(mu: int, sites):
    need = {p if p != mu else 1 for p in sites}
    out = []
    for tup in itertools.combinations_with_replacement(range(1, mu + 1), 4):
        marks = {p if p != mu else 1 for p in tup}
        if need <= marks:
            out.append(tup)
    return out


def _eq2_domain(mu: int, sites):
    need = set(sites)
    out = []
    for i in range(1, mu + 1):
        for j in range(i + 2, mu + 1):
            if need and (min(need) <= i or max(need) >= j):
                continue
            for tup in itertools.combinations_with_replacement(range(i + 1, j), 4):
                # interval ends sit mirrored inside the reversed window
                marks = {i + j - p for p in tup}
                if need <= marks:
                    out.append((i, j) + tup)
    return out


def _unreverse(seg: tuple) -> tuple:
    rho = restricted_fixed_perm(seg)
    return tuple(seg[p - 1] for p in rho)


def _edge_to_comp(comps):
    out = {}
    for ci, t in enumerate(comps):
        for e in t.edge_set():
            out[e] = ci
    return out


def _blocks(values, universe):
    """Group sorted `values` into runs that are consecutive in `universe`."""
    index = {v: i for i, v in enumerate(universe)}
    blocks = []
    for v in values:
        if blocks and index[v] == index[blocks[-1][-1]] + 1:
            blocks[-1].append(v)
        else:
            blocks.append([v])
    return blocks


def bundle_at(path: CanonicalPath, pos: int) -> ParamBundle:
    z = path.states[pos]
    if pos == len(path.states) - 1:
        return ParamBundle(0, 0, frozenset(), 0, False, 0, 0, 0,
                           _m_hat(path.x, path.y, z), _swap_all(path.s))

    k, r, t = path.locator[pos]
    rr = path.round_of(k, r)
    run = path.runs[k - 1]
    w_trail = path.comps[k - 1]
    mu = run.mu
    trd = run.rounds[r - 1]
    l_prev = run.state_labels(trd.state_before)
    w = relative_witness(l_prev, w_trail.verts)
    x1 = rr.x1
    mhat = _m_hat(path.x, path.y, z)
    e2c = _edge_to_comp(path.comps)

    if t == 0:
        rset_, zp = frozenset(), z
        lab_true = l_prev
        case2 = False
        interval_pick = 0
        i_gaps = None
    else:
        step = rr.result.steps[t - 1]
        rset_, zp = step.r_set, Realization(z.cm, z.edges ^ step.r_set)
        rset = rset_
        milestone = path.states[rr.base_pos]
        d_edges = zp.edges ^ milestone.edges
        if not d_edges:
            raise InternalInvariant("interior state collapsed onto a milestone")
        red_prev = trd.state_before.red
        greens = [g for g in range(1, mu) if g not in red_prev]
        p_d = [g for g in greens if run.gap_edge(g) in d_edges]
        if {run.gap_edge(g) for g in p_d} != d_edges:
            raise InternalInvariant("state difference leaves the circuit edges")
        blocks = _blocks(p_d, greens)
        if len(blocks) <= 2:
            case2 = False
            a, b = blocks[0][0], blocks[0][-1] + 1
            if len(blocks) == 2:
                c, d = blocks[1][0], blocks[1][-1] + 1
            else:
                c = d = b
            truth = (a, b, c, d)
            i_gaps = list(range(a, b)) + list(range(c, d))
        else:
            case2 = True
            i0, j0 = trd.i, trd.j
            win = [g for g in greens if i0 <= g < j0]
            if any(g not in win for g in p_d):
                raise InternalInvariant("difference edges outside the active window")
            comp = [g for g in win if g not in set(p_d)]
            cblocks = _blocks(comp, win)
            if len(cblocks) > 2:
                raise InternalInvariant("difference does not split into two intervals")
            if len(cblocks) == 2:
                a, b = cblocks[0][0], cblocks[0][-1] + 1
                c, d = cblocks[1][0], cblocks[1][-1] + 1
            elif len(cblocks) == 1:
                a, b = cblocks[0][0], cblocks[0][-1] + 1
                c = d = b
            else:
                a = b = c = d = i0 + 1
            truth = (i0, j0, a, b, c, d)
            i_gaps = [g for g in range(i0, a)] + [g for g in range(b, c)] + [g for g in range(d, j0)]
        if sorted(g for g in i_gaps if g in set(greens)) != p_d:
            raise InternalInvariant("interval form does not reproduce the difference")

        lab = list(l_prev)
        if not case2:
            a, b, c, d = truth
            for lo, hi in ((a, b), (c, d)):
                for p in range(lo, min(hi, mu - 1) + 1):
                    lab[p - 1] = run.vert(p)
                if hi == mu and run.vert(mu) != lab[0]:
                    raise InternalInvariant("window closure mismatch")
        else:
            i0, j0, a, b, c, d = truth
            for p in range(i0, j0 + 1):
                xo = i0 + j0 - p
                if a < xo < b or c < xo < d:
                    val = l_prev[xo - 1] if xo < mu else l_prev[0]
                else:
                    val = run.vert(xo)
                if p < mu:
                    lab[p - 1] = val
                elif val != lab[0]:
                    raise InternalInvariant("window closure mismatch")
        lab_true = tuple(lab)
        interval_pick = -1  # fixed below once the domain is known

    wk_triples, sites = _trail_triples(lab_true, zp.edges)
    if t == 0 and sites:
        raise InternalInvariant("milestone trail fails to alternate")
    if len(sites) > 4 or len(sites) % 2 != 0:
        raise InternalInvariant("too many non-alternating sites")

    s_by_comp: dict[int, set] = {}
    for tri in path.s:
        s_by_comp.setdefault(e2c[tri[1]], set()).add(tri)
    parts = set(wk_triples)
    for ci in range(len(path.comps)):
        if ci == k - 1:
            continue
        tris = s_by_comp.get(ci, set())
        parts |= {(v, b_, a_) for (v, a_, b_) in tris} if ci < k - 1 else tris
    s_z = frozenset(parts)

    nabla = path.x.edges ^ path.y.edges
    rb_z = RedBlueGraph(nabla & zp.edges, nabla - zp.edges)
    comps_z = decompose(rb_z, s_z)
    closed = [t_ for t_ in comps_z if t_.closed]
    pieces = [t_.verts for t_ in comps_z if not t_.closed]

    glue_domain, rotations = _lab_candidates(closed, pieces)
    glue_pick = lin_pick = -1
    for gi in range(len(glue_domain)):
        for li, (_, lab_cand) in enumerate(rotations(gi)):
            if lab_cand == lab_true:
                glue_pick, lin_pick = gi, li
                break
        if lin_pick >= 0:
            break
    if lin_pick < 0:
        raise InternalInvariant("true trail labels missing from the candidate set")

    if t == 0:
        return ParamBundle(1, x1, frozenset(), w, False, glue_pick, lin_pick, 0, mhat, s_z)

    domain = _eq2_domain(mu, sites) if case2 else _eq1_domain(mu, sites)
    try:
        interval_pick = domain.index(truth)
    except ValueError:
        raise InternalInvariant("true interval boundaries missing from the domain")
    return ParamBundle(2, x1, rset, w, case2, glue_pick, lin_pick, interval_pick, mhat, s_z)


def bundle(path: CanonicalPath, z: Realization) -> ParamBundle:
    for pos, st in enumerate(path.states):
        if st == z:
            return bundle_at(path, pos)
    raise ReconstructionMismatch("state does not lie on the path")


# ---------------------------------------------------------------------------
# inverting a bundle


def _rebuild_s(closed, wk_trail: Trail, zp_edges: frozenset):
    """Matching for the original decomposition: the active trail contributes
    its own pairings; earlier components had their edge roles swapped."""
    wk_edges = wk_trail.edge_set()
    wk_min = min(wk_edges)
    out = set(induced_matching(wk_trail))
    for t in closed:
        if t.edge_set() == wk_edges:
            continue
        fr = norm_edge(t.verts[0], t.verts[1]) in zp_edges
        tris = induced_matching(Trail(t.verts, fr))
        if min(t.edge_set()) < wk_min:
            out |= {(v, b_, a_) for (v, a_, b_) in tris}
        else:
            out |= set(tris)
    return frozenset(out)


def _verified(z: Realization, b: ParamBundle, x: Realization, y: Realization,
              s: frozenset) -> bool:
    try:
        cp = canonical_path(x, y, s)
    except SwitchmixError:
        return False
    for pos, st in enumerate(cp.states):
        if st == z:
            try:
                if bundle_at(cp, pos) == b:
                    return True
            except SwitchmixError:
                continue
    return False


def reconstruct(z: Realization, b: ParamBundle):
    """Invert a parameter bundle back to (x, y, s); the result is checked by
    rebuilding the path and the bundle before it is returned."""
    az = adjacency_matrix(z)
    n = z.cm.n
    nabla = frozenset(
        (i, j) for i in range(n) for j in range(i + 1, n)
        if b.m_hat[i][j] + az[i, j] == 1)

    if b.kind == 0:
        y = z
        x = Realization(z.cm, z.edges ^ nabla)
        s = _swap_all(b.s_z)
        if not _verified(z, b, x, y, s):
            raise ReconstructionMismatch("final-state bundle failed verification")
        return x, y, s

    zp = Realization(z.cm, z.edges ^ b.r_set)
    rb_z = RedBlueGraph(nabla & zp.edges, nabla - zp.edges)
    comps_z = decompose(rb_z, b.s_z)
    closed = [t for t in comps_z if t.closed]
    pieces = [t.verts for t in comps_z if not t.closed]
    if b.kind == 1 and pieces:
        raise ReconstructionMismatch("milestone bundle with a split circuit")

    glue_domain, rotations = _lab_candidates(closed, pieces)
    if not (0 <= b.glue_pick < len(glue_domain)):
        raise ReconstructionMismatch("glue index out of range")
    rots = rotations(b.glue_pick)
    if not (0 <= b.lin_pick < len(rots)):
        raise ReconstructionMismatch("linearization index out of range")
    ci, lab = rots[b.lin_pick]
    mu = len(lab) + 1

    if b.kind == 1:
        l_prev = lab
    else:
        _, sites = _trail_triples(lab, zp.edges)
        domain = _eq2_domain(mu, sites) if b.case2 else _eq1_domain(mu, sites)
        if not (0 <= b.interval_pick < len(domain)):
            raise ReconstructionMismatch("interval index out of range")
        truth = domain[b.interval_pick]
        lp = list(lab)

        def lab_at(p):
            return lab[(p - 1) % (mu - 1)]

        try:
            if not b.case2:
                a, bb, c, d = truth
                for lo, hi in ((a, bb), (c, d)):
                    seg = tuple(lab_at(p) for p in range(lo, hi + 1))
                    rec = _unreverse(seg)
                    for off, p in enumerate(range(lo, hi + 1)):
                        if p < mu:
                            lp[p - 1] = rec[off]
            else:
                i0, j0, a, bb, c, d = truth
                for p in range(i0, j0 + 1):
                    xo = i0 + j0 - p
                    if a < xo < bb or c < xo < d:
                        if xo < mu:
                            lp[xo - 1] = lab_at(p)
                for lo, hi in ((i0, a), (bb, c), (d, j0)):
                    seg = tuple(lab_at(i0 + j0 - xo) for xo in range(lo, hi + 1))
                    rec = _unreverse(seg)
                    for off, xo in enumerate(range(lo, hi + 1)):
                        if xo < mu:
                            lp[xo - 1] = rec[off]
        except SwitchmixError:
            raise ReconstructionMismatch("window inversion failed")
        l_prev = tuple(lp)

    try:
        v_orig = relative_apply(l_prev, b.w)
        wk_trail = Trail(v_orig, True)
        run = decompose_rounds(wk_trail)
    except SwitchmixError:
        raise ReconstructionMismatch("trail restore failed")

    wk_edges = wk_trail.edge_set()
    if pieces:
        piece_edges = frozenset(e for t in comps_z if not t.closed for e in t.edge_set())
        if wk_edges != piece_edges:
            raise ReconstructionMismatch("restored trail does not cover the loose pieces")
    wk_min = min(wk_edges)
    earlier = frozenset(e for t in closed if min(t.edge_set()) < wk_min for e in t.edge_set())

    if b.kind == 2:
        i_gaps = []
        if not b.case2:
            a, bb, c, d = truth
            i_gaps = list(range(a, bb)) + list(range(c, d))
        else:
            i0, j0, a, bb, c, d = truth
            i_gaps = (list(range(i0, a)) + list(range(bb, c)) + list(range(d, j0)))

    for r_cand in range(1, len(run.rounds) + 1):
        st_before = run.rounds[r_cand - 1].state_before
        if run.state_labels(st_before) != l_prev:
            continue
        red_prev = st_before.red
        swept = frozenset(run.gap_edge(g) for g in red_prev)
        if b.kind == 1:
            base = z.edges
        else:
            d_edges = frozenset(run.gap_edge(g) for g in i_gaps if g not in red_prev)
            base = zp.edges ^ d_edges
        try:
            x = Realization(z.cm, base ^ earlier ^ swept)
            y = Realization(z.cm, x.edges ^ nabla)
            fr = norm_edge(v_orig[0], v_orig[1]) in x.edges
            s = _rebuild_s(closed, Trail(v_orig, fr), zp.edges)
        except SwitchmixError:
            continue
        if _verified(z, b, x, y, s):
            return x, y, s
    raise ReconstructionMismatch("no candidate reproduced the bundle")
