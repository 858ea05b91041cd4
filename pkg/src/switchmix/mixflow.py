"""Exact mixing and flow analysis on fully enumerated realization spaces.

The transition matrix of the lazy switch chain is built in rational
arithmetic from pairwise symmetric differences, eigenvalues come from a
certified symmetric eigensolver, and the canonical-path flow is routed
exactly: every ordered pair of realizations spreads its demand uniformly
over the junction matchings, and the congestion of the busiest transition
upper-bounds the relaxation time.  A full audit pass replays every path
and checks the per-state invariants (switch validity, step counts, the
size and location of the correction set, the entry pattern of the summed
adjacency matrices and its elimination) while accumulating edge loads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .degseq import DegreeSequence, enumerate_realizations, is_graphical
from .errors import ConvergenceFailure, InternalInvariant, ModelMismatch, NotGraphical
from .graph import (
    Model,
    Realization,
    _as_single_cycle,
    chord_model_of,
    hexagon_diagonals,
    norm_edge,
)
from .redblue import RedBlueGraph, decompose
from .sweep import bundle_at, canonical_path, oriented_sweep
from .toperator import decompose_rounds


# ---------------------------------------------------------------------------
# the chain as an explicit matrix


def _pair_prob(cm, ex: frozenset, ey: frozenset) -> Fraction:
    """Exact one-step probability between two distinct realizations."""
    diff = ex ^ ey
    k = len(diff)
    if cm.model is Model.UC:
        if k == 4:
            return Fraction(1, 12 * comb(cm.n, 4))
        return Fraction(0)
    if cm.model is Model.BIPARTITE:
        if k == 4:
            return Fraction(1, 2 * comb(cm.n_left, 2) * comb(cm.n_right, 2))
        return Fraction(0)
    if k == 4:
        return Fraction(1, 4 * comb(cm.n_left, 2) * comb(cm.n_right, 2))
    if k == 6:
        order = _as_single_cycle(diff)
        if order is None or len(order) != 6:
            raise InternalInvariant("six-edge difference is not a single cycle")
        if any(d in cm.forbidden for d in hexagon_diagonals(order)):
            return Fraction(1, 24 * comb(cm.n_left, 3) * comb(cm.n_right, 3))
        return Fraction(0)
    return Fraction(0)


class MarkovGraph:
    """State space of a sequence with the exact lazy transition matrix."""

    def __init__(self, seq: DegreeSequence, states, p):
        self.seq = seq
        self.cm = chord_model_of(seq)
        self.states = tuple(states)
        self.p = p
        self.index = {g: i for i, g in enumerate(self.states)}
        self.by_edges = {g.edges: i for i, g in enumerate(self.states)}
        self._float = None

    @property
    def n_states(self) -> int:
        return len(self.states)

    def float_matrix(self):
        if self._float is None:
            n = self.n_states
            m = np.empty((n, n), dtype=np.float64)
            for i in range(n):
                for j in range(n):
                    m[i, j] = float(self.p[i][j])
            self._float = m
        return self._float

    def component_count(self) -> int:
        n = self.n_states
        seen = [False] * n
        comps = 0
        for root in range(n):
            if seen[root]:
                continue
            comps += 1
            stack = [root]
            seen[root] = True
            while stack:
                v = stack.pop()
                for w in range(n):
                    if w != v and not seen[w] and self.p[v][w] > 0:
                        seen[w] = True
                        stack.append(w)
        return comps


def build_markov_graph(seq: DegreeSequence, cap: int | None = None) -> MarkovGraph:
    if not is_graphical(seq):
        raise NotGraphical(seq)
    states = enumerate_realizations(seq, cap)
    cm = chord_model_of(seq)
    n = len(states)
    edge_sets = [g.edges for g in states]
    p = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q = _pair_prob(cm, edge_sets[i], edge_sets[j])
            p[i][j] = q
            p[j][i] = q
    half = Fraction(1, 2)
    for i in range(n):
        diag = 1 - sum(p[i])
        if diag < half:
            raise InternalInvariant("holding probability dropped below one half")
        p[i][i] = diag
    mg = MarkovGraph(seq, states, tuple(tuple(row) for row in p))
    if mg.component_count() != 1:
        raise InternalInvariant("state space of a graphical sequence is disconnected")
    return mg


# ---------------------------------------------------------------------------
# spectra and total variation


def spectral(mg: MarkovGraph) -> tuple[float, float]:
    """Second eigenvalue and relaxation time, residual-certified."""
    n = mg.n_states
    if n == 1:
        return 0.0, 1.0
    pm = mg.float_matrix()
    w, v = np.linalg.eigh(pm)
    if abs(w[-1] - 1.0) > 1e-10:
        raise ConvergenceFailure("leading eigenvalue is not 1")
    if w[0] < -1e-10:
        raise InternalInvariant("lazy chain produced a negative eigenvalue")
    for idx in (-1, -2):
        vec = v[:, idx]
        res = np.max(np.abs(pm @ vec - w[idx] * vec))
        if res > 1e-10:
            raise ConvergenceFailure(f"eigenpair residual {res:.3e} too large")
    lam2 = float(w[-2])
    if lam2 >= 1.0:
        raise InternalInvariant("spectral gap vanished on a connected space")
    return lam2, 1.0 / (1.0 - lam2)


def tv_at(mg: MarkovGraph, t: int) -> float:
    """Worst-case total variation distance from uniform after t steps."""
    n = mg.n_states
    pt = np.linalg.matrix_power(mg.float_matrix(), t)
    return float(np.max(np.sum(np.abs(pt - 1.0 / n), axis=1)) / 2.0)


def mixing_time_bound(mg: MarkovGraph, eps: float) -> int:
    """Step count after which the relaxation-time bound forces TV <= eps."""
    _, trel = spectral(mg)
    return math.ceil(trel * math.log(mg.n_states / eps))


# ---------------------------------------------------------------------------
# canonical-path flow with a full invariant audit


@dataclass(frozen=True)
class FlowReport:
    n_states: int
    lambda2: float
    t_relax: float
    kappa: Fraction
    n_paths: int
    max_path_len: int
    witness: tuple
    state_load_ratio: tuple
    bound_ok: bool


@dataclass(frozen=True)
class InstanceAudit:
    seq: DegreeSequence
    n_states: int
    n_paths: int
    n_rounds: int
    n_steps: int
    n_specials: int
    n_triples: int
    max_r_verts: int
    n_bad_states: int
    n_eliminations: int
    max_elim_switches: int
    flow: FlowReport


def _subtrail_count_ok(edges, limit: int = 2) -> bool:
    """True when the edges split into at most `limit` edge-disjoint trails.

    A connected piece with 2k odd-degree vertices needs max(1, k) trails
    to cover it, so the pieces are counted with that weight.
    """
    if not edges:
        return True
    adj: dict[int, list[int]] = {}
    for (a, b) in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen: set[int] = set()
    trails = 0
    for root in adj:
        if root in seen:
            continue
        stack = [root]
        seen.add(root)
        odd = 0
        while stack:
            v = stack.pop()
            if len(adj[v]) % 2 == 1:
                odd += 1
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        trails += max(1, odd // 2)
        if trails > limit:
            return False
    return True


def _eliminate(mat) -> int:
    """Clear +2 entries from the cornerstone row by matrix switches."""
    size = len(mat)
    nsw = 0
    while True:
        j = next((c for c in range(1, size) if mat[0][c] == 2), None)
        if j is None:
            break
        if nsw >= 2:
            raise InternalInvariant("entry correction needs more than two switches")
        i = next((r for r in range(size) if r not in (0, j) and mat[r][j] in (-1, 0)), None)
        if i is None:
            raise InternalInvariant("no row available for an entry correction")
        c2 = next((c for c in range(size) if c not in (0, i) and mat[i][c] > mat[0][c]), None)
        if c2 is None:
            raise InternalInvariant("no column available for an entry correction")
        for (r, c, dv) in ((0, j, -1), (i, j, 1), (0, c2, 1), (i, c2, -1)):
            mat[r][c] += dv
            if r != c:
                mat[c][r] += dv
        nsw += 1
    neg = 0
    for r in range(size):
        for c in range(r + 1, size):
            if mat[r][c] == -1:
                neg += 1
            elif mat[r][c] not in (0, 1):
                raise InternalInvariant("entry correction left an out-of-range value")
    if neg > 1:
        raise InternalInvariant("entry correction left more than one negative pair")
    return nsw


class _PathEngine:
    """Replays every canonical path of an instance from cached sweeps.

    A sweep depends only on the circuit and on the current edges among its
    vertices, so the expensive scan runs once per (circuit, local graph)
    pair and every other visit replays the recorded moves on raw edge sets.
    """

    def __init__(self, mg: MarkovGraph, check: bool = True, cross_check: int = 0):
        self.mg = mg
        self.cm = mg.cm
        self.check = check
        self.cross_check = cross_check
        self.runs = {}
        self.sweeps = {}
        self.loads: dict = {}
        self.visits: dict = {}
        self.n_paths = 0
        self.n_rounds = 0
        self.n_steps = 0
        self.n_specials = 0
        self.n_triples = 0
        self.max_r_verts = 0
        self.n_bad_states = 0
        self.n_elims = 0
        self.max_elim_sw = 0
        self.max_path_len = 0
        self.side_limit = 5 if self.cm.model is Model.UC else 3

    def _run_for(self, trail):
        run = self.runs.get(trail)
        if run is None:
            run = decompose_rounds(trail)
            self.runs[trail] = run
        return run

    def _sweep_for(self, cur: frozenset, circuit):
        cv = tuple(circuit.verts)
        vs = set(cv)
        local = frozenset(e for e in cur if e[0] in vs and e[1] in vs)
        key = (cv, local)
        rec = self.sweeps.get(key)
        if rec is None:
            g = Realization(self.cm, cur)
            oriented, res = oriented_sweep(g, circuit)
            steps = tuple((st.move.removed, st.move.added, st.tag,
                           st.r_set, st.q_set) for st in res.steps)
            rec = (oriented, steps)
            self.sweeps[key] = rec
        return rec

    def _audit_state(self, cur, prev, nxt, tag, milestone, nabla, r_set, q_set,
                     ex, ey, cedges, x1, cv):
        rvs = {v for e in r_set for v in e}
        rvs.discard(x1)
        if len(rvs) > self.side_limit:
            raise InternalInvariant("correction set touches too many vertices")
        if len(rvs) > self.max_r_verts:
            self.max_r_verts = len(rvs)
        resid = (cur ^ milestone) ^ r_set
        if not resid <= cedges:
            raise InternalInvariant("residual difference leaves the circuit")
        if not _subtrail_count_ok(resid):
            raise InternalInvariant("residual difference is not two subtrails")
        off = (cur ^ milestone) - nabla
        if not off <= (r_set - q_set):
            raise InternalInvariant("off-target pairs outside the correction set")
        bad2 = (ex & ey) - cur
        bad1 = cur - (ex | ey)
        if tag != "double1":
            # switch, special and second-double states: tight pattern,
            # direct entry correction
            if len(bad2) > 2 or len(bad1) > 1:
                raise InternalInvariant("summed adjacency pattern out of range")
            if bad2:
                self.n_bad_states += 1
                self._run_elimination(ex, ey, cur, x1, cv)
            return
        if not bad2:
            return
        # between the two double steps a bad chord may sit away from the
        # cornerstone and off the circuit; the correction then applies to
        # the matrix of the adjacent state whose switch touches that chord
        self.n_bad_states += 1
        outside = [f for f in (bad2 | bad1) if x1 not in f and f not in cedges]
        if not outside:
            self._run_elimination(ex, ey, cur, x1, cv)
            return
        if len(outside) != 1:
            raise InternalInvariant("two bad chords away from the cornerstone")
        f = outside[0]
        last = None
        for w in (prev, nxt):
            if w is None or f not in (w ^ cur):
                continue
            try:
                self._run_elimination(ex, ey, w, x1, cv)
                return
            except InternalInvariant as exc:
                last = exc
        raise last or InternalInvariant("no adjacent state touches the bad chord")

    def _run_elimination(self, ex, ey, cur, x1, cv):
        verts = [x1] + sorted(set(cv) - {x1})
        bip = self.cm.model is not Model.UC
        nl = self.cm.n_left
        size = len(verts)
        mat = [[0] * size for _ in range(size)]
        for a in range(size):
            for b in range(a + 1, size):
                e = norm_edge(verts[a], verts[b])
                val = (e in ex) + (e in ey) - (e in cur)
                if bip and (e[0] < nl) == (e[1] < nl):
                    val += 1
                mat[a][b] = val
                mat[b][a] = val
        nsw = _eliminate(mat)
        self.n_elims += 1
        if nsw > self.max_elim_sw:
            self.max_elim_sw = nsw

    def run_pair(self, xi: int, yi: int):
        mg = self.mg
        ex = mg.states[xi].edges
        ey = mg.states[yi].edges
        nabla = ex ^ ey
        rb = RedBlueGraph(nabla & ex, nabla & ey)
        cnt = rb.count_matchings()
        for s in rb.enumerate_matchings():
            self._run_matching(xi, yi, ex, ey, nabla, cnt, rb, s)

    def _run_matching(self, xi, yi, ex, ey, nabla, cnt, rb, s):
        comps = decompose(rb, s)
        cur = ex
        idxs = [xi]
        base = ex
        for comp in comps:
            run = self._run_for(comp)
            for r, trd in enumerate(run.rounds, start=1):
                if self.check and cur != base ^ run.swept_edges(r):
                    raise InternalInvariant("path left its milestone sequence")
                oriented, steps = self._sweep_for(cur, trd.circuit)
                cedges = trd.circuit.edge_set()
                ell = len(oriented) // 2
                milestone = cur
                x1 = oriented[0]
                ntri = 0
                round_states = [cur]
                for (removed, added, tag, r_set, q_set) in steps:
                    if self.check and (not removed <= cur or (added & cur)):
                        raise InternalInvariant("replayed switch is not applicable")
                    cur = (cur - removed) | added
                    round_states.append(cur)
                    if tag == "triple":
                        ntri += 1
                    elif tag in ("special1", "special2"):
                        self.n_specials += 1
                    zi = self.mg.by_edges.get(cur)
                    if zi is None:
                        raise InternalInvariant("path stepped outside the state space")
                    idxs.append(zi)
                if self.check:
                    for q in range(1, len(round_states)):
                        nxt = round_states[q + 1] if q + 1 < len(round_states) else None
                        _, _, tag, r_set, q_set = steps[q - 1]
                        self._audit_state(round_states[q], round_states[q - 1], nxt,
                                          tag, milestone, nabla, r_set, q_set,
                                          ex, ey, cedges, x1, oriented)
                self.n_triples += ntri
                self.n_rounds += 1
                self.n_steps += len(steps)
                if self.check:
                    if cur != milestone ^ cedges:
                        raise InternalInvariant("sweep missed its target")
                    if self.cm.model is Model.DIRECTED:
                        if len(steps) != ell - 1 - ntri:
                            raise InternalInvariant("directed sweep step count is off")
                    elif len(steps) not in (ell - 2, ell - 1):
                        raise InternalInvariant("sweep step count is off")
                    if steps and steps[-1][3]:
                        raise InternalInvariant("correction set nonempty at a milestone")
            base = base ^ comp.edge_set()
        if cur != ey:
            raise InternalInvariant("path did not reach its target")
        plen = len(idxs) - 1
        if plen > len(nabla) // 2:
            raise InternalInvariant("path longer than half the difference")
        if len(set(idxs)) != len(idxs):
            raise InternalInvariant("path revisited a state")
        if self.cross_check > 0:
            self.cross_check -= 1
            self._compare_with_reference(xi, yi, s, idxs)
        self.n_paths += 1
        if plen > self.max_path_len:
            self.max_path_len = plen
        for a, b in zip(idxs, idxs[1:]):
            slot = self.loads.setdefault((a, b), {})
            slot[cnt] = slot.get(cnt, 0) + plen
        for v in idxs:
            slot = self.visits.setdefault(v, {})
            slot[cnt] = slot.get(cnt, 0) + 1

    def _compare_with_reference(self, xi, yi, s, idxs):
        path = canonical_path(self.mg.states[xi], self.mg.states[yi], s)
        ref = [self.mg.index[st] for st in path.states]
        if ref != idxs:
            raise InternalInvariant("replayed path disagrees with the reference")

    def run_all(self):
        n = self.mg.n_states
        for xi in range(n):
            for yi in range(n):
                if xi != yi:
                    self.run_pair(xi, yi)

    def flow_report(self) -> FlowReport:
        mg = self.mg
        n = mg.n_states
        lam2, trel = spectral(mg)
        if n == 1:
            return FlowReport(1, lam2, trel, Fraction(0), 0, 0, (), (Fraction(0),), True)
        kappa = Fraction(0)
        witness = ()
        for (a, b), slot in self.loads.items():
            load = sum(Fraction(num, den) for den, num in slot.items())
            here = load / (n * mg.p[a][b])
            if here > kappa:
                kappa = here
                witness = (tuple(sorted(mg.states[a].edges)),
                           tuple(sorted(mg.states[b].edges)))
        ratios = []
        for v in range(n):
            slot = self.visits.get(v, {})
            load = sum(Fraction(num, den) for den, num in slot.items())
            ratios.append(load / n)
        bound_ok = trel <= float(kappa) + 1e-8
        if not bound_ok:
            raise InternalInvariant("congestion fell below the relaxation time")
        return FlowReport(n, lam2, trel, kappa, self.n_paths, self.max_path_len,
                          witness, tuple(ratios), bound_ok)


def audit_instance(mg: MarkovGraph, cross_check: int = 0) -> InstanceAudit:
    """Run every canonical path of the instance with all checks enabled."""
    eng = _PathEngine(mg, check=True, cross_check=cross_check)
    eng.run_all()
    flow = eng.flow_report()
    return InstanceAudit(mg.seq, mg.n_states, eng.n_paths, eng.n_rounds,
                         eng.n_steps, eng.n_specials, eng.n_triples,
                         eng.max_r_verts, eng.n_bad_states, eng.n_elims,
                         eng.max_elim_sw, flow)


def congestion(seq: DegreeSequence, cap: int | None = None) -> FlowReport:
    """Exact multicommodity-flow congestion of the canonical paths."""
    return audit_instance(build_markov_graph(seq, cap)).flow


# ---------------------------------------------------------------------------
# the counting bound


@dataclass(frozen=True)
class CountingReport:
    lhs: Fraction
    census: int
    rhs: int
    ok: bool


def _bundle_census(mg: MarkovGraph) -> set:
    seen = set()
    n = mg.n_states
    for xi in range(n):
        for yi in range(n):
            if xi == yi:
                continue
            x, y = mg.states[xi], mg.states[yi]
            nabla = x.edges ^ y.edges
            rb = RedBlueGraph(nabla & x.edges, nabla & y.edges)
            for s in rb.enumerate_matchings():
                path = canonical_path(x, y, s)
                for pos in range(len(path.states)):
                    b = bundle_at(path, pos)
                    core = (b.kind, b.x1, b.r_set, b.w, b.case2,
                            b.glue_pick, b.lin_pick, b.interval_pick)
                    seen.add((core, b.m_hat))
    return seen


def counting_bound_check(seq: DegreeSequence, z: Realization,
                         cap: int | None = None) -> CountingReport:
    """Compare the path load through z against the bundle-count bound."""
    mg = build_markov_graph(seq, cap)
    if z not in mg.index:
        raise ModelMismatch("state does not realize the sequence")
    lhs = Fraction(0)
    n = mg.n_states
    for xi in range(n):
        for yi in range(n):
            if xi == yi:
                continue
            x, y = mg.states[xi], mg.states[yi]
            nabla = x.edges ^ y.edges
            rb = RedBlueGraph(nabla & x.edges, nabla & y.edges)
            cnt = rb.count_matchings()
            for s in rb.enumerate_matchings():
                path = canonical_path(x, y, s)
                if z in path.states:
                    lhs += Fraction(1, cnt)
    census = len(_bundle_census(mg))
    rhs = seq.n ** 4 * census
    ok = lhs <= rhs
    if not ok:
        raise InternalInvariant("path load exceeded the bundle-count bound")
    return CountingReport(lhs, census, rhs, ok)
