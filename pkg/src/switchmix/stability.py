"""Degree-sequence regions with known sampling guarantees.

Each region is a closed-form inequality on the degree extremes; the
predicates evaluate it in exact integer arithmetic and return every term,
so a verdict can be rechecked by eye.  The power-law predicate bounds the
degree tail against a Hurwitz zeta sum.  Beyond the pure predicates there
are two empirical oracles: a sampling check that Erdos-Renyi degree
sequences fall in the widest plain region with high frequency, and an
exhaustive strong-stability check that walks every realization of every
downward-perturbed sequence and measures its switch distance from the
unperturbed realization set.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .degseq import (
    DegreeSequence,
    Model,
    enumerate_realizations,
    is_graphical,
    perturbations,
)
from .errors import ModelMismatch, PreconditionViolation

POWERLAW_GAMMA_GATE = 1.0 + math.sqrt(3.0)

UC_REGIONS = ("gs", "jms", "jms+", "powerlaw")
BIPARTITE_REGIONS = ("bip-root", "bip-max", "bip-ak", "bip-4min")
DIRECTED_REGIONS = ("dir-root4", "dir-root2", "dir-spread")
REGIONS = UC_REGIONS + BIPARTITE_REGIONS + DIRECTED_REGIONS


@dataclass(frozen=True)
class RegionVerdict:
    region: str
    member: bool
    terms: tuple  # ordered (name, value) pairs, exact where the region is


def _verdict(region, member, *terms) -> RegionVerdict:
    return RegionVerdict(region, bool(member), tuple(terms))


def _uc_stats(seq: DegreeSequence):
    d = seq.a
    return len(d), min(d), max(d), sum(d)


def region_check(seq: DegreeSequence, region: str,
                 gamma: float | None = None, kconst: float = 1.0) -> RegionVerdict:
    """Evaluate one region inequality on the sequence, terms and all."""
    if region == "powerlaw":
        if gamma is None:
            raise PreconditionViolation("powerlaw region needs a gamma exponent")
        return power_law_check(seq, gamma, kconst)
    if region in UC_REGIONS:
        if seq.model is not Model.UC:
            raise ModelMismatch(f"region {region} applies to plain sequences")
        n, dmin, dmax, m2 = _uc_stats(seq)
        if region == "gs":
            ok = dmin >= 1 and 3 <= dmax and 9 * dmax * dmax <= m2
            return _verdict(region, ok, ("delta", dmin), ("Delta", dmax),
                            ("nine_Delta_sq", 9 * dmax * dmax), ("two_m", m2))
        if region == "jms":
            lhs = (dmax - dmin + 1) ** 2
            rhs = 4 * dmin * (n - dmax - 1)
            return _verdict(region, lhs <= rhs, ("lhs", lhs), ("rhs", rhs))
        # jms+
        lo = m2 - n * dmin
        hi = n * dmax - m2
        lhs = lo * hi
        rhs = (dmax - dmin) * (lo * (n - dmax - 1) + hi * dmin)
        return _verdict(region, lhs <= rhs, ("lhs", lhs), ("rhs", rhs),
                        ("excess_low", lo), ("excess_high", hi),
                        ("tight", lhs == rhs))
    if region in BIPARTITE_REGIONS:
        if seq.model is not Model.BIPARTITE:
            raise ModelMismatch(f"region {region} applies to bipartite sequences")
        a, b = seq.a, seq.b
        nu, nv = len(a), len(b)
        du, dv = min(a), min(b)
        au, av = max(a), max(b)
        if region == "bip-root":
            dmax = max(au, av)
            m = sum(a)
            ok = 2 <= dmax and 2 * dmax * dmax <= m
            return _verdict(region, ok, ("Delta", dmax),
                            ("two_Delta_sq", 2 * dmax * dmax), ("m", m))
        if region == "bip-max":
            lhs = (au - du - 1) * (av - dv - 1)
            rhs = max(du * (nu - av + 1), dv * (nv - au + 1))
            return _verdict(region, lhs <= rhs, ("lhs", lhs), ("rhs", rhs))
        if region == "bip-ak":
            l1, r1 = (au - dv) ** 2, 4 * dv * (nv - au)
            l2, r2 = (av - du) ** 2, 4 * du * (nu - av)
            return _verdict(region, l1 <= r1 and l2 <= r2,
                            ("lhs_u", l1), ("rhs_u", r1),
                            ("lhs_v", l2), ("rhs_v", r2))
        # bip-4min
        lhs = (au - du) * (av - dv)
        rhs = 4 * min(du * (nu - av), dv * (nv - au))
        return _verdict(region, lhs <= rhs, ("lhs", lhs), ("rhs", rhs))
    if region in DIRECTED_REGIONS:
        if seq.model is not Model.DIRECTED:
            raise ModelMismatch(f"region {region} applies to directed sequences")
        out, inn = seq.a, seq.b
        n = len(out)
        do, di = min(out), min(inn)
        ao, ai = max(out), max(inn)
        m = sum(out)
        dmax = max(ao, ai)
        if region == "dir-root4":
            ok = 2 <= dmax and 16 * dmax * dmax <= m
            return _verdict(region, ok, ("Delta", dmax),
                            ("sixteen_Delta_sq", 16 * dmax * dmax), ("m", m))
        if region == "dir-root2":
            ok = 2 <= dmax and 2 * dmax * dmax < m - 4
            return _verdict(region, ok, ("Delta", dmax),
                            ("two_Delta_sq", 2 * dmax * dmax), ("m_minus_4", m - 4))
        # dir-spread
        lhs = (ao - do) * (ai - di)
        rhs = 2 - n + max(do * (n - ai - 1) + di + ao,
                          di * (n - ao - 1) + do + ai)
        return _verdict(region, lhs <= rhs, ("lhs", lhs), ("rhs", rhs))
    raise PreconditionViolation(f"unknown region id {region!r}")


def regions_for(model: Model) -> tuple[str, ...]:
    if model is Model.UC:
        return UC_REGIONS[:-1]  # powerlaw needs its own parameters
    if model is Model.BIPARTITE:
        return BIPARTITE_REGIONS
    return DIRECTED_REGIONS


def power_law_check(seq: DegreeSequence, gamma: float, kconst: float = 1.0) -> RegionVerdict:
    """Tail bound: at most kconst*n*sum_{j>=i} j^-gamma vertices of degree >= i.

    Membership needs the tail bound at every i up to the maximum degree and
    the exponent above 1+sqrt(3); the verdict records the first violated i.
    """
    if seq.model is not Model.UC:
        raise ModelMismatch("the power-law region applies to plain sequences")
    if not gamma > 1.0:
        raise PreconditionViolation("the tail sum needs gamma > 1")
    if not kconst > 0.0:
        raise PreconditionViolation("the tail bound needs a positive constant")
    d = seq.a
    n = len(d)
    dmax = max(d) if d else 0
    gate = gamma > POWERLAW_GAMMA_GATE
    bad_i = 0
    for i in range(1, dmax + 1):
        count = sum(1 for x in d if x >= i)
        if count > kconst * n * float(zeta(gamma, i)):
            bad_i = i
            break
    ok = gate and bad_i == 0
    return _verdict("powerlaw", ok, ("gamma", gamma), ("gate", POWERLAW_GAMMA_GATE),
                    ("gate_ok", gate), ("kconst", kconst),
                    ("first_bad_i", bad_i), ("Delta", dmax))


# ---------------------------------------------------------------------------
# Erdos-Renyi degree sequences vs the average-spread plain region


@dataclass(frozen=True)
class ERReport:
    n: int
    p: float
    trials: int
    members: int
    frequency: float
    ci_low: float
    ci_high: float
    claimed: float  # 1 - 3/n
    seed: int


def _er_block(n, p, seeds, iu, iv):
    members = 0
    for ss in seeds:
        rng = np.random.default_rng(ss)
        picked = rng.random(iu.shape[0]) < p
        deg = (np.bincount(iu[picked], minlength=n)
               + np.bincount(iv[picked], minlength=n))
        dmin, dmax = int(deg.min()), int(deg.max())
        m2 = int(deg.sum())
        lo = m2 - n * dmin
        hi = n * dmax - m2
        if lo * hi <= (dmax - dmin) * (lo * (n - dmax - 1) + hi * dmin):
            members += 1
    return members


def er_corollary_check(n: int, p: float, trials: int, seed: int = 0,
                       threads: int = 1) -> ERReport:
    """Sample G(n,p) degree sequences and count how many land in jms+.

    Every trial draws from its own derived seed, so the outcome depends
    only on (n, p, trials, seed), not on the thread count.
    """
    if n < 100:
        raise PreconditionViolation(f"need n >= 100, got {n}")
    bound = 5.0 * math.log(n) / (n - 1)
    if not p >= bound:
        raise PreconditionViolation(
            f"p = {p} is below the 5*log(n)/(n-1) = {bound:.6f} threshold")
    if not 1.0 - p >= bound:
        raise PreconditionViolation(
            f"1-p = {1.0 - p} is below the 5*log(n)/(n-1) = {bound:.6f} threshold")
    if trials < 1:
        raise PreconditionViolation("need at least one trial")
    iu, iv = np.triu_indices(n, 1)
    children = np.random.SeedSequence(seed).spawn(trials)
    threads = max(1, threads)
    if threads == 1:
        members = _er_block(n, p, children, iu, iv)
    else:
        chunks = [children[i::threads] for i in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            members = sum(pool.map(lambda ch: _er_block(n, p, ch, iu, iv), chunks))
    freq = members / trials
    # Wilson 95% interval
    z = 1.959963984540054
    denom = 1.0 + z * z / trials
    center = (freq + z * z / (2 * trials)) / denom
    half = z * math.sqrt(freq * (1.0 - freq) / trials
                         + z * z / (4 * trials * trials)) / denom
    return ERReport(n, p, trials, members, freq,
                    max(0.0, center - half), min(1.0, center + half),
                    1.0 - 3.0 / n, seed)


# ---------------------------------------------------------------------------
# strong stability by exhaustive search


@dataclass(frozen=True)
class StrongStabilityReport:
    seq: DegreeSequence
    ell: int
    direction: str
    n_perturbed: int        # perturbed sequences with at least one realization
    n_perturbed_graphs: int
    max_distance: int       # edge-set distance, so twice the switch count
    ok: bool                # max_distance <= 2*ell
    witness: tuple          # (perturbation (x, y), realization edges) at the max


def strong_stability_check(seq: DegreeSequence, ell: int = 10,
                           cap: int | None = None,
                           direction: str = "down") -> StrongStabilityReport:
    """Largest distance from a perturbed realization to the original set.

    Walks every realization of every perturbed sequence and measures the
    smallest symmetric edge-set difference against the unperturbed
    realizations; the verdict compares the worst case with 2*ell.  An
    empty perturbed family contributes nothing (vacuously fine).
    """
    base = enumerate_realizations(seq, cap)
    base_edges = [g.edges for g in base]
    worst = 0
    witness: tuple = ()
    n_seqs = 0
    n_graphs = 0
    for pert in perturbations(seq, direction):
        if not is_graphical(pert.seq):
            continue
        perturbed = enumerate_realizations(pert.seq, cap)
        if not perturbed:
            continue
        n_seqs += 1
        for gp in perturbed:
            n_graphs += 1
            dist = min(len(gp.edges ^ e) for e in base_edges) if base_edges else len(gp.edges)
            if dist > worst:
                worst = dist
                witness = ((pert.x, pert.y), tuple(sorted(gp.edges)))
    return StrongStabilityReport(seq, ell, direction, n_seqs, n_graphs,
                                 worst, worst <= 2 * ell, witness)
