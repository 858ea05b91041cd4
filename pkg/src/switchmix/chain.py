"""Lazy switch Markov chain samplers.

One step proposes a uniformly random switch frame and applies the exchange
only when the removed pairs are all edges and the added pairs are all
non-edge chords; otherwise the walk holds in place.  The per-move
probabilities this induces are the exact kernel constants verified by the
mixflow module, and holding probabilities stay at least one half.
"""

from __future__ import annotations

import random
from collections import Counter

from .degseq import Model
from .graph import Realization


def _pairings4(q):
    p, q_, r, s = q
    return (
        ((p, q_), (r, s)),
        ((p, r), (q_, s)),
        ((p, s), (q_, r)),
    )


def _try_apply(g: Realization, removed, added):
    es = g.edges
    for e in removed:
        if e not in es:
            return g
    for e in added:
        if e in es:
            return g
    return Realization(g.cm, (es - frozenset(removed)) | frozenset(added))


def _step_uc(g: Realization, rng: random.Random) -> Realization:
    if rng.random() < 0.5:
        return g
    n = g.cm.n
    if n < 4:
        return g
    quad = sorted(rng.sample(range(n), 4))
    ps = _pairings4(quad)
    fi = rng.randrange(3)
    other = [i for i in range(3) if i != fi]
    gi = other[rng.randrange(2)]
    return _try_apply(g, ps[fi], ps[gi])


def _side_pairs(g: Realization, rng: random.Random):
    cm = g.cm
    u = sorted(rng.sample(range(cm.n_left), 2))
    v = sorted(rng.sample(range(cm.n_left, cm.n), 2))
    m0 = ((u[0], v[0]), (u[1], v[1]))
    m1 = ((u[0], v[1]), (u[1], v[0]))
    return (m0, m1) if rng.randrange(2) == 0 else (m1, m0)


def _step_bip(g: Realization, rng: random.Random) -> Realization:
    cm = g.cm
    if cm.n_left < 2 or cm.n_right < 2:
        return g
    removed, added = _side_pairs(g, rng)
    return _try_apply(g, removed, added)


def _step_dir(g: Realization, rng: random.Random) -> Realization:
    cm = g.cm
    if rng.random() < 0.5:
        # plain switch on the representation, diagonal pairs stay forbidden
        if cm.n_left < 2 or cm.n_right < 2:
            return g
        removed, added = _side_pairs(g, rng)
        for e in added:
            if e in cm.forbidden:
                return g
        return _try_apply(g, removed, added)
    if cm.n_left < 3 or cm.n_right < 3:
        return g
    u3 = sorted(rng.sample(range(cm.n_left), 3))
    v3 = sorted(rng.sample(range(cm.n_left, cm.n), 3))
    perms = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))
    sigma = perms[rng.randrange(6)]
    others = [p for p in perms if all(p[i] != sigma[i] for i in range(3))]
    tau = others[rng.randrange(2)]
    rho = next(p for p in others if p != tau)
    removed = tuple((u3[i], v3[sigma[i]]) for i in range(3))
    added = tuple((u3[i], v3[tau[i]]) for i in range(3))
    if any(e in cm.forbidden for e in added):
        return g
    if all((u3[i], v3[rho[i]]) not in cm.forbidden for i in range(3)):
        return g
    return _try_apply(g, removed, added)


def step(g: Realization, rng: random.Random) -> Realization:
    """One lazy chain step."""
    m = g.cm.model
    if m is Model.UC:
        return _step_uc(g, rng)
    if m is Model.BIPARTITE:
        return _step_bip(g, rng)
    return _step_dir(g, rng)


def run_walk(g: Realization, steps: int,
             rng: random.Random | None = None,
             seed: int | None = None) -> Realization:
    if rng is None:
        rng = random.Random(seed)
    cur = g
    for _ in range(steps):
        cur = step(cur, rng)
    return cur


def empirical_distribution(g: Realization, steps: int, samples: int,
                           seed: int | None = None) -> Counter:
    """Endpoint counts of independent length-`steps` walks started at g."""
    rng = random.Random(seed)
    out: Counter = Counter()
    for _ in range(samples):
        out[run_walk(g, steps, rng=rng)] += 1
    return out
