"""Command-line front end.

Five subcommands: sample (run the chain and emit realizations), decompose
(canonical path between two realizations as JSON lines), verify-flow
(exact congestion audit of a fully enumerated instance), stability-check
(region verdicts and the random-degree-sequence frequency check) and
mix-analyze (spectral and total-variation report).  Reports are JSON with
sorted keys and carry the full run configuration, so identical invocations
produce identical bytes.  Exit codes: 0 success, 2 for bad input or a
failed precondition (machine-readable object on stderr), 1 for a broken
internal invariant.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .chain import run_walk
from .degseq import DegreeSequence, Model, initial_realization, load_sequence
from .errors import (
    CapExceeded,
    InvalidMatching,
    ModelMismatch,
    NotGraphical,
    ParseError,
    PreconditionViolation,
    SwitchmixError,
    Unbalanced,
)
from .graph import read_edge_list, to_json_dict
from .mixflow import audit_instance, build_markov_graph, mixing_time_bound, spectral, tv_at
from .redblue import symmetric_difference
from .stability import er_corollary_check, region_check, regions_for
from .sweep import canonical_path

SCHEMA = 1

_USER_ERRORS = (ParseError, NotGraphical, PreconditionViolation, CapExceeded,
                ModelMismatch, InvalidMatching, Unbalanced, OSError, ValueError)


def _jdump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "))


def _jsonable(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, frozenset):
        return sorted(sorted(e) for e in v)
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def _config(args, keys) -> dict:
    cfg = {"subcommand": args.cmd}
    for k in keys:
        cfg[k] = getattr(args, k)
    return cfg


def _emit(report: dict, path: str | None):
    text = _jdump(report) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cap_of(args) -> int | None:
    if args.cap is not None:
        return args.cap
    env = os.environ.get("SWITCHMIX_CAP")
    return int(env) if env else None


# ---------------------------------------------------------------------------
# subcommands


def _cmd_sample(args) -> int:
    seq = load_sequence(args.seq)
    start = initial_realization(seq)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for i in range(args.samples):
            g = run_walk(start, args.steps, seed=args.seed + i)
            if args.format == "json":
                d = to_json_dict(g)
                d["sample"] = i
                out.write(_jdump(d) + "\n")
            else:
                if args.samples > 1:
                    out.write(f"# sample {i}\n")
                pairs = g.directed_arcs() if seq.model is Model.DIRECTED else sorted(g.edges)
                for (u, v) in pairs:
                    out.write(f"{u} {v}\n")
                if args.samples > 1:
                    out.write("\n")
    finally:
        if args.out:
            out.close()
    return 0


def _cmd_decompose(args) -> int:
    seq = load_sequence(args.seq)
    x = read_edge_list(seq, args.x)
    y = read_edge_list(seq, args.y)
    rb = symmetric_difference(x, y)
    if args.matching == "auto":
        s = rb.canonical_matching()
    else:
        try:
            idx = int(args.matching)
        except ValueError:
            raise ParseError(f"--matching expects 'auto' or an integer, got {args.matching!r}")
        s = rb.matching_by_index(idx)
    path = canonical_path(x, y, frozenset(s))
    lines = [{"kind": "header", "schema": SCHEMA,
              "config": _config(args, ("seq", "x", "y", "matching")),
              "n_circuits": len(path.comps), "n_states": len(path.states),
              "n_matchings": rb.count_matchings()}]
    for k, trail in enumerate(path.comps, 1):
        lines.append({"kind": "circuit", "k": k, "verts": list(trail.verts),
                      "closed": trail.closed})
    for rr in path.rounds:
        circ = path.runs[rr.k - 1].rounds[rr.r - 1].circuit
        verts = list(circ.verts) if hasattr(circ, "verts") else list(circ)
        lines.append({"kind": "primitive", "k": rr.k, "r": rr.r, "verts": verts,
                      "cornerstone": rr.x1, "oriented": list(rr.oriented)})
    i = 0
    for rr in path.rounds:
        for st in rr.result.steps:
            i += 1
            lines.append({"kind": "switch", "index": i, "k": rr.k, "r": rr.r,
                          "tag": st.tag,
                          "removed": _jsonable(st.move.removed),
                          "added": _jsonable(st.move.added),
                          "r_set": _jsonable(st.r_set)})
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for ln in lines:
            out.write(_jdump(ln) + "\n")
    finally:
        if args.out:
            out.close()
    return 0


def _cmd_verify_flow(args) -> int:
    seq = load_sequence(args.seq)
    mg = build_markov_graph(seq, _cap_of(args))
    aud = audit_instance(mg)
    f = aud.flow
    report = {
        "schema": SCHEMA,
        "config": _config(args, ("seq", "cap")),
        "n_states": f.n_states,
        "lambda2": f.lambda2,
        "t_relax": f.t_relax,
        "kappa": _jsonable(f.kappa),
        "n_paths": f.n_paths,
        "max_path_len": f.max_path_len,
        "max_load_witness": _jsonable(f.witness),
        "state_load_ratio": _jsonable(f.state_load_ratio),
        "bound_ok": f.bound_ok,
        "audit": {
            "n_rounds": aud.n_rounds, "n_steps": aud.n_steps,
            "n_specials": aud.n_specials, "n_triples": aud.n_triples,
            "max_r_verts": aud.max_r_verts, "n_bad_states": aud.n_bad_states,
            "n_eliminations": aud.n_eliminations,
            "max_elim_switches": aud.max_elim_switches,
        },
    }
    _emit(report, args.report)
    return 0


def _cmd_stability(args) -> int:
    if not args.seq and not args.er:
        raise PreconditionViolation("stability-check needs --seq and/or --er")
    report: dict = {"schema": SCHEMA,
                    "config": _config(args, ("seq", "region", "gamma", "kconst",
                                             "er", "seed", "threads"))}
    if args.seq:
        seq = load_sequence(args.seq)
        if args.region == "all":
            regions = list(regions_for(seq.model))
            if args.gamma is not None and seq.model is Model.UC:
                regions.append("powerlaw")
        elif args.region == "dir-*":
            regions = ["dir-root4", "dir-root2", "dir-spread"]
        else:
            regions = [args.region]
        verdicts = []
        for rid in regions:
            v = region_check(seq, rid, gamma=args.gamma, kconst=args.kconst)
            verdicts.append({"region": v.region, "member": v.member,
                             "terms": {k: _jsonable(t) for k, t in v.terms}})
        report["verdicts"] = verdicts
    if args.er:
        try:
            n_s, p_s, t_s = args.er.split(",")
            n, p, trials = int(n_s), float(p_s), int(t_s)
        except ValueError:
            raise ParseError(f"--er expects n,p,trials, got {args.er!r}")
        r = er_corollary_check(n, p, trials, seed=args.seed, threads=args.threads)
        report["er"] = {"n": r.n, "p": r.p, "trials": r.trials,
                        "members": r.members, "frequency": r.frequency,
                        "ci_low": r.ci_low, "ci_high": r.ci_high,
                        "claimed": r.claimed, "seed": r.seed}
    _emit(report, args.report)
    return 0


def _cmd_mix_analyze(args) -> int:
    seq = load_sequence(args.seq)
    mg = build_markov_graph(seq, _cap_of(args))
    lam2, trel = spectral(mg)
    entries = []
    for eps in args.eps:
        t = mixing_time_bound(mg, eps)
        tv = tv_at(mg, t)
        entries.append({"eps": eps, "t_bound": t, "tv": tv, "ok": tv <= eps + 1e-8})
    report = {"schema": SCHEMA,
              "config": _config(args, ("seq", "cap", "eps")),
              "n_states": mg.n_states, "lambda2": lam2, "t_relax": trel,
              "mixing": entries}
    _emit(report, args.report)
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="switchmix",
                                 description="switch-chain sampling and exact mixing verification")
    ap.add_argument("--version", action="version", version=f"switchmix {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("sample", help="run the chain and emit realizations")
    p.add_argument("--seq", required=True, help="degree sequence file")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("edges", "json"), default="edges")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("decompose", help="canonical path between two realizations")
    p.add_argument("--seq", required=True)
    p.add_argument("--x", required=True, help="edge list of the start realization")
    p.add_argument("--y", required=True, help="edge list of the target realization")
    p.add_argument("--matching", default="auto", help="'auto' or a matching index")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("verify-flow", help="exact congestion audit")
    p.add_argument("--seq", required=True)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_verify_flow)

    p = sub.add_parser("stability-check", help="region verdicts and sampling checks")
    p.add_argument("--seq", default=None)
    p.add_argument("--region", default="all",
                   help="all, gs, jms, jms+, bip-root, bip-max, bip-ak, bip-4min, "
                        "dir-root4, dir-root2, dir-spread, dir-*, powerlaw")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--kconst", type=float, default=1.0)
    p.add_argument("--er", default=None, metavar="N,P,TRIALS")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("mix-analyze", help="spectral and total-variation report")
    p.add_argument("--seq", required=True)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.01])
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_mix_analyze)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except _USER_ERRORS as exc:
        sys.stderr.write(_jdump({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2
    except SwitchmixError as exc:
        sys.stderr.write(_jdump({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
