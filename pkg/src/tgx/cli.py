"""``tgx`` command line.

Exit codes: 0 success, 1 a verification failed, 2 bad usage or bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import Sequence

import numpy as np

from . import graph as gc
from .baselines import caw_anonymize, caw_encode_event, caw_walk_set, format_walks
from .corpus import CATALOG, corpus_verify
from .expressiveness import distinguish_events, distinguish_nodes, parse_model, static_properties
from .injective import exhaustive_injectivity
from .pint import IDENTITY, INJECTIVE, PintConfig, PintEngine
from .posfeat import build_store, dump_store, normalize_l1
from .tct import build_monotone_tct, build_tct, dump_tct, tct_canonical
from .twl import twl_compare, twl_refine

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _triple(s: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in s.split(","))
    except ValueError:
        raise UsageError(f"bad {what} {s!r}") from None


def _time(args, g: gc.TemporalGraph) -> int:
    return g.horizon() if args.time is None else args.time


# --- subcommands --------------------------------------------------------------


def cmd_wl(args) -> int:
    a = gc.load_events(args.a)
    if args.b is None:
        t = _time(args, a)
        hist = twl_refine(a, t, args.max_rounds)
        payload = {"time": t, "counts": hist.counts(), "stabilized_at": hist.stabilized_at}
        _emit(args, payload, f"counts {hist.counts()}  stabilized at round {hist.stabilized_at}")
        return OK
    b = gc.load_events(args.b)
    t = args.time if args.time is not None else max(a.horizon(), b.horizon())
    cmp = twl_compare(a, b, t)
    payload = {
        "time": t,
        "verdict": cmp.verdict.value,
        "round": cmp.round,
        "counts_a": cmp.history_a.counts(),
        "counts_b": cmp.history_b.counts(),
    }
    text = (
        f"counts a: {payload['counts_a']}\ncounts b: {payload['counts_b']}\n"
        f"{cmp.verdict.value} (round {cmp.round})"
    )
    _emit(args, payload, text)
    return OK


def cmd_tct(args) -> int:
    g = gc.load_events(args.graph)
    t = _time(args, g)
    tree = build_monotone_tct(g, args.node, t) if args.monotone else build_tct(g, args.node, t, args.layers)
    payload = {"node": args.node, "time": t, "size": len(tree), "height": tree.height(), "dump": dump_tct(tree)}
    _emit(args, payload, dump_tct(tree) + f"\n# code {tct_canonical(tree)!r}")
    return OK


def cmd_posfeat(args) -> int:
    g = gc.load_events(args.graph)
    store = build_store(g, args.dim, args.time)
    norm = args.normalize == "l1"
    rows = []
    for i, u, v in store.nonzero():
        vals = [str(x) for x in normalize_l1(v)] if norm else list(v)
        rows.append({"i": i, "u": u, "r": vals})
    _emit(args, {"dim": args.dim, "clock": store.clock, "vectors": rows}, dump_store(store, norm))
    return OK


def cmd_embed(args) -> int:
    g = gc.load_events(args.graph)
    cfg = PintConfig(
        L=args.layers,
        d=args.dim,
        mode=args.mode,
        use_positional=not args.no_pos,
        memory=args.memory,
        seed=args.seed,
    )
    if args.edge:
        u, v, t = _triple(args.edge, "edge")
        eng = PintEngine.for_graphs(cfg, [g], t)
        h = eng.edge_embedding(g, u, v, t)
        target = {"edge": [u, v, t]}
    elif args.node is not None:
        t = _time(args, g)
        eng = PintEngine.for_graphs(cfg, [g], t)
        h = eng.node_embedding(g, args.node, t, eng.memory(g, t), eng.positions(g, t))
        target = {"node": args.node, "time": t}
    else:
        raise UsageError("embed needs --edge u,v,t or --node v")
    if isinstance(h, np.ndarray):
        value = [round(float(x), 12) for x in h]
        text = " ".join(f"{x:.6f}" for x in value)
    else:
        value = repr(h)
        text = value
    _emit(args, {**target, "mode": cfg.mode, "embedding": value}, text)
    return OK


def cmd_caw(args) -> int:
    g = gc.load_events(args.graph)
    u, v, t = _triple(args.event, "event")
    su, sv = caw_walk_set(g, u, t, args.len), caw_walk_set(g, v, t, args.len)
    lines_u, lines_v = format_walks(su, sv), format_walks(sv, su)
    code = caw_encode_event(g, u, v, t, args.len)
    nodes = sorted({n for s in (su, sv) for w in s.walks for n, _ in w})
    anon = {str(n): [list(x) for x in caw_anonymize(n, su, sv)] for n in nodes}
    payload = {"event": [u, v, t], "len": args.len, "walks_u": lines_u, "walks_v": lines_v, "anonymized": anon}
    text = "\n".join([f"# walks from {u}"] + lines_u + [f"# walks from {v}"] + lines_v + [f"# code {code!r}"])
    _emit(args, payload, text)
    return OK


def cmd_distinguish(args) -> int:
    g = gc.load_events(args.graph)
    try:
        model = parse_model(args.model)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.seed:
        model = replace(model, seed=args.seed)
    if args.nodes:
        u, v = _triple(args.nodes, "node pair")
        t = _time(args, g)
        verdict = distinguish_nodes(g, u, v, t, model)
        target = {"nodes": [u, v], "time": t}
    elif args.events:
        try:
            e1, e2 = args.events.split(":")
        except ValueError:
            raise UsageError("--events takes u,v,t:u2,v2,t") from None
        q1, q2 = _triple(e1, "event"), _triple(e2, "event")
        verdict = distinguish_events(g, q1, q2, model)
        target = {"events": [list(q1), list(q2)]}
    else:
        raise UsageError("distinguish needs --nodes u,v or --events u,v,t:u2,v2,t")
    payload = {**target, "model": verdict.model, "verdict": verdict.result.value, "witness": verdict.witness}
    _emit(args, payload, f"{verdict.result.value} [{verdict.model}] {verdict.witness}")
    return OK


def cmd_props(args) -> int:
    g = gc.load_events(args.graph)
    p = static_properties(g, args.time)
    js = p.to_json()
    _emit(args, js, f"diameter {js['diameter']}  girth {js['girth']}  circuit_rank {js['circuit_rank']}")
    return OK


def cmd_corpus(args) -> int:
    if args.action != "verify":
        raise UsageError(f"unknown corpus action {args.action!r}")
    names = args.case or None
    for n in names or ():
        if n not in CATALOG:
            raise UsageError(f"unknown case {n!r}; known: {', '.join(sorted(CATALOG))}")
    report = corpus_verify(names)
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        for r in report.results:
            mark = "ok  " if r.passed else "FAIL"
            extra = "" if r.passed else f"  (expected {r.expected!r}, got {r.actual!r})"
            print(f"{mark} {r.case:12s} {r.description}{extra}")
        n_ok = sum(r.passed for r in report.results)
        print(f"{n_ok}/{len(report.results)} checks passed in {report.seconds:.2f}s")
    return OK if report.passed else FAILED


def cmd_injectivity(args) -> int:
    times = range(args.tmin, args.tmax + 1)
    rep = exhaustive_injectivity(args.features, args.edge_features, times, args.n, args.base)
    payload = {
        "multisets": rep.multisets,
        "distinct": rep.distinct,
        "pairs": rep.pairs,
        "injective": rep.injective,
        "beta": rep.params.beta,
        "k": rep.params.k,
    }
    text = f"{rep.multisets} multisets, {rep.distinct} distinct sums ({rep.pairs} pairs): " + (
        "injective" if rep.injective else "COLLISION"
    )
    _emit(args, payload, text)
    return OK if rep.injective else FAILED


def cmd_convert(args) -> int:
    if bool(args.dtdg) == bool(args.ctdg):
        raise UsageError("convert needs exactly one of --dtdg or --ctdg")
    if args.dtdg:
        out = gc.dump_events(gc.dtdg_to_ctdg(gc.load_snapshots(args.dtdg), args.delta))
    else:
        seq = gc.ctdg_to_dtdg(gc.load_events(args.ctdg), args.delta, args.snapshots)
        out = gc.dump_snapshots(seq)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="base seed for randomized parts (default 0)")

    p = argparse.ArgumentParser(prog="tgx", description="Temporal graph expressiveness toolkit.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("wl", parents=[common], help="temporal WL refinement / comparison")
    s.add_argument("--a", required=True, help="event file")
    s.add_argument("--b", help="second event file (comparison mode)")
    s.add_argument("--time", type=int)
    s.add_argument("--max-rounds", type=int)
    s.set_defaults(fn=cmd_wl)

    s = sub.add_parser("tct", parents=[common], help="dump a computation tree")
    s.add_argument("--graph", required=True)
    s.add_argument("--node", type=int, required=True)
    s.add_argument("--time", type=int)
    s.add_argument("--layers", type=int, default=2)
    s.add_argument("--monotone", action="store_true")
    s.set_defaults(fn=cmd_tct)

    s = sub.add_parser("posfeat", parents=[common], help="relative positional features")
    s.add_argument("--graph", required=True)
    s.add_argument("--dim", type=int, default=4)
    s.add_argument("--time", type=int)
    s.add_argument("--normalize", choices=["none", "l1"], default="none")
    s.set_defaults(fn=cmd_posfeat)

    s = sub.add_parser("embed", parents=[common], help="PINT node or edge embedding")
    s.add_argument("--graph", required=True)
    s.add_argument("--edge", help="u,v,t")
    s.add_argument("--node", type=int)
    s.add_argument("--time", type=int)
    s.add_argument("--layers", type=int, default=2)
    s.add_argument("--dim", type=int, default=4)
    s.add_argument("--no-pos", action="store_true")
    s.add_argument("--memory", choices=[IDENTITY, INJECTIVE], default=INJECTIVE)
    s.add_argument("--mode", choices=["exact", "numeric"], default="exact")
    s.set_defaults(fn=cmd_embed)

    s = sub.add_parser("caw", parents=[common], help="anonymized causal walks of an event")
    s.add_argument("--graph", required=True)
    s.add_argument("--event", required=True, help="u,v,t")
    s.add_argument("--len", type=int, default=3, help="walk length in nodes")
    s.set_defaults(fn=cmd_caw)

    s = sub.add_parser("distinguish", parents=[common], help="model verdict on a node or event pair")
    s.add_argument("--graph", required=True)
    s.add_argument("--nodes", help="u,v")
    s.add_argument("--events", help="u,v,t:u2,v2,t")
    s.add_argument("--time", type=int)
    s.add_argument("--model", required=True, help="twl | mptgn(L[,memory]) | pint(L[,d]) | tgat(L) | tgn_att(L) | caw(L)")
    s.set_defaults(fn=cmd_distinguish)

    s = sub.add_parser("props", parents=[common], help="static diameter, girth, circuit rank")
    s.add_argument("--graph", required=True)
    s.add_argument("--time", type=int)
    s.set_defaults(fn=cmd_props)

    s = sub.add_parser("corpus", parents=[common], help="verify the separation catalog")
    s.add_argument("action", choices=["verify"])
    s.add_argument("--case", action="append", help="restrict to a case (repeatable)")
    s.set_defaults(fn=cmd_corpus)

    s = sub.add_parser("injectivity-check", parents=[common], help="exhaustive multiset-sum collision scan")
    s.add_argument("--features", type=int, default=2)
    s.add_argument("--edge-features", type=int, default=2)
    s.add_argument("--tmin", type=int, default=1)
    s.add_argument("--tmax", type=int, default=2)
    s.add_argument("--n", type=int, default=4, help="multisets of size < n")
    s.add_argument("--base", type=int, default=10)
    s.set_defaults(fn=cmd_injectivity)

    s = sub.add_parser("convert", parents=[common], help="snapshots <-> event stream")
    s.add_argument("--dtdg", help="snapshot file to convert to events")
    s.add_argument("--ctdg", help="event file to convert to snapshots")
    s.add_argument("--delta", type=int, default=1)
    s.add_argument("--snapshots", type=int, help="total snapshot count (keeps trailing empties)")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_convert)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"tgx: error: {exc}", file=sys.stderr)
        return USAGE
    except (OSError, ValueError, KeyError) as exc:
        print(f"tgx: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
