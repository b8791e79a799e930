"""Executable catalog of separation examples.

Each case carries hand-built graphs (node colors as integer features, all
edge features equal, timestamps ordered as 1, 2, 3, ...) and the verdicts the
constructions are known to produce. :func:`corpus_verify` recomputes every
verdict and reports mismatches.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from .baselines import caw_anonymize, caw_graph_code, caw_walk_set, run_tgn_memory
from .expressiveness import (
    INF,
    StaticProps,
    distinguish_events,
    distinguish_nodes,
    static_properties,
)
from .graph import TemporalGraph, make_graph
from .tct import build_tct, tct_isomorphic, temporal_diameter
from .twl import twl_compare

__all__ = [
    "CATALOG",
    "Check",
    "CheckResult",
    "CorpusCase",
    "CorpusReport",
    "corpus_build",
    "corpus_verify",
    "verify_case",
]


@dataclass(frozen=True)
class Check:
    """One expectation. ``kind`` selects the evaluator, ``args`` refer to graphs by name."""

    kind: str
    args: tuple
    expected: Any
    note: str = ""


@dataclass
class CorpusCase:
    name: str
    graphs: dict[str, TemporalGraph]
    labels: dict[str, int]
    checks: list[Check]
    description: str = ""

    def node(self, label: str) -> int:
        return self.labels[label]


@dataclass
class CheckResult:
    case: str
    kind: str
    description: str
    expected: Any
    actual: Any
    passed: bool
    witness: str = ""


@dataclass
class CorpusReport:
    results: list[CheckResult] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def cases(self) -> dict[str, bool]:
        out: dict[str, bool] = {}
        for r in self.results:
            out[r.case] = out.get(r.case, True) and r.passed
        return out

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "cases": [
                {"case": name, "passed": ok, "checks": [_result_json(r) for r in self.results if r.case == name]}
                for name, ok in self.cases().items()
            ],
        }


def _jsonable(x):
    if isinstance(x, float) and x == INF:
        return "inf"
    if isinstance(x, StaticProps):
        return x.to_json()
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if hasattr(x, "value"):
        return x.value
    return x


def _result_json(r: CheckResult) -> dict:
    return {
        "kind": r.kind,
        "check": r.description,
        "expected": _jsonable(r.expected),
        "actual": _jsonable(r.actual),
        "passed": r.passed,
    }


# --- graph construction helpers --------------------------------------------


class _Builder:
    """Name nodes by label; ids are assigned in first-use order."""

    def __init__(self) -> None:
        self.labels: dict[str, int] = {}

    def id(self, label: str) -> int:
        return self.labels.setdefault(label, len(self.labels))

    def graph(self, edges: Iterable[tuple[str, str, int]], colors: dict[str, int] | None = None) -> TemporalGraph:
        evs = [(self.id(a), self.id(b), t) for a, b, t in edges]
        feats = {self.id(k): (c,) for k, c in (colors or {}).items()}
        default = (0,) if colors else ()
        return make_graph(evs, feats, default_feat=default)


D, I = "Distinguished", "Indistinguishable"


def _fig3_left() -> CorpusCase:
    b = _Builder()
    colors = {"u": 0, "v": 0, "a": 0, "z": 1, "w": 1, "b": 2, "c": 2}
    g = b.graph(
        [("a", "z", 1), ("u", "z", 1), ("u", "w", 1), ("v", "w", 1), ("z", "b", 2), ("w", "c", 2)], colors
    )
    checks = [
        Check("tct", ("g", "u", "v", 3, 2), False, "2-depth trees of u and v"),
        Check("nodes", ("g", "u", "v", 3, "tgat(2)"), I),
        Check("nodes", ("g", "u", "v", 3, "tgn_att(2)"), I),
        Check("nodes", ("g", "u", "v", 3, "mptgn(2,identity)"), D),
    ]
    return CorpusCase("fig3_left", {"g": g}, b.labels, checks, "attention is blind to neighbor proportions")


def _figS2() -> CorpusCase:
    case = _fig3_left()
    case.name = "figS2"
    case.description = "mean memory keeps the symmetric states equal"
    case.checks = [
        Check("tct", ("g", "z", "w", 3, 2), True, "2-depth trees of z and w"),
        Check("tct", ("g", "u", "v", 3, 2), False, "2-depth trees of u and v"),
        Check("tgn_memory", ("g", 3, (("u", "v", "a"), ("z", "w"), ("b", "c"))), True, "memory state groups"),
        Check("nodes", ("g", "u", "v", 3, "tgn_att(2)"), I),
    ]
    return case


def _figS1() -> CorpusCase:
    b = _Builder()
    g = b.graph([("b", "c", 1), ("c", "v", 2), ("a", "u", 2)])
    checks = [
        Check("nodes", ("g", "u", "v", 3, "mptgn(1,injective)"), D, "memory, one layer"),
        Check("nodes", ("g", "u", "v", 3, "mptgn(1,identity)"), I, "no memory, one layer"),
        Check("nodes", ("g", "u", "v", 3, "mptgn(3,identity)"), D, "no memory, one layer plus temporal diameter"),
        Check("diameter", ("g", 3), 2),
    ]
    return CorpusCase("figS1", {"g": g}, b.labels, checks, "memory helps shallow models")


def _fig3_right() -> CorpusCase:
    b = _Builder()
    g = b.graph([("u", "v", 1), ("v", "w", 2), ("w", "z", 1), ("u'", "v'", 1), ("v'", "x'", 2)])
    checks = [
        Check("tct", ("g", "u", "z", 3, 3), True, "trees of u and z"),
        Check("events", ("g", ("u", "v", 3), ("v", "z", 3), "mptgn(3,identity)"), I),
        Check("tct", ("g", "u", "u'", 3, 3), False, "3-depth trees of u and u'"),
        Check("events", ("g", ("u", "z", 3), ("u'", "z", 3), "mptgn(3,identity)"), D),
        Check("events", ("g", ("u", "z", 3), ("u'", "z", 3), "caw(3)"), I),
        Check("events", ("g", ("u", "z", 3), ("u'", "z", 3), "pint(3,4)"), D),
    ]
    return CorpusCase("fig3_right", {"g": g}, b.labels, checks, "message passing and walks fail on different pairs")


def _figS3_left() -> CorpusCase:
    b = _Builder()
    g = b.graph([("u", "v", 1), ("v", "w", 2), ("w", "z", 1)])
    uv, zv = ("u", "v", 3), ("z", "v", 3)
    checks = [
        Check("tct", ("g", "u", "z", 3, 3), True, "trees of u and z"),
        Check("events", ("g", uv, zv, "caw(3)"), D),
        Check("events", ("g", uv, zv, "mptgn(3,identity)"), I),
        Check("events", ("g", uv, zv, "pint(3,4)"), D),
        Check("anon", ("g", "u", uv, 3), ((0, 1, 0), (1, 0, 0))),
        Check("anon", ("g", "v", uv, 3), ((0, 1, 0), (2, 0, 0))),
        Check("anon", ("g", "w", uv, 3), ((0, 0, 0), (0, 1, 0))),
        Check("anon", ("g", "z", uv, 3), ((0, 0, 0), (0, 0, 1))),
        Check("anon", ("g", "z", zv, 3), ((0, 0, 1), (1, 0, 0))),
        Check("anon", ("g", "w", zv, 3), ((0, 1, 0), (0, 1, 0))),
        Check("anon", ("g", "v", zv, 3), ((0, 0, 0), (2, 0, 0))),
        Check("anon", ("g", "u", zv, 3), ((0, 0, 0), (0, 1, 0))),
    ]
    return CorpusCase("figS3_left", {"g": g}, b.labels, checks, "walk identities separate a pair message passing cannot")


def _figS3_right() -> CorpusCase:
    b = _Builder()
    g = b.graph(
        [
            ("u", "v", 1),
            ("u'", "v'", 1),
            ("z", "w", 1),
            ("v", "x", 2),
            ("v'", "x'", 2),
            ("x", "y", 3),
            ("x'", "y'", 3),
            ("y", "q", 1),
        ]
    )
    uz, uz2 = ("u", "z", 4), ("u'", "z", 4)
    checks = [
        Check("tct", ("g", "u", "u'", 4, 3), True, "3-depth trees of u and u'"),
        Check("tct", ("g", "u", "u'", 4, 4), False, "4-depth trees of u and u'"),
        Check("events", ("g", uz, uz2, "mptgn(4,identity)"), D),
        Check("events", ("g", uz, uz2, "caw(2)"), I),
        Check("events", ("g", uz, uz2, "caw(4)"), I),
        Check("events", ("g", uz, uz2, "pint(4,4)"), D),
        Check("anon", ("g", "u", uz, 2), ((0, 0), (1, 0))),
        Check("anon", ("g", "v", uz, 2), ((0, 0), (0, 1))),
        Check("anon", ("g", "z", uz, 2), ((0, 0), (1, 0))),
        Check("anon", ("g", "w", uz, 2), ((0, 0), (0, 1))),
        Check("anon", ("g", "u'", uz2, 2), ((0, 0), (1, 0))),
        Check("anon", ("g", "v'", uz2, 2), ((0, 0), (0, 1))),
    ]
    return CorpusCase("figS3_right", {"g": g}, b.labels, checks, "deep structure invisible to short causal walks")


def _fig4() -> CorpusCase:
    b = _Builder()
    colors = {}
    tri = []
    for i in (1, 2):
        u, v, w = f"u{i}", f"v{i}", f"w{i}"
        tri += [(u, v, 1), (v, w, 2), (w, u, 3)]
        colors.update({u: 0, v: 1, w: 2})
    g = b.graph(tri, colors)
    hexa = [
        ("u1'", "v1'", 1),
        ("v1'", "w1'", 2),
        ("w1'", "u2'", 3),
        ("u2'", "v2'", 1),
        ("v2'", "w2'", 2),
        ("w2'", "u1'", 3),
    ]
    colors2 = {f"{c}{i}'": k for i in (1, 2) for c, k in (("u", 0), ("v", 1), ("w", 2))}
    g2 = b.graph(hexa, colors2)
    checks = [
        Check("twl", ("g", "g2", 4), "Inconclusive"),
        Check("props", ("g", 4), (INF, 3, 2)),
        Check("props", ("g2", 4), (3, 6, 1)),
    ]
    return CorpusCase("fig4", {"g": g, "g2": g2}, b.labels, checks, "two triangles against a hexagon")


def _fig5() -> CorpusCase:
    b = _Builder()
    g = b.graph([("u", "v", 1), ("v", "z", 1), ("u", "z", 2)])
    e1, e2 = ("u", "v", 3), ("v", "z", 3)
    checks = [
        Check("events", ("g", e1, e2, "pint(3,4)"), I),
        Check("events", ("g", e1, e2, "mptgn(3,identity)"), I),
        Check("events", ("g", e1, e2, "caw(3)"), I),
    ]
    return CorpusCase("fig5", {"g": g}, b.labels, checks, "a symmetric triangle defeats every model")


def _fig7() -> CorpusCase:
    b = _Builder()
    g1 = b.graph([("u", "v", 1), ("z", "w", 1), ("x", "y", 1), ("v", "w", 2), ("u", "z", 3)])
    g2 = b.graph([("a'", "b'", 1), ("z'", "w'", 1), ("x'", "y'", 1), ("b'", "y'", 2), ("a'", "z'", 3)])
    checks = [
        Check("caw_graph", ("g1", "g2", 3), True, "graph codes equal"),
        Check("props", ("g1", 4), (INF, 4, 1)),
        Check("props", ("g2", 4), (5, INF, 0)),
    ]
    return CorpusCase("fig7", {"g1": g1, "g2": g2}, b.labels, checks, "walk codes ignore cycles")


CATALOG: dict[str, Callable[[], CorpusCase]] = {
    "fig3_left": _fig3_left,
    "fig3_right": _fig3_right,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig7": _fig7,
    "figS1": _figS1,
    "figS2": _figS2,
    "figS3_left": _figS3_left,
    "figS3_right": _figS3_right,
}


def corpus_build(name: str) -> CorpusCase:
    try:
        return CATALOG[name]()
    except KeyError:
        raise KeyError(f"unknown corpus case {name!r}; known: {', '.join(sorted(CATALOG))}") from None


# --- evaluation -------------------------------------------------------------


def _evaluate(case: CorpusCase, chk: Check) -> tuple[Any, str, str]:
    """Return ``(actual, description, witness)``."""
    n = case.node
    gr = case.graphs
    a = chk.args
    if chk.kind == "nodes":
        g, x, y, t, model = a
        v = distinguish_nodes(gr[g], n(x), n(y), t, model)
        return v.result.value, f"{model} on nodes {x},{y} at t={t}", v.witness
    if chk.kind == "events":
        g, e1, e2, model = a
        q1 = (n(e1[0]), n(e1[1]), e1[2])
        q2 = (n(e2[0]), n(e2[1]), e2[2])
        v = distinguish_events(gr[g], q1, q2, model)
        return v.result.value, f"{model} on events {e1} vs {e2}", v.witness
    if chk.kind == "tct":
        g, x, y, t, depth = a
        iso = tct_isomorphic(build_tct(gr[g], n(x), t, depth), build_tct(gr[g], n(y), t, depth))
        return iso, chk.note or f"trees of {x},{y}", ""
    if chk.kind == "twl":
        ga, gb, t = a
        cmp = twl_compare(gr[ga], gr[gb], t)
        return cmp.verdict.value, f"temporal WL {ga} vs {gb} at t={t}", f"round {cmp.round}"
    if chk.kind == "props":
        g, t = a
        return static_properties(gr[g], t).as_tuple(), f"static properties of {g}", ""
    if chk.kind == "diameter":
        g, t = a
        return temporal_diameter(gr[g], t), f"temporal diameter of {g}", ""
    if chk.kind == "anon":
        g, w, (x, y, t), L = a
        su, sv = caw_walk_set(gr[g], n(x), t, L), caw_walk_set(gr[g], n(y), t, L)
        return caw_anonymize(n(w), su, sv), f"anonymized {w} for ({x},{y},{t})", ""
    if chk.kind == "caw_graph":
        ga, gb, L = a
        same = caw_graph_code(gr[ga], L) == caw_graph_code(gr[gb], L)
        return same, chk.note or "graph codes", ""
    if chk.kind == "tgn_memory":
        g, t, groups = a
        ok, worst = True, 0.0
        for seed in range(10):
            st = run_tgn_memory(gr[g], t, seed=seed).states
            for grp in groups:
                ref = st[n(grp[0])]
                for other in grp[1:]:
                    gap = float(np.max(np.abs(st[n(other)] - ref)))
                    worst = max(worst, gap)
                    ok = ok and gap <= 1e-9
        return ok, chk.note or "memory groups", f"max gap {worst:.3e}"
    raise ValueError(f"unknown check kind {chk.kind!r}")


def _same(expected, actual) -> bool:
    if isinstance(expected, tuple) and isinstance(actual, tuple):
        return len(expected) == len(actual) and all(_same(e, a) for e, a in zip(expected, actual))
    return expected == actual


def verify_case(case: CorpusCase) -> list[CheckResult]:
    out = []
    for chk in case.checks:
        try:
            actual, desc, witness = _evaluate(case, chk)
        except Exception as exc:  # a crash is a failed check, not a crashed report
            out.append(CheckResult(case.name, chk.kind, chk.note or chk.kind, chk.expected, f"error: {exc}", False))
            continue
        out.append(CheckResult(case.name, chk.kind, desc, chk.expected, actual, _same(chk.expected, actual), witness))
    return out


def corpus_verify(names: Iterable[str] | None = None) -> CorpusReport:
    """Run the named cases (all by default) and collect per-check results."""
    start = time.perf_counter()
    report = CorpusReport()
    for name in sorted(CATALOG) if names is None else list(names):
        report.results.extend(verify_case(corpus_build(name)))
    report.seconds = time.perf_counter() - start
    return report
