"""Distinguishability oracles and static graph properties.

Every model family is reduced to a comparable code: interned ids for the
exact families (temporal WL, injective MP-TGN, PINT, CAW) and float vectors
over several seeds for the attention baselines.
"""

from __future__ import annotations

import math
import re
from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .baselines import AttentionModel, caw_encode_event
from .graph import TemporalGraph, UnknownNodeError
from .pint import IDENTITY, INJECTIVE, PintConfig, PintEngine
from .tct import temporal_diameter
from .twl import twl_refine

__all__ = [
    "AmbiguousVerdict",
    "INF",
    "ModelSpec",
    "Result",
    "StaticProps",
    "Verdict",
    "distinguish_events",
    "distinguish_nodes",
    "mptgn_multisets",
    "parse_model",
    "simple_cycle_count",
    "static_properties",
    "wl_matched_depth",
]

INF = math.inf
EQUAL_TOL = 1e-9
DIFFER_TOL = 1e-6


class Result(str, Enum):
    DISTINGUISHED = "Distinguished"
    INDISTINGUISHABLE = "Indistinguishable"


@dataclass(frozen=True)
class Verdict:
    result: Result
    model: str
    witness: str = ""

    @property
    def distinguished(self) -> bool:
        return self.result is Result.DISTINGUISHED


class AmbiguousVerdict(RuntimeError):
    """Numeric gap between the equality and difference tolerances."""


FAMILIES = ("twl", "mptgn", "pint", "tgat", "tgn_att", "caw")


@dataclass(frozen=True)
class ModelSpec:
    """``layers`` doubles as the walk length (in nodes) for ``caw``."""

    family: str
    layers: int = 2
    memory: str = IDENTITY
    dim: int = 4
    seeds: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown model family {self.family!r}; expected one of {FAMILIES}")

    @property
    def tag(self) -> str:
        if self.family == "twl":
            return "twl"
        if self.family == "mptgn":
            return f"mptgn({self.layers},{self.memory})"
        if self.family == "pint":
            return f"pint({self.layers},{self.dim},{self.memory})"
        return f"{self.family}({self.layers})"

    def pint_config(self) -> PintConfig:
        if self.family == "mptgn":
            return PintConfig(L=self.layers, use_positional=False, memory=self.memory)
        if self.family == "pint":
            return PintConfig(L=self.layers, d=self.dim, use_positional=True, memory=self.memory)
        raise ValueError(f"{self.family} is not an exact message-passing family")


_MODEL_RE = re.compile(r"^\s*(\w+)\s*(?:\(([^)]*)\))?\s*$")


def parse_model(text: str) -> ModelSpec:
    """Parse tags like ``twl``, ``tgat(2)``, ``mptgn(2,injective)``, ``pint(3,4)``, ``caw(3)``."""
    m = _MODEL_RE.match(text)
    if not m:
        raise ValueError(f"bad model tag {text!r}")
    family = m.group(1)
    args = [a.strip() for a in (m.group(2) or "").split(",") if a.strip()]
    kw: dict = {}
    try:
        if family == "pint":
            kw["memory"] = INJECTIVE
            if args:
                kw["layers"] = int(args[0])
            if len(args) > 1:
                kw["dim"] = int(args[1])
            if len(args) > 2:
                kw["memory"] = args[2]
        elif args:
            kw["layers"] = int(args[0])
            if len(args) > 1:
                kw["memory"] = args[1]
    except ValueError:
        raise ValueError(f"bad model tag {text!r}") from None
    return ModelSpec(family, **kw)


def _spec(model: ModelSpec | str) -> ModelSpec:
    return parse_model(model) if isinstance(model, str) else model


def _check_nodes(g: TemporalGraph, *nodes: int) -> None:
    for n in nodes:
        if n not in g.node_feats:
            raise UnknownNodeError(f"unknown node {n}")


def _exact(a, b, tag: str, what: str) -> Verdict:
    if a != b:
        return Verdict(Result.DISTINGUISHED, tag, f"{what}: {a!r} != {b!r}")
    return Verdict(Result.INDISTINGUISHABLE, tag, f"{what}: both {a!r}")


def distinguish_nodes(g: TemporalGraph, u: int, v: int, t: int, model: ModelSpec | str) -> Verdict:
    spec = _spec(model)
    _check_nodes(g, u, v)
    if spec.family == "twl":
        hist = twl_refine(g, t)
        fin = hist.final
        return _exact(fin.colors[u], fin.colors[v], spec.tag, f"colors at round {fin.round}")
    if spec.family in ("mptgn", "pint"):
        cfg = spec.pint_config()
        eng = PintEngine.for_graphs(cfg, [g], t)
        mem = eng.memory(g, t)
        pos = eng.positions(g, t)
        hu = eng.node_embedding(g, u, t, mem, pos)
        hv = eng.node_embedding(g, v, t, mem, pos)
        return _exact(hu, hv, spec.tag, f"layer-{cfg.L} embeddings")
    if spec.family in ("tgat", "tgn_att"):
        gaps = []
        for seed in range(spec.seed, spec.seed + spec.seeds):
            net = AttentionModel(spec.layers, seed=seed, dim=spec.dim, memory=spec.family == "tgn_att")
            h = net.embeddings(g, t)
            gaps.append(float(np.max(np.abs(h[u] - h[v]))) if h[u].size else 0.0)
        worst = max(gaps)
        if worst > DIFFER_TOL:
            seed = spec.seed + int(np.argmax(gaps))
            return Verdict(Result.DISTINGUISHED, spec.tag, f"seed {seed}: max gap {worst:.3e}")
        if worst <= EQUAL_TOL:
            return Verdict(Result.INDISTINGUISHABLE, spec.tag, f"{spec.seeds} seeds, max gap {worst:.3e}")
        raise AmbiguousVerdict(f"{spec.tag}: max gap {worst:.3e} between tolerances")
    raise ValueError(f"{spec.family} does not embed single nodes")


def distinguish_events(
    g: TemporalGraph,
    e1: Sequence[int],
    e2: Sequence[int],
    model: ModelSpec | str,
) -> Verdict:
    """Compare two synchronous query events ``(u, v, t)``."""
    spec = _spec(model)
    (u1, v1, t1), (u2, v2, t2) = e1, e2
    if t1 != t2:
        raise ValueError(f"events are not synchronous (t={t1} vs t={t2})")
    _check_nodes(g, u1, v1, u2, v2)
    t = t1
    if spec.family in ("mptgn", "pint"):
        cfg = spec.pint_config()
        eng = PintEngine.for_graphs(cfg, [g], t)
        mem = eng.memory(g, t)
        pos = eng.positions(g, t)
        a = eng.edge_embedding(g, u1, v1, t, mem, pos)
        b = eng.edge_embedding(g, u2, v2, t, mem, pos)
        return _exact(a, b, spec.tag, "edge embeddings")
    if spec.family == "caw":
        a = caw_encode_event(g, u1, v1, t, spec.layers)
        b = caw_encode_event(g, u2, v2, t, spec.layers)
        return _exact(a, b, spec.tag, "event codes")
    raise ValueError(f"{spec.family} does not embed events")


# --- static properties -----------------------------------------------------


@dataclass(frozen=True)
class StaticProps:
    diameter: float
    girth: float
    circuit_rank: int

    def as_tuple(self) -> tuple:
        return (self.diameter, self.girth, self.circuit_rank)

    def to_json(self) -> dict:
        enc = lambda x: "inf" if x == INF else int(x)  # noqa: E731
        return {"diameter": enc(self.diameter), "girth": enc(self.girth), "circuit_rank": self.circuit_rank}


def _projection(g: TemporalGraph, t: int | None) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in g.nodes}
    for e in g.events:
        if t is None or e.t < t:
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
    return adj


def _bfs(adj: dict[int, set[int]], s: int) -> dict[int, int]:
    dist = {s: 0}
    q = deque([s])
    while q:
        x = q.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def _girth(adj: dict[int, set[int]]) -> float:
    # shortest cycle through each root: a non-tree edge closes a cycle of length d[x]+d[y]+1
    best = INF
    for s in adj:
        dist, parent = {s: 0}, {s: None}
        q = deque([s])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y], parent[y] = dist[x] + 1, x
                    q.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def static_properties(g: TemporalGraph, t: int | None = None) -> StaticProps:
    """Diameter, girth and circuit rank of the simple static graph of events before ``t``."""
    adj = _projection(g, t)
    n = len(adj)
    m = sum(len(s) for s in adj.values()) // 2
    seen: set[int] = set()
    comps = 0
    diameter: float = 0
    for s in adj:
        dist = _bfs(adj, s)
        if s not in seen:
            comps += 1
            seen.update(dist)
        if len(dist) < n:
            diameter = INF
        elif diameter != INF:
            diameter = max(diameter, max(dist.values()))
    return StaticProps(diameter, _girth(adj), m - n + comps)


def simple_cycle_count(g: TemporalGraph, t: int | None = None) -> int:
    """Number of simple cycles (length >= 3) by backtracking; meant for small graphs."""
    adj = _projection(g, t)
    order = sorted(adj)
    count = 0
    for i, s in enumerate(order):
        allowed = set(order[i:])

        def extend(x: int, visited: set[int], length: int) -> None:
            nonlocal count
            for y in adj[x]:
                if y == s and length >= 3:
                    count += 1
                elif y not in visited and y in allowed and y != s:
                    visited.add(y)
                    extend(y, visited, length + 1)
                    visited.remove(y)

        extend(s, {s}, 1)
    return count // 2  # each cycle is found once per direction


# --- multiset comparison used for whole-graph checks ------------------------


def mptgn_multisets(
    a: TemporalGraph, b: TemporalGraph, t: int, L: int, memory: str = IDENTITY
) -> tuple[Counter, Counter]:
    """Node-embedding multisets of two graphs from one shared exact engine."""
    cfg = PintConfig(L=max(1, L), use_positional=False, memory=memory)
    eng = PintEngine.for_graphs(cfg, [a, b], t)
    out = []
    for g in (a, b):
        h = eng.node_embeddings(g, t, eng.memory(g, t))
        out.append(Counter(h.values()))
    return out[0], out[1]


def wl_matched_depth(a: TemporalGraph, b: TemporalGraph, t: int) -> int:
    """Depth at which the multiset comparison should agree with temporal WL."""
    sa, sb = twl_refine(a, t).stabilized_at, twl_refine(b, t).stabilized_at
    delta = max(temporal_diameter(a, t), temporal_diameter(b, t))
    return max(1, max(sa or 0, sb or 0) + delta)

