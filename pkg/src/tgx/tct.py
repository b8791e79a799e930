"""Temporal computation trees.

``build_tct`` unrolls message passing from a node to a fixed depth;
``build_monotone_tct`` keeps only root-to-leaf paths whose timestamps
strictly decrease. Isomorphism is decided by bottom-up interning of
``(level, state, sorted child triples)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Mapping

from .graph import TemporalGraph, UnknownNodeError
from .injective import CanonicalId, intern

__all__ = [
    "Tct",
    "TctNode",
    "build_monotone_tct",
    "build_tct",
    "dump_tct",
    "level_counts",
    "monotone_walks",
    "tct_canonical",
    "tct_isomorphic",
    "temporal_diameter",
    "truncate",
]

StateFn = Callable[[int], Hashable]


@dataclass
class TctNode:
    graph_node: int
    state: Hashable
    level: int
    in_edge: tuple[tuple[int, ...], int] | None = None
    children: list["TctNode"] = field(default_factory=list)

    def walk(self) -> Iterator["TctNode"]:
        stack = [self]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.children))

    def height(self) -> int:
        return max((c.height() + 1 for c in self.children), default=0)


@dataclass
class Tct:
    root: TctNode
    query_time: int
    depth: int | None  # None: monotone tree of unbounded depth

    def __len__(self) -> int:
        return sum(1 for _ in self.root.walk())

    def height(self) -> int:
        return self.root.height()


def _state_fn(g: TemporalGraph, states) -> StateFn:
    if states is None:
        return lambda n: g.node_feats[n]
    if callable(states):
        return states
    return lambda n: states[n]


def build_tct(
    g: TemporalGraph,
    v: int,
    t: int,
    L: int,
    states: Mapping[int, Hashable] | StateFn | None = None,
) -> Tct:
    """Depth-``L`` computation tree of ``v`` at time ``t``.

    ``states`` maps graph nodes to the value attached to their tree copies
    (node features by default).
    """
    if L < 0:
        raise ValueError("depth must be >= 0")
    if v not in g.node_feats:
        raise UnknownNodeError(f"unknown node {v}")
    state = _state_fn(g, states)

    def expand(node: int, level: int, in_edge) -> TctNode:
        out = TctNode(node, state(node), level, in_edge)
        if level < L:
            for tp, u, f in g.incident(node, t):
                out.children.append(expand(u, level + 1, (f, tp)))
        return out

    return Tct(expand(v, 0, None), t, L)


def build_monotone_tct(
    g: TemporalGraph,
    v: int,
    t: int,
    states: Mapping[int, Hashable] | StateFn | None = None,
    max_depth: int | None = None,
) -> Tct:
    """Maximal subtree of the TCT whose paths have strictly decreasing times."""
    if v not in g.node_feats:
        raise UnknownNodeError(f"unknown node {v}")
    state = _state_fn(g, states)

    def expand(node: int, level: int, bound: int, in_edge) -> TctNode:
        out = TctNode(node, state(node), level, in_edge)
        if max_depth is None or level < max_depth:
            for tp, u, f in g.incident(node, bound):
                out.children.append(expand(u, level + 1, tp, (f, tp)))
        return out

    return Tct(expand(v, 0, t, None), t, max_depth)


def truncate(tree: Tct, depth: int) -> Tct:
    def cut(n: TctNode) -> TctNode:
        kids = [cut(c) for c in n.children] if n.level < depth else []
        return TctNode(n.graph_node, n.state, n.level, n.in_edge, kids)

    d = depth if tree.depth is None else min(depth, tree.depth)
    return Tct(cut(tree.root), tree.query_time, d)


def _code(n: TctNode) -> CanonicalId:
    kids = sorted((_code(c), c.in_edge[0], c.in_edge[1]) for c in n.children)
    return intern(("tct", n.level, n.state, tuple(kids)))


def tct_canonical(tree: Tct) -> CanonicalId:
    return _code(tree.root)


def tct_isomorphic(a: Tct, b: Tct) -> bool:
    return tct_canonical(a) == tct_canonical(b)


def level_counts(tree: Tct, node: int, d: int) -> list[int]:
    """Occurrences of graph node ``node`` at levels ``0..d-1``."""
    out = [0] * d
    for n in tree.root.walk():
        if n.graph_node == node and n.level < d:
            out[n.level] += 1
    return out


def temporal_diameter(g: TemporalGraph, t: int) -> int:
    """Edge count of the longest walk with strictly monotone timestamps before ``t``.

    Dynamic programming over timestamps in increasing order; events sharing a
    timestamp read the lengths from before their batch.
    """
    best: dict[int, int] = {}
    out = 0
    evs = [e for e in g.events if e.t < t]
    i = 0
    while i < len(evs):
        j = i
        while j < len(evs) and evs[j].t == evs[i].t:
            j += 1
        upd: dict[int, int] = {}
        for e in evs[i:j]:
            for a, b in ((e.u, e.v), (e.v, e.u)):
                cand = best.get(b, 0) + 1
                if cand > upd.get(a, 0):
                    upd[a] = cand
        for a, val in upd.items():
            if val > best.get(a, 0):
                best[a] = val
                out = max(out, val)
        i = j
    return out


def monotone_walks(g: TemporalGraph, v: int, t: int, max_len: int | None = None):
    """Yield every monotone walk from ``v`` as ``[(node, time), ...]``.

    The first pair carries the query time ``t``; each later pair carries the
    time of the event used to reach it. Walks are maximal unless cut at
    ``max_len`` nodes. One walk per event sequence (multigraph duplicates
    yield duplicate walks).
    """

    def rec(path):
        node, bound = path[-1]
        nxt = g.incident(node, bound) if max_len is None or len(path) < max_len else []
        if not nxt:
            yield list(path)
            return
        for tp, u, _f in nxt:
            path.append((u, tp))
            yield from rec(path)
            path.pop()

    yield from rec([(v, t)])


def dump_tct(tree: Tct) -> str:
    lines = []
    for n in tree.root.walk():
        via = "" if n.in_edge is None else f" via=({';'.join(map(str, n.in_edge[0]))},{n.in_edge[1]})"
        lines.append(f"{'  ' * n.level}{n.level} {n.graph_node} state={_fmt_state(n.state)}{via}")
    return "\n".join(lines)


def _fmt_state(s) -> str:
    if isinstance(s, tuple):
        return "(" + ",".join(_fmt_state(x) for x in s) + ")"
    return repr(s) if isinstance(s, CanonicalId) else str(s)
