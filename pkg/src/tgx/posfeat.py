"""Relative positional features maintained incrementally over an event stream.

``r[(i, u)][k]`` counts the occurrences of node ``i`` at level ``k`` of the
monotone computation tree of ``u``. An event ``(u, v, t)`` hangs ``u``'s
monotone tree under ``v``'s root (and vice versa), so the update is a shift
by one level followed by an add, restricted to the nodes each side can reach.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import Event, TemporalGraph
from .tct import build_monotone_tct, level_counts

__all__ = [
    "PosStore",
    "apply_batch",
    "brute_force_counts",
    "build_store",
    "dump_store",
    "get_feature",
    "init_store",
    "normalize_l1",
    "shift",
]

Vec = tuple[int, ...]


@dataclass
class PosStore:
    d: int
    vecs: dict[tuple[int, int], Vec] = field(default_factory=dict)
    reach: dict[int, set[int]] = field(default_factory=dict)
    clock: int = 0
    batches: int = 0

    def add_node(self, i: int) -> None:
        if i not in self.reach:
            self.reach[i] = {i}
            self.vecs[(i, i)] = (1,) + (0,) * (self.d - 1)

    def nonzero(self) -> list[tuple[int, int, Vec]]:
        return sorted((i, u, v) for (i, u), v in self.vecs.items() if any(v))


def init_store(nodes: Iterable[int], d: int) -> PosStore:
    if d < 1:
        raise ValueError("positional dimension d must be >= 1")
    store = PosStore(d)
    for i in nodes:
        store.add_node(i)
    return store


def shift(v: Sequence[int]) -> Vec:
    """Multiply by the down-shift matrix: component k moves to k+1, the last drops."""
    return (0,) + tuple(v[:-1])


def _add(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def apply_batch(store: PosStore, events: Sequence[Event]) -> PosStore:
    """Apply all events of one timestamp simultaneously (in place).

    Every right-hand side reads pre-batch values. Repeated partners count
    once per event.
    """
    if not events:
        return store
    t = events[0].t
    if any(e.t != t for e in events):
        raise ValueError("batch mixes timestamps")
    # a fresh store also accepts t == 0
    if t < store.clock or (t == store.clock and store.batches):
        raise ValueError(f"batch time {t} not after clock {store.clock}")
    partners: dict[int, list[int]] = {}
    for e in events:
        if e.u == e.v:
            raise ValueError("self-loop events are not supported")
        for a in (e.u, e.v):
            store.add_node(a)
        partners.setdefault(e.v, []).append(e.u)
        partners.setdefault(e.u, []).append(e.v)

    zero = (0,) * store.d
    new_vecs: dict[tuple[int, int], Vec] = {}
    new_reach: dict[int, set[int]] = {}
    for v, us in partners.items():
        acc: dict[int, Vec] = {}
        for u in us:
            for i in store.reach[u]:
                acc[i] = _add(acc.get(i, zero), store.vecs.get((i, u), zero))
        for i, s in acc.items():
            new_vecs[(i, v)] = _add(shift(s), store.vecs.get((i, v), zero))
        new_reach[v] = store.reach[v].union(*(store.reach[u] for u in us))

    store.vecs.update(new_vecs)
    store.reach.update(new_reach)
    store.clock = t
    store.batches += 1
    return store


def build_store(g: TemporalGraph, d: int, t: int | None = None) -> PosStore:
    """Store after every event strictly before ``t`` (all events when ``None``)."""
    store = init_store(g.nodes, d)
    batch: list[Event] = []
    for e in g.events:
        if t is not None and e.t >= t:
            break
        if batch and e.t != batch[0].t:
            apply_batch(store, batch)
            batch = []
        batch.append(e)
    apply_batch(store, batch)
    return store


def get_feature(store: PosStore, i: int, u: int) -> Vec:
    return store.vecs.get((i, u), (0,) * store.d)


def normalize_l1(v: Sequence[int]) -> list[Fraction]:
    total = sum(abs(x) for x in v)
    if total == 0:
        return [Fraction(0)] * len(v)
    return [Fraction(x, total) for x in v]


def brute_force_counts(g: TemporalGraph, i: int, u: int, t: int, d: int) -> Vec:
    """Layer counts of ``i`` in the monotone tree of ``u``, read off the tree itself."""
    tree = build_monotone_tct(g, u, t, max_depth=d - 1)
    return tuple(level_counts(tree, i, d))


def dump_store(store: PosStore, normalize: bool = False) -> str:
    lines = []
    for i, u, v in store.nonzero():
        vals = normalize_l1(v) if normalize else v
        lines.append(f"{i} {u} " + ",".join(str(x) for x in vals))
    return "\n".join(lines)
