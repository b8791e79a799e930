"""Deterministic PINT engine: memory, positional augmentation, message passing.

Exact mode replaces every learned map with interning, and the neighbor
aggregation with :func:`~tgx.injective.injective_multiset_sum`, so two
embeddings are equal exactly when no injective model could tell them apart.
Numeric mode runs the literal decay-weighted sum with fixed-seed
``tanh(Wx + b)`` layers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from .graph import Event, TemporalGraph, UnknownNodeError
from .injective import AggParams, CanonicalId, enumerate_pair, injective_multiset_sum, intern
from .posfeat import PosStore, build_store, get_feature, normalize_l1

__all__ = [
    "MemoryState",
    "PintConfig",
    "PintEngine",
    "init_memory",
    "memory_step",
    "pint_edge_embedding",
    "pint_node_embedding",
    "run_memory",
]

EXACT, NUMERIC = "exact", "numeric"
INJECTIVE, IDENTITY = "injective", "identity"


# --- memory ---------------------------------------------------------------


@dataclass
class MemoryState:
    states: dict[int, CanonicalId]
    last_update: dict[int, int] = field(default_factory=dict)
    clock: int = 0
    steps: int = 0

    def copy(self) -> "MemoryState":
        return MemoryState(dict(self.states), dict(self.last_update), self.clock, self.steps)


def init_memory(g: TemporalGraph) -> MemoryState:
    """Every state starts as the interned node feature; last update at time 0."""
    return MemoryState({v: intern(("x", g.node_feats[v])) for v in g.nodes}, {v: 0 for v in g.nodes})


def memory_step(mem: MemoryState, batch: Sequence[Event]) -> MemoryState:
    """Apply one timestamp's events and return the new memory.

    Each touched node aggregates its messages ``(s_v, s_u, t - t_v, e)`` as a
    sorted multiset and then interns ``(s_v, message)``. All reads are pre-batch.
    """
    out = mem.copy()
    if not batch:
        return out
    t = batch[0].t
    if any(e.t != t for e in batch):
        raise ValueError("batch mixes timestamps")
    if t < mem.clock or (t == mem.clock and mem.steps):
        raise ValueError(f"stale batch time {t} (memory clock {mem.clock})")
    msgs: dict[int, list] = {}
    for e in batch:
        for a, b in ((e.u, e.v), (e.v, e.u)):
            if a not in mem.states or b not in mem.states:
                raise UnknownNodeError(f"unknown node {a if a not in mem.states else b}")
            msg = (mem.states[a], mem.states[b], t - mem.last_update.get(a, 0), e.feat)
            msgs.setdefault(a, []).append(msg)
    for v, ms in msgs.items():
        agg = intern(("memagg", tuple(sorted(ms))))
        out.states[v] = intern(("mem", mem.states[v], agg))
        out.last_update[v] = t
    out.clock = t
    out.steps += 1
    return out


def run_memory(g: TemporalGraph, t: int, memory: str = INJECTIVE) -> MemoryState:
    """Memory after all events strictly before ``t``; identity memory never moves."""
    mem = init_memory(g)
    if memory == IDENTITY:
        return mem
    if memory != INJECTIVE:
        raise ValueError(f"unknown memory kind {memory!r}")
    evs = [e for e in g.events if e.t < t]
    for _, grp in itertools.groupby(evs, key=lambda e: e.t):
        mem = memory_step(mem, list(grp))
    return mem


# --- config and engine ----------------------------------------------------


@dataclass(frozen=True)
class PintConfig:
    L: int = 2
    d: int = 4
    mode: str = EXACT
    alpha: float = 2.0
    beta: float = 1.0
    use_positional: bool = True
    memory: str = INJECTIVE
    seed: int = 0
    hidden: int = 8
    base: int = 2

    def __post_init__(self) -> None:
        if self.L < 1:
            raise ValueError("L must be >= 1")
        if self.use_positional and self.d < 1:
            raise ValueError("d must be >= 1 with positional features")
        if self.mode not in (EXACT, NUMERIC):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.memory not in (INJECTIVE, IDENTITY):
            raise ValueError(f"unknown memory kind {self.memory!r}")


class _Dense:
    """First-come dense numbering; keeps pairing indices (and exponents) small."""

    def __init__(self) -> None:
        self._ids: dict[Hashable, int] = {}

    def __call__(self, value: Hashable) -> int:
        return self._ids.setdefault(value, len(self._ids))


_engine_counter = itertools.count()


class PintEngine:
    """Shared numbering and aggregation bounds for a family of comparable embeddings.

    Exact embeddings from one engine compare meaningfully with each other;
    embeddings from different engines never coincide above layer 0.
    ``max_degree`` and ``t_max`` bound neighborhood sizes and time gaps for
    every graph passed to the engine.
    """

    def __init__(self, cfg: PintConfig, max_degree: int, t_max: int) -> None:
        self.cfg = cfg
        self.params = AggParams(max(2, max_degree + 1), max(0, t_max), cfg.base)
        self.token = next(_engine_counter)
        self._x = [_Dense() for _ in range(cfg.L + 1)]
        self._e = _Dense()
        self._weights: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}

    @classmethod
    def for_graphs(cls, cfg: PintConfig, graphs: Iterable[TemporalGraph], t: int) -> "PintEngine":
        deg = 0
        for g in graphs:
            for v in g.nodes:
                deg = max(deg, len(g.incident(v, t)))
        return cls(cfg, deg, t)

    # memory / positional helpers so callers can skip the bookkeeping
    def memory(self, g: TemporalGraph, t: int) -> MemoryState:
        return run_memory(g, t, self.cfg.memory)

    def positions(self, g: TemporalGraph, t: int) -> PosStore | None:
        return build_store(g, self.cfg.d, t) if self.cfg.use_positional else None

    # -- exact ----------------------------------------------------------

    def _h0_exact(self, state: Hashable, pos_part: tuple) -> CanonicalId:
        return intern(("h0", state, pos_part))

    def _layers_exact(self, g, t, h0: dict[int, CanonicalId], need: set[int]) -> dict[int, CanonicalId]:
        # layered evaluation restricted to nodes within L hops of ``need``
        cfg = self.cfg
        frontier = [set(need)]
        for _ in range(cfg.L):
            nxt = set(frontier[-1])
            for v in frontier[-1]:
                nxt.update(u for _tp, u, _f in g.incident(v, t))
            frontier.append(nxt)
        h = h0
        for layer in range(1, cfg.L + 1):
            dense = self._x[layer]
            new = {}
            for v in frontier[cfg.L - layer]:
                items = [(dense(h[u]), self._e(f), t - tp) for tp, u, f in g.incident(v, t)]
                agg = injective_multiset_sum(items, self.params, enumerate_pair)
                new[v] = intern(("h", self.token, layer, h[v], agg))
            h = new
        return h

    # -- numeric --------------------------------------------------------

    def _mlp(self, layer: int, role: str, x: np.ndarray) -> np.ndarray:
        key = (layer, role, x.shape[0])
        if key not in self._weights:
            rng = np.random.default_rng([self.cfg.seed, layer, 0 if role == "agg" else 1, x.shape[0]])
            w = rng.normal(0.0, 1.0 / np.sqrt(max(1, x.shape[0])), (self.cfg.hidden, x.shape[0]))
            b = rng.normal(0.0, 0.1, self.cfg.hidden)
            self._weights[key] = (w, b)
        w, b = self._weights[key]
        return np.tanh(w @ x + b)

    def _state_vec(self, state, width: int) -> np.ndarray:
        if isinstance(state, CanonicalId):
            return np.random.default_rng([self.cfg.seed, 7, state.id]).normal(size=self.cfg.hidden)
        return _pad(state, width)

    def _layers_numeric(self, g, t, h0: dict[int, np.ndarray], ew: int) -> dict[int, np.ndarray]:
        cfg = self.cfg
        h = h0
        for layer in range(1, cfg.L + 1):
            new = {}
            for v in g.nodes:
                agg = np.zeros(cfg.hidden)
                for tp, u, f in g.incident(v, t):
                    msg = self._mlp(layer, "agg", np.concatenate([h[u], _pad(f, ew)]))
                    agg = agg + msg * cfg.alpha ** (-cfg.beta * (t - tp))
                new[v] = self._mlp(layer, "upd", np.concatenate([h[v], agg]))
            h = new
        return h

    # -- public ---------------------------------------------------------

    def node_embeddings(
        self,
        g: TemporalGraph,
        t: int,
        mem: MemoryState | None = None,
        pos: PosStore | None = None,
        anchors: Sequence[int] = (),
        nodes: Iterable[int] | None = None,
    ) -> dict:
        """Layer-``L`` embeddings of ``nodes`` (all nodes by default)."""
        cfg = self.cfg
        if cfg.use_positional and pos is None:
            raise ValueError("positional features are on but no PosStore was given")
        if mem is None:
            mem = self.memory(g, t)
        for a in anchors:
            if a not in g.node_feats:
                raise UnknownNodeError(f"unknown node {a}")
        want = set(g.nodes if nodes is None else nodes)
        for v in want:
            if v not in g.node_feats:
                raise UnknownNodeError(f"unknown node {v}")

        def pos_part(j: int) -> tuple:
            if not cfg.use_positional:
                return ()
            return tuple(get_feature(pos, j, a) for a in anchors)

        if cfg.mode == EXACT:
            h0 = {j: self._h0_exact(mem.states[j], pos_part(j)) for j in g.nodes}
            h = self._layers_exact(g, t, h0, want)
        else:
            fw = max((len(f) for f in g.node_feats.values()), default=0)
            ew = max((len(e.feat) for e in g.events), default=0)
            h0 = {}
            for j in g.nodes:
                parts = [self._state_vec(mem.states[j] if cfg.memory == INJECTIVE else g.node_feats[j], fw)]
                parts += [np.array([float(x) for x in normalize_l1(r)]) for r in pos_part(j)]
                h0[j] = np.concatenate(parts) if parts else np.zeros(0)
            h = self._layers_numeric(g, t, h0, ew)
        return {v: h[v] for v in want}

    def node_embedding(self, g, v, t, mem=None, pos=None, anchors: Sequence[int] | None = None):
        anchors = [v] if anchors is None else list(anchors)
        return self.node_embeddings(g, t, mem, pos, anchors, [v])[v]

    def edge_embedding(self, g, u, v, t, mem=None, pos=None):
        """Readout over ``h_u`` (anchors ``u, v``) and ``h_v`` (anchors ``v, u``); symmetric."""
        if mem is None:
            mem = self.memory(g, t)
        if pos is None and self.cfg.use_positional:
            pos = self.positions(g, t)
        hu = self.node_embedding(g, u, t, mem, pos, [u, v])
        hv = self.node_embedding(g, v, t, mem, pos, [v, u])
        if self.cfg.mode == EXACT:
            return intern(("edge", tuple(sorted((hu, hv)))))
        return np.concatenate([hu + hv, hu * hv])


def _pad(f: Sequence[int], width: int) -> np.ndarray:
    out = np.zeros(width)
    out[: len(f)] = f
    return out


def pint_node_embedding(
    g: TemporalGraph,
    v: int,
    t: int,
    cfg: PintConfig,
    mem: MemoryState | None = None,
    pos: PosStore | None = None,
    anchors: Sequence[int] | None = None,
    engine: PintEngine | None = None,
):
    """One-off node embedding. Pass a shared ``engine`` to compare several calls."""
    engine = engine or PintEngine.for_graphs(cfg, [g], t)
    if pos is None and cfg.use_positional:
        pos = engine.positions(g, t)
    return engine.node_embedding(g, v, t, mem, pos, anchors)


def pint_edge_embedding(
    g: TemporalGraph,
    u: int,
    v: int,
    t: int,
    cfg: PintConfig,
    mem: MemoryState | None = None,
    pos: PosStore | None = None,
    engine: PintEngine | None = None,
):
    engine = engine or PintEngine.for_graphs(cfg, [g], t)
    return engine.edge_embedding(g, u, v, t, mem, pos)

