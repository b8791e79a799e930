"""Deterministic stand-ins for TGAT, TGN-Att and CAW.

TGAT and TGN-Att are run numerically with seeded random parameters; their
failure cases hold for every parameter choice, so agreement across a handful
of seeds is the check. CAW keeps its walk sets and anonymization literal and
swaps its learned encoders for interning, which can only make it stronger.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import Event, TemporalGraph, UnknownNodeError
from .injective import CanonicalId, intern
from .tct import monotone_walks

__all__ = [
    "AttentionModel",
    "TimeEncoderParams",
    "TgnMemory",
    "WalkSet",
    "caw_anonymize",
    "caw_encode_event",
    "caw_graph_code",
    "caw_walk_set",
    "format_walks",
    "run_tgn_memory",
    "tgat_aggregate",
    "tgn_att_memory_step",
    "time_encode",
]


# --- time encoding and attention -----------------------------------------


@dataclass(frozen=True)
class TimeEncoderParams:
    omegas: tuple[float, ...]
    biases: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.omegas) != len(self.biases):
            raise ValueError("omegas and biases must have equal length")

    @property
    def dim(self) -> int:
        return len(self.omegas)

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator) -> "TimeEncoderParams":
        return cls(tuple(rng.normal(size=dim)), tuple(rng.normal(size=dim)))


def time_encode(dt: float, p: TimeEncoderParams) -> np.ndarray:
    return np.cos(np.asarray(p.omegas) * dt + np.asarray(p.biases))


def tgat_aggregate(
    h_self: np.ndarray,
    neigh_h: Sequence[np.ndarray],
    feats: Sequence[np.ndarray],
    dts: Sequence[float],
    params: TimeEncoderParams,
    wq: np.ndarray,
    wk: np.ndarray,
    wv: np.ndarray,
) -> np.ndarray:
    """Single-head ``softmax(q K^T) V`` over the neighbor rows.

    Rows are ``[h_u | phi(dt) | e]``, the query is ``[h_v | phi(0)]``.
    With no neighbors the result is the zero vector.
    """
    if not neigh_h:
        return np.zeros(wv.shape[1])
    rows = np.stack(
        [np.concatenate([h, time_encode(dt, params), f]) for h, f, dt in zip(neigh_h, feats, dts)]
    )
    q = np.concatenate([h_self, time_encode(0.0, params)]) @ wq
    k = rows @ wk
    v = rows @ wv
    scores = k @ q
    scores = scores - scores.max()
    w = np.exp(scores)
    return (w / w.sum()) @ v


# --- TGN-Att memory --------------------------------------------------------


@dataclass
class TgnMemory:
    states: dict[int, np.ndarray]
    last_update: dict[int, int] = field(default_factory=dict)
    clock: int = 0
    steps: int = 0
    seed: int = 0


def _feat_vec(f: Sequence[int], width: int) -> np.ndarray:
    out = np.zeros(width)
    out[: len(f)] = f
    return out


def _update_weights(seed: int, dim: int, msg_dim: int):
    rng = np.random.default_rng([seed, 101, dim, msg_dim])
    ws = rng.normal(0.0, 1.0 / np.sqrt(dim), (dim, dim))
    wm = rng.normal(0.0, 1.0 / np.sqrt(msg_dim), (dim, msg_dim))
    b = rng.normal(0.0, 0.1, dim)
    return ws, wm, b


def init_tgn_memory(g: TemporalGraph, dim: int = 4, seed: int = 0) -> TgnMemory:
    """States start as node features zero-padded to ``dim``."""
    width = max((len(f) for f in g.node_feats.values()), default=0)
    if width > dim:
        raise ValueError(f"node features of width {width} do not fit memory dim {dim}")
    return TgnMemory({v: _feat_vec(g.node_feats[v], dim) for v in g.nodes}, {v: 0 for v in g.nodes}, seed=seed)


def tgn_att_memory_step(mem: TgnMemory, batch: Sequence[Event], edge_width: int = 0) -> TgnMemory:
    """Mean of identity messages ``[s_i, s_u, t - t_i, e]``, then ``tanh(W_s s + W_m m + b)``."""
    out = TgnMemory(dict(mem.states), dict(mem.last_update), mem.clock, mem.steps, mem.seed)
    if not batch:
        return out
    t = batch[0].t
    if any(e.t != t for e in batch):
        raise ValueError("batch mixes timestamps")
    if t < mem.clock or (t == mem.clock and mem.steps):
        raise ValueError(f"stale batch time {t} (memory clock {mem.clock})")
    msgs: dict[int, list[np.ndarray]] = {}
    for e in batch:
        for a, b in ((e.u, e.v), (e.v, e.u)):
            if a not in mem.states or b not in mem.states:
                raise UnknownNodeError(f"unknown node {a if a not in mem.states else b}")
            m = np.concatenate(
                [mem.states[a], mem.states[b], [t - mem.last_update.get(a, 0)], _feat_vec(e.feat, edge_width)]
            )
            msgs.setdefault(a, []).append(m)
    for v, ms in msgs.items():
        # sum in sorted order so the float result does not depend on event order
        m = np.sum(sorted(ms, key=lambda x: tuple(x)), axis=0) / len(ms)
        s = mem.states[v]
        ws, wm, b = _update_weights(mem.seed, s.shape[0], m.shape[0])
        out.states[v] = np.tanh(ws @ s + wm @ m + b)
        out.last_update[v] = t
    out.clock = t
    out.steps += 1
    return out


def run_tgn_memory(g: TemporalGraph, t: int, dim: int = 4, seed: int = 0) -> TgnMemory:
    mem = init_tgn_memory(g, dim, seed)
    width = max((len(e.feat) for e in g.events), default=0)
    evs = [e for e in g.events if e.t < t]
    for _, grp in itertools.groupby(evs, key=lambda e: e.t):
        mem = tgn_att_memory_step(mem, list(grp), width)
    return mem


# --- attention models ------------------------------------------------------


class AttentionModel:
    """``L``-layer TGAT with seeded parameters; ``memory=True`` gives TGN-Att."""

    def __init__(self, L: int, seed: int = 0, dim: int = 4, time_dim: int = 3, memory: bool = False) -> None:
        if L < 0:
            raise ValueError("L must be >= 0")
        self.L, self.seed, self.dim, self.time_dim, self.memory = L, seed, dim, time_dim, memory
        rng = np.random.default_rng([seed, 202])
        self.time = TimeEncoderParams.random(time_dim, rng)
        self._params: dict[tuple, tuple] = {}

    def _layer_params(self, layer: int, in_dim: int, edge_width: int):
        key = (layer, in_dim, edge_width)
        if key not in self._params:
            rng = np.random.default_rng([self.seed, 303, layer, in_dim, edge_width])
            qd = in_dim + self.time_dim
            rd = in_dim + self.time_dim + edge_width
            wq = rng.normal(size=(qd, self.dim))
            wk = rng.normal(size=(rd, self.dim))
            wv = rng.normal(size=(rd, self.dim))
            w = rng.normal(0.0, 1.0 / np.sqrt(in_dim + self.dim), (self.dim, in_dim + self.dim))
            b = rng.normal(0.0, 0.1, self.dim)
            self._params[key] = (wq, wk, wv, w, b)
        return self._params[key]

    def initial_states(self, g: TemporalGraph, t: int) -> dict[int, np.ndarray]:
        if self.memory:
            return run_tgn_memory(g, t, self.dim, self.seed).states
        width = max((len(f) for f in g.node_feats.values()), default=0)
        return {v: _feat_vec(g.node_feats[v], width) for v in g.nodes}

    def embeddings(self, g: TemporalGraph, t: int) -> dict[int, np.ndarray]:
        ew = max((len(e.feat) for e in g.events), default=0)
        h = self.initial_states(g, t)
        for layer in range(1, self.L + 1):
            new = {}
            for v in g.nodes:
                nb = g.incident(v, t)
                in_dim = h[v].shape[0]
                wq, wk, wv, w, b = self._layer_params(layer, in_dim, ew)
                agg = tgat_aggregate(
                    h[v],
                    [h[u] for _tp, u, _f in nb],
                    [_feat_vec(f, ew) for _tp, _u, f in nb],
                    [float(t - tp) for tp, _u, _f in nb],
                    self.time,
                    wq,
                    wk,
                    wv,
                )
                new[v] = np.tanh(w @ np.concatenate([h[v], agg]) + b)
            h = new
        return h


# --- CAW -------------------------------------------------------------------

Walk = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class WalkSet:
    origin: int
    t: int
    max_len: int
    walks: tuple[Walk, ...]

    def __len__(self) -> int:
        return len(self.walks)


def caw_walk_set(g: TemporalGraph, u: int, t: int, L: int) -> WalkSet:
    """All time-decreasing walks from ``u`` with at most ``L`` nodes, maximal up to the cap.

    The first pair of each walk carries the query time.
    """
    if L < 1:
        raise ValueError("walk length L counts nodes and must be >= 1")
    if u not in g.node_feats:
        raise UnknownNodeError(f"unknown node {u}")
    walks = tuple(sorted(tuple(w) for w in monotone_walks(g, u, t, max_len=L)))
    return WalkSet(u, t, L, walks)


def _position_counts(w: int, s: WalkSet) -> tuple[int, ...]:
    out = [0] * s.max_len
    for walk in s.walks:
        for pos, (node, _t) in enumerate(walk):
            if node == w:
                out[pos] += 1
    return tuple(out)


def caw_anonymize(w: int, su: WalkSet, sv: WalkSet) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The unordered pair ``{g(w; S_u), g(w; S_v)}``, returned sorted."""
    a, b = _position_counts(w, su), _position_counts(w, sv)
    return (a, b) if a <= b else (b, a)


def _encode_walk(walk: Walk, su: WalkSet, sv: WalkSet, t: int) -> CanonicalId:
    steps = []
    prev = t
    for node, tw in walk:
        steps.append((caw_anonymize(node, su, sv), prev - tw))
        prev = tw
    return intern(("caw-walk", tuple(steps)))


def caw_encode_event(g: TemporalGraph, u: int, v: int, t: int, L: int) -> CanonicalId:
    """Interned multiset of walk codes over ``S_u`` and ``S_v``."""
    su, sv = caw_walk_set(g, u, t, L), caw_walk_set(g, v, t, L)
    codes = [_encode_walk(w, su, sv, t) for w in su.walks + sv.walks]
    return intern(("caw-event", tuple(sorted(codes))))


def caw_graph_code(g: TemporalGraph, L: int) -> CanonicalId:
    """Multiset of event codes, each event encoded against the events before it."""
    codes = Counter(caw_encode_event(g, e.u, e.v, e.t, L) for e in g.events)
    return intern(("caw-graph", tuple(sorted(codes.items()))))


def format_walks(s: WalkSet, other: WalkSet) -> list[str]:
    """Anonymized walks of ``s`` in arrow notation, relative to ``(s, other)``."""
    lines = []
    for walk in s.walks:
        parts = []
        for node, _tw in walk:
            a, b = caw_anonymize(node, s, other)
            parts.append("{" + str(list(a)) + ", " + str(list(b)) + "}")
        times = ",".join(str(tw) for _n, tw in walk[1:])
        lines.append(" -> ".join(parts) + (f"  @ {times}" if times else ""))
    return lines
