"""Event-stream temporal graphs.

A :class:`TemporalGraph` is an immutable, time-sorted multiset of undirected
interaction events plus integer node features. Everything downstream reads
graphs through :func:`snapshot_at` and :func:`temporal_neighborhood`.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Mapping, NamedTuple, Sequence

__all__ = [
    "DUMMY_NODE",
    "Event",
    "GraphError",
    "NeighborhoodEntry",
    "ParseError",
    "Snapshot",
    "SnapshotSequence",
    "TemporalGraph",
    "UnknownNodeError",
    "ValidationError",
    "ctdg_to_dtdg",
    "dtdg_to_ctdg",
    "dump_events",
    "dump_snapshots",
    "load_events",
    "load_snapshots",
    "make_graph",
    "parse_events",
    "parse_snapshots",
    "save_events",
    "save_snapshots",
    "snapshot_at",
    "temporal_neighborhood",
]

EVENTS_HEADER = "# tgx-events v1"
SNAPSHOTS_HEADER = "# tgx-snapshots v1"

# reserved id of the node that carries node features through DTDG -> CTDG
DUMMY_NODE = 2**32 - 1

Feat = tuple[int, ...]


class GraphError(ValueError):
    pass


class ParseError(GraphError):
    def __init__(self, lineno: int, msg: str) -> None:
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class ValidationError(GraphError):
    pass


class UnknownNodeError(GraphError, KeyError):
    def __str__(self) -> str:
        return self.args[0] if self.args else "unknown node"


@dataclass(frozen=True)
class Event:
    """Undirected interaction; endpoints are stored with ``u <= v``."""

    u: int
    v: int
    t: int
    feat: Feat = ()

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValidationError(f"negative timestamp {self.t}")
        if self.u < 0 or self.v < 0:
            raise ValidationError("node ids must be non-negative")
        if self.u == self.v:
            raise ValidationError(f"self-loop on node {self.u} is not supported")
        if any(f < 0 for f in self.feat):
            raise ValidationError("features must be non-negative integers")
        object.__setattr__(self, "feat", tuple(self.feat))
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)

    @property
    def key(self) -> tuple:
        return (self.t, self.u, self.v, self.feat)

    def other(self, node: int) -> int:
        return self.v if node == self.u else self.u


class NeighborhoodEntry(NamedTuple):
    u: int
    feat: Feat
    t_prime: int


@dataclass(frozen=True, eq=False)
class TemporalGraph:
    node_feats: Mapping[int, Feat]
    events: tuple[Event, ...]
    _adj: dict = field(init=False, repr=False)

    def __post_init__(self) -> None:
        events = tuple(sorted(self.events, key=lambda e: e.key))
        feats = {int(n): tuple(f) for n, f in self.node_feats.items()}
        adj: dict[int, list[tuple[int, int, Feat]]] = {n: [] for n in feats}
        for e in events:
            for a in (e.u, e.v):
                if a not in feats:
                    raise ValidationError(f"node {a} has no node-feature entry")
            adj[e.u].append((e.t, e.v, e.feat))
            adj[e.v].append((e.t, e.u, e.feat))
        object.__setattr__(self, "events", events)
        object.__setattr__(self, "node_feats", feats)
        object.__setattr__(self, "_adj", adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TemporalGraph):
            return NotImplemented
        return self.node_feats == other.node_feats and self.events == other.events

    def __hash__(self) -> int:
        return hash(self.events)

    @property
    def nodes(self) -> list[int]:
        return sorted(self.node_feats)

    @property
    def timestamps(self) -> list[int]:
        return sorted({e.t for e in self.events})

    def horizon(self) -> int:
        """A query time after every event (max timestamp + 1)."""
        return self.events[-1].t + 1 if self.events else 1

    def incident(self, v: int, t: int | None = None) -> list[tuple[int, int, Feat]]:
        """``(t', other, feat)`` for events at ``v``, sorted by time, ``t' < t``."""
        try:
            rows = self._adj[v]
        except KeyError:
            raise UnknownNodeError(f"unknown node {v}") from None
        if t is None:
            return list(rows)
        return rows[: bisect.bisect_left(rows, (t,))]

    def __len__(self) -> int:
        return len(self.events)


def make_graph(
    events: Iterable[Event | Sequence],
    node_feats: Mapping[int, Feat] | None = None,
    default_feat: Feat = (),
) -> TemporalGraph:
    """Build a graph from ``Event`` objects or ``(u, v, t[, feat])`` tuples.

    Nodes named in ``events`` but not in ``node_feats`` get ``default_feat``.
    """
    evs = [e if isinstance(e, Event) else Event(*e) for e in events]
    feats = dict(node_feats or {})
    for e in evs:
        feats.setdefault(e.u, default_feat)
        feats.setdefault(e.v, default_feat)
    return TemporalGraph(feats, tuple(evs))


def snapshot_at(g: TemporalGraph, t: int) -> TemporalGraph:
    """Events strictly before ``t``; node features unchanged."""
    keep = [e for e in g.events if e.t < t]
    return TemporalGraph(g.node_feats, tuple(keep))


def temporal_neighborhood(g: TemporalGraph, v: int, t: int) -> list[NeighborhoodEntry]:
    return [NeighborhoodEntry(u, f, tp) for tp, u, f in g.incident(v, t)]


# --- DTDG <-> CTDG --------------------------------------------------------


@dataclass
class Snapshot:
    nodes: dict[int, Feat] = field(default_factory=dict)
    edges: dict[tuple[int, int], Feat] = field(default_factory=dict)

    def __post_init__(self) -> None:
        norm: dict[tuple[int, int], Feat] = {}
        for (a, b), f in self.edges.items():
            if a == b:
                raise ValidationError(f"self-loop on node {a}")
            for n in (a, b):
                if n not in self.nodes:
                    raise ValidationError(f"edge endpoint {n} missing from snapshot nodes")
            norm[(min(a, b), max(a, b))] = tuple(f)
        self.edges = norm
        self.nodes = {n: tuple(f) for n, f in self.nodes.items()}


@dataclass
class SnapshotSequence:
    snapshots: list[Snapshot] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.snapshots)

    def __getitem__(self, i: int) -> Snapshot:
        return self.snapshots[i]


def dtdg_to_ctdg(s: SnapshotSequence, delta: int) -> TemporalGraph:
    """Snapshot ``i`` becomes events at ``i * delta``.

    Edges become events with their edge features; every node of the snapshot
    gets an event against :data:`DUMMY_NODE` whose feature is the node feature.
    """
    if delta < 1:
        raise ValueError("delta must be >= 1")
    events: list[Event] = []
    for i, snap in enumerate(s.snapshots, start=1):
        ti = i * delta
        for (a, b), f in snap.edges.items():
            events.append(Event(a, b, ti, f))
        for n, x in snap.nodes.items():
            if n == DUMMY_NODE:
                raise ValidationError("snapshot uses the reserved dummy node id")
            events.append(Event(n, DUMMY_NODE, ti, x))
    feats: dict[int, Feat] = {}
    for e in events:
        feats.setdefault(e.u, ())
        feats.setdefault(e.v, ())
    return TemporalGraph(feats, tuple(events))


def ctdg_to_dtdg(g: TemporalGraph, delta: int, n_snapshots: int | None = None) -> SnapshotSequence:
    """Group events by ``t / delta`` into snapshots ``1..K``.

    Dummy-node events decode back into node features; endpoints of ordinary
    events without such an event take their feature from ``g.node_feats``.
    ``n_snapshots`` restores trailing empty snapshots, which leave no events.
    """
    if delta < 1:
        raise ValueError("delta must be >= 1")
    by_k: dict[int, list[Event]] = {}
    for e in g.events:
        if e.t % delta or e.t == 0:
            raise ValueError(f"timestamp {e.t} is not a positive multiple of delta={delta}")
        by_k.setdefault(e.t // delta, []).append(e)
    last = max(by_k, default=0)
    if n_snapshots is not None:
        if n_snapshots < last:
            raise ValueError(f"events reach snapshot {last} > n_snapshots={n_snapshots}")
        last = n_snapshots
    snaps = []
    for k in range(1, last + 1):
        nodes: dict[int, Feat] = {}
        edges: dict[tuple[int, int], Feat] = {}
        for e in by_k.get(k, ()):
            if e.v == DUMMY_NODE:
                nodes[e.u] = e.feat
            else:
                if (e.u, e.v) in edges and edges[(e.u, e.v)] != e.feat:
                    raise ValueError(f"conflicting features for edge {(e.u, e.v)} in snapshot {k}")
                edges[(e.u, e.v)] = e.feat
        for a, b in edges:
            for n in (a, b):
                nodes.setdefault(n, g.node_feats.get(n, ()))
        snaps.append(Snapshot(nodes, edges))
    return SnapshotSequence(snaps)


# --- file formats ---------------------------------------------------------


def _feat_str(f: Feat) -> str:
    return ";".join(str(x) for x in f)


def _parse_feat(s: str, lineno: int) -> Feat:
    s = s.strip()
    if not s:
        return ()
    try:
        out = tuple(int(x) for x in s.split(";"))
    except ValueError:
        raise ParseError(lineno, f"bad feature field {s!r}") from None
    if any(x < 0 for x in out):
        raise ParseError(lineno, "features must be non-negative")
    return out


def _parse_int(s: str, lineno: int, what: str) -> int:
    try:
        return int(s.strip())
    except ValueError:
        raise ParseError(lineno, f"bad {what} {s!r}") from None


def parse_events(text: str) -> TemporalGraph:
    feats: dict[int, Feat] = {}
    events: list[Event] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("# tgx-") and line != EVENTS_HEADER:
                raise ParseError(lineno, f"unsupported header {line!r}")
            continue
        parts = line.split(",")
        if parts[0].strip() == "N":
            if len(parts) != 3:
                raise ParseError(lineno, "node line must be N,<node>,<features>")
            feats[_parse_int(parts[1], lineno, "node id")] = _parse_feat(parts[2], lineno)
            continue
        if len(parts) != 4:
            raise ParseError(lineno, "event line must be <u>,<v>,<t>,<features>")
        u = _parse_int(parts[0], lineno, "node id")
        v = _parse_int(parts[1], lineno, "node id")
        t = _parse_int(parts[2], lineno, "timestamp")
        if t < 0:
            raise ValidationError(f"line {lineno}: negative timestamp {t}")
        try:
            events.append(Event(u, v, t, _parse_feat(parts[3], lineno)))
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    return make_graph(events, feats)


def load_events(path: str | PathLike) -> TemporalGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_events(fh.read())


def dump_events(g: TemporalGraph) -> str:
    lines = [EVENTS_HEADER]
    lines += [f"N,{n},{_feat_str(g.node_feats[n])}" for n in g.nodes]
    lines += [f"{e.u},{e.v},{e.t},{_feat_str(e.feat)}" for e in g.events]
    return "\n".join(lines) + "\n"


def save_events(g: TemporalGraph, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_events(g))


def parse_snapshots(text: str) -> SnapshotSequence:
    """Blocks separated by blank lines, each opened by ``snapshot <k>``."""
    snaps: list[Snapshot] = []
    cur: tuple[dict, dict] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("# tgx-") and line != SNAPSHOTS_HEADER:
                raise ParseError(lineno, f"unsupported header {line!r}")
            continue
        if line.startswith("snapshot"):
            k = _parse_int(line[len("snapshot"):], lineno, "snapshot index")
            if cur is not None:
                snaps.append(_close(cur, lineno))
            if k != len(snaps) + 1:
                raise ParseError(lineno, f"expected snapshot {len(snaps) + 1}, got {k}")
            cur = ({}, {})
            continue
        if cur is None:
            raise ParseError(lineno, "content before the first 'snapshot' line")
        parts = line.split(",")
        if parts[0].strip() == "N":
            if len(parts) != 3:
                raise ParseError(lineno, "node line must be N,<node>,<features>")
            cur[0][_parse_int(parts[1], lineno, "node id")] = _parse_feat(parts[2], lineno)
        elif len(parts) == 3:
            a = _parse_int(parts[0], lineno, "node id")
            b = _parse_int(parts[1], lineno, "node id")
            cur[1][(a, b)] = _parse_feat(parts[2], lineno)
        else:
            raise ParseError(lineno, "edge line must be <u>,<v>,<features>")
    if cur is not None:
        snaps.append(_close(cur, -1))
    return SnapshotSequence(snaps)


def _close(cur: tuple[dict, dict], lineno: int) -> Snapshot:
    try:
        return Snapshot(cur[0], cur[1])
    except ValidationError as exc:
        raise ParseError(lineno, str(exc)) from None


def dump_snapshots(s: SnapshotSequence) -> str:
    blocks = [SNAPSHOTS_HEADER]
    for k, snap in enumerate(s.snapshots, start=1):
        lines = [f"snapshot {k}"]
        lines += [f"N,{n},{_feat_str(snap.nodes[n])}" for n in sorted(snap.nodes)]
        lines += [f"{a},{b},{_feat_str(f)}" for (a, b), f in sorted(snap.edges.items())]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def load_snapshots(path: str | PathLike) -> SnapshotSequence:
    with open(path, encoding="utf-8") as fh:
        return parse_snapshots(fh.read())


def save_snapshots(s: SnapshotSequence, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_snapshots(s))
