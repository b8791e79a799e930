"""Temporal Weisfeiler-Leman color refinement.

Colors are interned ids, so the refinement hash is exactly injective and two
graphs refined in the same process share one color space.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from .graph import TemporalGraph
from .injective import CanonicalId, intern

__all__ = [
    "ColorHistory",
    "ColorPartition",
    "TwlVerdict",
    "WlComparison",
    "refine_round",
    "twl_compare",
    "twl_refine",
]


@dataclass(frozen=True)
class ColorPartition:
    colors: dict[int, CanonicalId]
    round: int

    def histogram(self) -> Counter:
        return Counter(self.colors.values())

    def num_colors(self) -> int:
        return len(set(self.colors.values()))


@dataclass
class ColorHistory:
    rounds: list[ColorPartition] = field(default_factory=list)
    stabilized_at: int | None = None

    @property
    def final(self) -> ColorPartition:
        return self.rounds[-1]

    def counts(self) -> list[int]:
        return [p.num_colors() for p in self.rounds]


class TwlVerdict(str, Enum):
    NON_ISOMORPHIC = "NonIsomorphic"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class WlComparison:
    verdict: TwlVerdict
    round: int  # round of divergence, or the last compared round
    history_a: ColorHistory
    history_b: ColorHistory


def _initial(g: TemporalGraph) -> ColorPartition:
    return ColorPartition({v: intern(("wl0", g.node_feats[v])) for v in g.nodes}, 0)


def refine_round(g: TemporalGraph, t: int, p: ColorPartition) -> ColorPartition:
    c = p.colors
    new = {}
    for v in g.nodes:
        nbrs = sorted((c[u], f, tp) for tp, u, f in g.incident(v, t))
        new[v] = intern(("wl", c[v], tuple(nbrs)))
    return ColorPartition(new, p.round + 1)


def twl_refine(g: TemporalGraph, t: int, max_rounds: int | None = None) -> ColorHistory:
    """Refine until the number of colors stops increasing (or ``max_rounds``).

    ``stabilized_at`` is the first round ``r`` with ``count(r) == count(r+1)``;
    round ``r + 1`` is kept in ``rounds``.
    """
    hist = ColorHistory([_initial(g)])
    while max_rounds is None or hist.final.round < max_rounds:
        nxt = refine_round(g, t, hist.final)
        stable = nxt.num_colors() == hist.final.num_colors()
        hist.rounds.append(nxt)
        if stable:
            hist.stabilized_at = nxt.round - 1
            break
    return hist


def twl_compare(a: TemporalGraph, b: TemporalGraph, t: int) -> WlComparison:
    """Run both refinements in lockstep; stop at the first histogram mismatch."""
    ha, hb = ColorHistory([_initial(a)]), ColorHistory([_initial(b)])
    if len(a.nodes) != len(b.nodes):
        return WlComparison(TwlVerdict.NON_ISOMORPHIC, 0, ha, hb)
    while True:
        pa, pb = ha.final, hb.final
        if pa.histogram() != pb.histogram():
            return WlComparison(TwlVerdict.NON_ISOMORPHIC, pa.round, ha, hb)
        if ha.stabilized_at is not None and hb.stabilized_at is not None:
            return WlComparison(TwlVerdict.INCONCLUSIVE, pa.round, ha, hb)
        for h, g in ((ha, a), (hb, b)):
            nxt = refine_round(g, t, h.final)
            if h.stabilized_at is None and nxt.num_colors() == h.final.num_colors():
                h.stabilized_at = h.final.round
            h.rounds.append(nxt)
