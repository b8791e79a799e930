"""
Temporal WL and static graph properties
=======================================

Two colored triangles and one colored hexagon refine to the same color
histograms at every round, yet differ in diameter, girth and cycle count.
"""

from tgx.corpus import corpus_build
from tgx.expressiveness import mptgn_multisets, static_properties, wl_matched_depth
from tgx.twl import twl_compare

case = corpus_build("fig4")
a, b = case.graphs["g"], case.graphs["g2"]
t = 4

cmp = twl_compare(a, b, t)
print("color counts per round:", cmp.history_a.counts(), "vs", cmp.history_b.counts())
print("verdict:", cmp.verdict.value)

depth = wl_matched_depth(a, b, t)
ma, mb = mptgn_multisets(a, b, t, depth)
print(f"embedding multisets at depth {depth} equal:", ma == mb)

for name, g in (("triangles", a), ("hexagon", b)):
    p = static_properties(g, t)
    print(f"{name:10s} diameter={p.diameter}  girth={p.girth}  circuit rank={p.circuit_rank}")
