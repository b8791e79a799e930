"""
Computation trees and positional counts
=======================================

A four-event stream, its unrolled computation tree, the monotone part of
that tree, and the positional vectors that count how often each node shows
up at each depth.
"""

from tgx import graph, posfeat, tct

g = graph.parse_events(
    """# tgx-events v1
0,1,1,
1,2,2,
2,3,3,
0,2,3,
"""
)
t = g.horizon()
print("events:", [(e.u, e.v, e.t) for e in g.events], " query time", t)

# two layers of message passing from node 3
tree = tct.build_tct(g, 3, t, 2)
print("\n2-layer tree of node 3 (level, node, state, incoming edge):")
print(tct.dump_tct(tree))

# keep only paths whose timestamps strictly decrease
mono = tct.build_monotone_tct(g, 3, t)
print("\nmonotone tree of node 3:")
print(tct.dump_tct(mono))
print("temporal diameter:", tct.temporal_diameter(g, t))

# the incremental store reproduces the per-level counts of the monotone tree
store = posfeat.build_store(g, d=4)
for i in g.nodes:
    inc = posfeat.get_feature(store, i, 3)
    ref = posfeat.brute_force_counts(g, i, 3, t, 4)
    print(f"r[{i} -> 3] = {inc}   tree count {ref}")
    assert inc == ref

print("\nL1-normalized:", [str(x) for x in posfeat.normalize_l1(posfeat.get_feature(store, 0, 3))])
