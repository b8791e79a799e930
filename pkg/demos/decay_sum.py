"""
The exact injective sum and the numeric decay sum
=================================================

Exact mode packs each distinct (state, edge, time gap) into its own block of
digits, so equal sums mean equal multisets. Numeric mode is the plain
exponentially decayed sum with seeded tanh layers.
"""

import numpy as np

from tgx import graph
from tgx.injective import AggParams, exhaustive_injectivity, injective_multiset_sum
from tgx.pint import PintConfig, PintEngine

p = AggParams(N=4, t_max=2)
print(f"beta={p.beta}  k={p.k}")
for m in ([(0, 0, 1)], [(0, 0, 1), (0, 0, 1)], [(1, 0, 2), (0, 1, 0)]):
    print(f"  {m!s:28s} -> {injective_multiset_sum(m, p)}")

rep = exhaustive_injectivity(2, 2, [1, 2], 4)
print(f"{rep.multisets} multisets, {rep.distinct} distinct sums")

g = graph.make_graph([(0, 1, 1), (0, 2, 3), (1, 2, 4)], {0: (1,), 1: (0,), 2: (2,)})
for alpha in (1.5, 2.0, 4.0):
    cfg = PintConfig(L=2, d=3, mode="numeric", alpha=alpha, seed=0)
    eng = PintEngine.for_graphs(cfg, [g], 5)
    h = eng.node_embedding(g, 0, 5, eng.memory(g, 5), eng.positions(g, 5))
    print(f"alpha={alpha}: h_0[:4] =", np.round(h[:4], 4))
