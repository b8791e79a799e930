"""
Why attention misses neighbor proportions
=========================================

Nodes u and v see neighborhoods with the same mix of colors but in different
amounts. Softmax attention averages, so it cannot count; an injective sum
can.
"""

import numpy as np

from tgx.baselines import AttentionModel
from tgx.corpus import corpus_build
from tgx.expressiveness import distinguish_nodes
from tgx.tct import build_tct, tct_isomorphic

case = corpus_build("fig3_left")
g, n = case.graphs["g"], case.node
u, v, t = n("u"), n("v"), 3
print(case.description)
print("events:", [(e.u, e.v, e.t) for e in g.events])

tu, tv = build_tct(g, u, t, 2), build_tct(g, v, t, 2)
print(f"\ntree sizes: u={len(tu)}  v={len(tv)}  isomorphic={tct_isomorphic(tu, tv)}")

print("\nlargest |h_u - h_v| over ten attention models:")
for memory in (False, True):
    gaps = []
    for seed in range(10):
        h = AttentionModel(2, seed=seed, memory=memory).embeddings(g, t)
        gaps.append(np.max(np.abs(h[u] - h[v])))
    print(f"  {'TGN-Att' if memory else 'TGAT   '}: {max(gaps):.2e}")

for tag in ("tgat(2)", "tgn_att(2)", "mptgn(2,identity)"):
    print(f"{tag:20s}", distinguish_nodes(g, u, v, t, tag).result.value)
