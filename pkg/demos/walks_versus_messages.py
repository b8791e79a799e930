"""
Walks, messages, and relative positions
=======================================

Anonymized walks separate one pair of events that message passing cannot,
message passing separates another pair that walks cannot, and positional
features get both.
"""

from tgx.baselines import caw_walk_set, format_walks
from tgx.corpus import corpus_build
from tgx.expressiveness import distinguish_events

left = corpus_build("figS3_left")
g, n = left.graphs["g"], left.node
e1, e2 = (n("u"), n("v"), 3), (n("z"), n("v"), 3)

su, sv = caw_walk_set(g, n("u"), 3, 3), caw_walk_set(g, n("v"), 3, 3)
print("walks for (u, v, 3), nodes replaced by their position counts:")
for line in format_walks(su, sv) + format_walks(sv, su):
    print("  ", line)

print("\nleft pair:")
for tag in ("caw(3)", "mptgn(3)", "pint(3,4)"):
    print(f"  {tag:10s}", distinguish_events(g, e1, e2, tag).result.value)

right = corpus_build("figS3_right")
g, n = right.graphs["g"], right.node
e1, e2 = (n("u"), n("z"), 4), (n("u'"), n("z"), 4)
print("\nright pair:")
for tag in ("caw(4)", "mptgn(4)", "pint(4,4)"):
    print(f"  {tag:10s}", distinguish_events(g, e1, e2, tag).result.value)

tri = corpus_build("fig5")
g, n = tri.graphs["g"], tri.node
e1, e2 = (n("u"), n("v"), 3), (n("v"), n("z"), 3)
print("\nsymmetric triangle (nothing works):")
for tag in ("caw(3)", "mptgn(3)", "pint(3,4)"):
    print(f"  {tag:10s}", distinguish_events(g, e1, e2, tag).result.value)
