"""
Depth profiles and ladder sets
==============================

A walk through segment indices, the depth profile of a small GBS graph
and the ladder-set equivalence that turns profiles into an invariant.
"""

from gbs.families import FamilySpec, family_graph
from gbs.graph import LabeledGraph
from gbs.profile import (closed_form_profile, ladder_equivalent, profile_report, s1_ladder,
                         segment_index, sk_ladder, tree_ball)

###############################################################################
# Segment indices
# ---------------
# A path of labeled edges lifts to a segment in the Bass-Serre tree. Its
# index is computed edge by edge with a gcd recurrence. For two edges the
# closed formula is n1 * n2 / gcd(m1, n2).

g = LabeledGraph.from_edges(["a", "b", "c"], [("e1", "a", "b", 4, 6), ("e2", "b", "c", 9, 2)])
print(segment_index(g, ["e1", "e2"]))

###############################################################################
# The brute-force oracle builds a ball of the tree and measures stabilizers
# directly. Both agree on every path of the ball.

bs = LabeledGraph.from_edges(["v"], [("t", "v", "v", 2, 3)])
ball = tree_ball(bs, "v", 3)
bad = [n[4] for i, n in enumerate(ball.nodes[1:], 1) if ball.stabilizer_index(i) != segment_index(bs, n[4])]
print(len(ball.nodes), "tree vertices, mismatches:", bad)

###############################################################################
# A depth profile
# ---------------
# Closed admissible paths at a vertex whose modulus is +-1 contribute their
# index. For Gamma_1 with (d, m, n) = (2, 2, 3) the result sits inside the
# ladder {1}[2,3] with 1 removed.

spec = FamilySpec("B1", dict(d=2, m=2, n=3))
G, _ = family_graph(spec)
rep = profile_report(G, "u1", 10)
S = closed_form_profile(spec)
print(sorted(rep.indices))
print("closed form:", S)
print("all inside:", all(x in S for x in rep.indices))

###############################################################################
# Shortest witnesses are kept for every index.

for N in sorted(rep.indices)[:5]:
    print(N, " ".join(rep.witnesses[N]))

###############################################################################
# Equivalence of ladders
# ----------------------
# S and S' are equivalent when S/r = S'/r' for some r, r'. Removing a finite
# set never changes the class, and differing ratio tails separate classes.

full = s1_ladder(2)
print(ladder_equivalent(full, sk_ladder(2, 2, 2)))
print(ladder_equivalent(full, sk_ladder(3, 2, 2)).reason)
