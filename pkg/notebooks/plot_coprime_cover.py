"""
Covers coprime to a prime
=========================

A p-unimodular labeled graph has a finite admissible branched cover in
which no label is divisible by p. We build one, look at the pieces and
verify it.
"""

from importlib import resources

from gbs.covering import coprime_construction, is_topological, verify_admissible
from gbs.graph import parse_graph, serialize_graph
from gbs.modular import height_map, is_p_unimodular, modular_subgroup

###############################################################################
# The input graph has three height levels for p = 2.

g = parse_graph(resources.files("gbs").joinpath("data", "three_levels.gbs").read_text())
print(serialize_graph(g))
print("q(G) =", modular_subgroup(g), " 2-unimodular:", is_p_unimodular(g, 2))
print(height_map(g, 2))

###############################################################################
# The construction first splits every even end into (2, 1) edges, then
# takes 2^i copies of level i and collapses the lifted new edges.

st = coprime_construction(g, 2)
print("copies per level:", st.copies)
print("expanded graph:", len(st.expanded.vertices), "vertices")
print("result:", len(st.result.vertices), "vertices,", len(st.result.edges), "edges")

###############################################################################
# The cover is admissible, branched (so not topological), and every label
# of the result is odd.

print(verify_admissible(st.cover))
print("topological:", is_topological(st.cover))
print(sorted(set(st.result.labels().values())))
