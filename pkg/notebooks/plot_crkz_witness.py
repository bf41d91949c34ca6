"""
CRKZ vectors and commensurability in C_{n,l}
============================================

For bouquets BS(1, n^l) with BS(n^a, n^a) petals, the level counts
|E^i| - 2|V^i| decide commensurability: two presentations are
commensurable exactly when the vectors agree up to a positive scalar
and a rotation.
"""

from gbs.covering import cyclic_unwind
from gbs.crkz import CnlPresentation, check_witness, cnl_commensurable, crkz_vector, scaling_check
from gbs.families import loop_multiset

###############################################################################
# Two presentations in C_{2,3}.

p1 = CnlPresentation(2, 3, (1, 1, 2))
p2 = CnlPresentation(2, 3, (1, 1, 1, 1, 1, 1, 2, 2, 2))
print(p1, p1.vector())
print(p2, p2.vector())

###############################################################################
# Vectors scale by the number of sheets under topological covers.

g = p1.graph()
cov = cyclic_unwind(g, "e2", 3)
print(crkz_vector(cov.source, 2, 3), scaling_check(g, 2, 3, cov))

###############################################################################
# The decision carries a witness: a cover of each side and a move script
# taking both to the same bouquet.

dec = cnl_commensurable(p1, p2)
print(dec.scalars)
for side in dec.sides:
    print(side.presentation, "degree", side.degree, "->", loop_multiset(side.bouquet))
print("replayed:", check_witness(dec) == [])

###############################################################################
# A pair with no scalar rotation between the vectors.

print(cnl_commensurable(p1, CnlPresentation(2, 3, (1,))).obstruction)
