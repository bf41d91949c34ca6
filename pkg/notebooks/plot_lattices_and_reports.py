"""
Lattices and incommensurability reports
=======================================

Some families act on the same tree X_{dm,dn} with compact quotient. We
certify that, then ask which pairs of families the available invariants
can tell apart.
"""

from gbs.families import FamilySpec, family_graph, lattice_params
from gbs.lattice import check_certificate, search_lattice_structure, verify_lattice_sufficient
from gbs.report import incommensurability_report

###############################################################################
# Direct check and certificate search for a few families.

specs = [FamilySpec("B1", dict(d=3, m=2, n=5))]
specs += [FamilySpec("Lambda_l", dict(l=l, d=3, m=2, n=5, q=2)) for l in (2, 3, 4)]
for spec in specs:
    g, pos = family_graph(spec)
    d, m, n = lattice_params(spec)
    cert = search_lattice_structure(g, d, m, n)
    print(spec.label(), bool(verify_lattice_sufficient(g, pos, d, m, n)),
          cert.lengths.vertex, check_certificate(g, cert))

###############################################################################
# These are reduced, plateau-free, and their modular images meet Z only in
# 1, so the vertex/edge ratio separates every pair.

rep = incommensurability_report(specs, command="notebook")
print(rep.text())

###############################################################################
# Gamma_k with different k are separated by their depth profiles instead.

gam = [FamilySpec("B1", dict(d=2, m=2, n=3))]
gam += [FamilySpec("Gamma_k", dict(k=k, d=2, m=2, n=3, p=2)) for k in (2, 3)]
print(incommensurability_report(gam, command="notebook").text())
