"""Pairwise incommensurability reports over family specs.

Three obstructions are tried for each pair:

* depth profiles whose ratio tails differ,
* CRKZ vectors with no scalar rotation between them,
* the vertex/edge ratio test for reduced plateau-free graphs whose
  modular image meets Z trivially.

Pairs where none applies are "undetermined".
"""

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .arith import lcm
from .covering import cyclic_unwind
from .crkz import crkz_vector, cyclic_scalar_equivalent, unit_loop
from .graph import bar
from .families import FamilyError, family_graph, normalized_bouquet
from .modular import intersects_integers_trivially, modular_subgroup
from .moves import is_reduced
from .plateau import find_proper_plateau
from .profile import closed_form_profile, ladder_equivalent

CITE_TAILS = "depth-profile ratio-tail criterion"
CITE_CRKZ = "CRKZ scalar-rotation criterion in C_{n,l}"
CITE_RATIO = "vertex/edge ratio criterion for plateau-free graphs"


@dataclass
class Report:
    command: str
    digest: str
    lines: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)     # (label1, label2) -> (verdict, citations)

    def text(self):
        out = [f"command: {self.command}", f"inputs sha256: {self.digest}"]
        out += self.lines
        return "\n".join(out) + "\n"


def digest_of(*chunks):
    h = hashlib.sha256()
    for c in chunks:
        h.update(c if isinstance(c, bytes) else str(c).encode())
        h.update(b"\0")
    return h.hexdigest()


@dataclass
class FamilyFacts:
    label: str
    vertices: int
    edges: int
    reduced: bool
    no_unit_label: bool
    plateau_free: bool
    q_meets_z_trivially: bool
    profile: object = None
    crkz: tuple = None        # (n, K, bouquet) when a C_{n,K} normal form exists

    @property
    def ratio_hypotheses(self):
        return self.reduced and self.no_unit_label and self.plateau_free and self.q_meets_z_trivially


def family_facts(spec):
    g, _ = family_graph(spec)
    g = g.without_positive()
    f = FamilyFacts(
        spec.label(), len(g.vertices), len(g.edges), is_reduced(g),
        all(abs(g.label(e)) != 1 for e in g.half_edges),
        find_proper_plateau(g) is None,
        intersects_integers_trivially(modular_subgroup(g)))
    try:
        f.profile = closed_form_profile(spec)
    except (ValueError, KeyError):
        f.profile = None
    try:
        b = g if spec.family == "Bouquet_A" else normalized_bouquet(spec)
        e = unit_loop(b)
        K = _exp(spec.params["n"], abs(b.label(bar(e))))
        f.crkz = (spec.params["n"], K, b, e)
    except (FamilyError, KeyError, ValueError, TypeError):
        f.crkz = None
    return f


def _exp(n, x):
    k = 0
    while x % n == 0 and x > 1:
        x //= n
        k += 1
    if x != 1:
        raise ValueError("not a power")
    return k


def _crkz_at(f, L):
    n, K, b, e = f.crkz
    cov = cyclic_unwind(b, e, L // K)
    return crkz_vector(cov.source, n, L)


def pair_obstructions(f1, f2):
    obs = []
    if f1.profile is not None and f2.profile is not None:
        r = ladder_equivalent(f1.profile, f2.profile)
        if r.verdict == "inequivalent":
            obs.append((CITE_TAILS, f"profiles {f1.profile} and {f2.profile}: {r.reason}"))
    if f1.crkz and f2.crkz and f1.crkz[0] == f2.crkz[0]:
        L = lcm(f1.crkz[1], f2.crkz[1])
        x1, x2 = _crkz_at(f1, L), _crkz_at(f2, L)
        if cyclic_scalar_equivalent(x1, x2) is None:
            obs.append((CITE_CRKZ, f"X^{L} = {x1} vs {x2} after unwinding to level {L}"))
    if f1.ratio_hypotheses and f2.ratio_hypotheses:
        rv, re_ = Fraction(f1.vertices, f2.vertices), Fraction(f1.edges, f2.edges)
        if rv != re_:
            obs.append((CITE_RATIO, f"|V| ratio {rv} != |E| ratio {re_}"))
    return obs


def incommensurability_report(specs, command="report incomm"):
    facts = [family_facts(s) for s in specs]
    rep = Report(command, digest_of(*[s.label() for s in specs]))
    rep.lines.append("families:")
    for f in facts:
        rep.lines.append(
            f"  {f.label}: |V|={f.vertices} |E|={f.edges} reduced={f.reduced} "
            f"no_unit_label={f.no_unit_label} plateau_free={f.plateau_free} "
            f"q_meets_Z_trivially={f.q_meets_z_trivially}"
            + (f" profile={f.profile}" if f.profile is not None else ""))
    rep.lines.append("pairs:")
    for f1, f2 in combinations(facts, 2):
        obs = pair_obstructions(f1, f2)
        verdict = "incommensurable" if obs else "undetermined"
        rep.verdicts[(f1.label, f2.label)] = (verdict, [c for c, _ in obs])
        rep.lines.append(f"  {f1.label} vs {f2.label}: {verdict}")
        for cite, detail in obs:
            rep.lines.append(f"    [{cite}] {detail}")
    return rep
