"""CRKZ level vectors and commensurability in the class C_{n,l}.

C_{n,l} is the class of bouquets A(n,l;a): one loop labeled (1, n^l) and
petals labeled (n^a, n^a) with 0 <= a < l.
"""

from dataclasses import dataclass
from math import gcd

from .covering import cyclic_unwind, is_topological, verify_admissible
from .families import bouquet_graph, loop_multiset
from .graph import GraphError, bar, graph_isomorphic
from .modular import levels
from .moves import apply_script
from .plateau import find_proper_plateau


def rotate(w, r):
    return tuple(w[r:]) + tuple(w[:r])


def least_rotation(w):
    w = tuple(w)
    return min(rotate(w, r) for r in range(len(w))) if w else w


@dataclass(frozen=True)
class CrkzVector:
    """Level counts |E^i| - 2|V^i| (half-edges and vertices at level i), read from a base vertex."""
    entries: tuple
    n: int
    l: int

    @property
    def canonical(self):
        return least_rotation(self.entries)

    def __eq__(self, other):
        return isinstance(other, CrkzVector) and (self.n, self.l, self.canonical) == (other.n, other.l, other.canonical)

    def __hash__(self):
        return hash((self.n, self.l, self.canonical))

    def scaled(self, c):
        return CrkzVector(tuple(c * x for x in self.entries), self.n, self.l)

    def __str__(self):
        g = 0
        for x in self.entries:
            g = gcd(g, x)
        if g > 1:
            return f"{g}(" + ", ".join(str(x // g) for x in self.entries) + ")"
        return "(" + ", ".join(map(str, self.entries)) + ")"


def crkz_vector(g, n, l, base=None):
    vl, el = levels(g, n, l, base)
    ent = [0] * l
    for e in g.half_edges:
        ent[el[e]] += 1
    for v in g.vertices:
        ent[vl[v]] -= 2
    assert sum(ent) == len(g.half_edges) - 2 * len(g.vertices)
    return CrkzVector(tuple(ent), n, l)


@dataclass
class ScalarRotation:
    c1: int
    c2: int
    rotation: int
    degenerate: bool = False     # both vectors zero


def cyclic_scalar_equivalent(v, w):
    """Minimal c1, c2 > 0 and r with c1 v = rotate(c2 w, r), or None."""
    a, b = tuple(v.entries), tuple(w.entries)
    if len(a) != len(b):
        raise ValueError("vectors have different lengths")
    ga = gb = 0
    for x in a:
        ga = gcd(ga, x)
    for x in b:
        gb = gcd(gb, x)
    if ga == 0 or gb == 0:
        if ga == gb:
            return ScalarRotation(1, 1, 0, degenerate=True)
        return None
    na, nb = tuple(x // ga for x in a), tuple(x // gb for x in b)
    for r in range(len(a)):
        if rotate(nb, r) == na:
            G = gcd(ga, gb)
            return ScalarRotation(gb // G, ga // G, r)
    return None


@dataclass(frozen=True)
class CnlPresentation:
    n: int
    l: int
    a: tuple

    def __post_init__(self):
        if self.n < 2 or self.l < 1:
            raise ValueError("need n >= 2, l >= 1")
        if len(self.a) < 1:
            raise ValueError("need k >= 2 loops (at least one petal)")
        if any(not 0 <= x < self.l for x in self.a):
            raise ValueError("petal exponents must lie in [0, l-1]")

    @property
    def k(self):
        return len(self.a) + 1

    def graph(self):
        return bouquet_graph(self.n, self.l, list(self.a))

    def vector(self):
        return crkz_vector(self.graph(), self.n, self.l, "v")

    def counts(self):
        return tuple(sum(1 for x in self.a if x == j) for j in range(self.l))

    def __str__(self):
        return f"A({self.n},{self.l};{','.join(map(str, self.a))})"


def parse_presentation(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        if key.strip() != "cnl":
            raise ValueError(f"expected 'cnl: n l a1 ...', got {line!r}")
        nums = [int(x) for x in rest.split()]
        if len(nums) < 3:
            raise ValueError("cnl line needs n, l and at least one exponent")
        return CnlPresentation(nums[0], nums[1], tuple(nums[2:]))
    raise ValueError("no cnl line found")


def serialize_presentation(p):
    return f"cnl: {p.n} {p.l} " + " ".join(map(str, p.a)) + "\n"


def _same_class(p1, p2):
    if (p1.n, p1.l) != (p2.n, p2.l):
        raise ValueError(f"presentations lie in different classes: C_{{{p1.n},{p1.l}}} vs C_{{{p2.n},{p2.l}}}")


def cnl_isomorphic(p1, p2):
    _same_class(p1, p2)
    return p1.k == p2.k and p1.vector() == p2.vector()


@dataclass
class WitnessSide:
    presentation: CnlPresentation
    degree: int
    align_script: str          # moves on A(n,l;a) rotating its levels
    cover: object              # BranchedCover unwinding a petal
    script: str                # moves on the cover source reaching the bouquet
    bouquet: object            # final one-vertex graph


@dataclass
class CnlDecision:
    commensurable: bool
    scalars: ScalarRotation = None
    sides: tuple = ()
    isomorphism: tuple = None
    obstruction: str = ""

    def __bool__(self):
        return self.commensurable


def _exp(n, x):
    a = 0
    x = abs(x)
    while x % n == 0 and x > 1:
        x //= n
        a += 1
    assert x == 1
    return a


def _align_script(p, s):
    """Induction by n^s on e1 shifts every petal exponent by s; then slide ends >= n^l down."""
    if s == 0:
        return ""
    lines = [f"induction e1 by {p.n ** s}"]
    for i, a in enumerate(p.a):
        if a + s >= p.l:
            e = f"e{i + 2}"
            lines += [f"slide {e} over ~e1", f"slide ~{e} over ~e1"]
    return "\n".join(lines) + "\n"


def _normalize_side(p, c, s):
    n, l = p.n, p.l
    align = _align_script(p, s)
    g = apply_script(p.graph(), align) if align else p.graph()
    petals = [(e, _exp(n, g.label(e))) for e in g.edges if e != "e1"]
    j0 = min(a for _, a in petals)
    P = min(e for e, a in petals if a == j0)
    cov = cyclic_unwind(g, P, c)
    lines = []
    for i in range(c):
        lines.append(f"induction e1.{i} by {n ** (l - j0)}")
    for i in range(c):
        lines.append(f"slide {P}.{i} over ~e1.{i}")
        lines.append(f"slide ~{P}.{(i - 1) % c} over ~e1.{i}")
    for i in range(c - 1):
        lines.append(f"collapse {P}.{i}")
    for i in range(1, c):
        lines.append(f"slide e1.{i} over e1.0")
    # every remaining end divisible by n^l slides down over ~e1.0
    h = apply_script(cov.source, "\n".join(lines) + "\n")
    for f in sorted(h.half_edges):
        if f in ("e1.0", "~e1.0"):
            continue
        if h.label(f) % n ** l == 0:
            lines.append(f"slide {f} over ~e1.0")
    script = "\n".join(lines) + "\n"
    b = apply_script(cov.source, script)
    if len(b.vertices) != 1:
        raise GraphError("witness normalization did not reach a bouquet")
    return WitnessSide(p, c, align, cov, script, b), j0


def expected_witness_bouquet(counts, c, j0, n, l):
    """c x^j petals at label n^(j-j0) plus the (1, n^l) loop."""
    out = [(1, n ** l)]
    for j, x in enumerate(counts):
        out += [(n ** (j - j0), n ** (j - j0))] * (c * x)
    return sorted(out)


def cnl_commensurable(p1, p2):
    """Decide commensurability in C_{n,l}; positive answers carry a checked witness."""
    _same_class(p1, p2)
    v1, v2 = p1.vector(), p2.vector()
    sr = cyclic_scalar_equivalent(v1, v2)
    if sr is None:
        return CnlDecision(False, obstruction=f"no c1, c2 > 0 with c1*{v1} a rotation of c2*{v2}")
    s = (-sr.rotation) % p1.l
    side1, j0 = _normalize_side(p1, sr.c1, 0)
    side2, j0b = _normalize_side(p2, sr.c2, s)
    for side, jj in ((side1, j0), (side2, j0b)):
        cov = side.cover
        if verify_admissible(cov) or not is_topological(cov):
            raise GraphError("witness cover failed verification")
        want = expected_witness_bouquet(side.presentation.counts() if side is side1 else
                                        rotate(p2.counts(), sr.rotation), side.degree, jj, p1.n, p1.l)
        if loop_multiset(side.bouquet) != want:
            raise GraphError("witness bouquet differs from the expected normal form")
    iso = graph_isomorphic(side1.bouquet, side2.bouquet)
    if iso is None:
        raise GraphError("witness bouquets are not isomorphic")
    return CnlDecision(True, sr, (side1, side2), iso)


def check_witness(decision):
    """Replay a positive decision's scripts and re-check the isomorphism; returns failures."""
    fails = []
    finals = []
    for side in decision.sides:
        g = side.presentation.graph()
        if side.align_script:
            g = apply_script(g, side.align_script)
        if graph_isomorphic(g, side.cover.target) is None:
            fails.append("cover target is not the aligned presentation")
        if verify_admissible(side.cover) or not is_topological(side.cover):
            fails.append("cover is not a topological cover")
        if len(side.cover.source.vertices) != side.degree * len(side.cover.target.vertices):
            fails.append("cover has the wrong number of sheets")
        finals.append(apply_script(side.cover.source, side.script))
    if len(finals) == 2 and graph_isomorphic(*finals) is None:
        fails.append("replayed bouquets are not isomorphic")
    return fails


def scaling_check(g, n, l, cover):
    """Diagnostics for X(source) = c X(target) up to rotation, c the number of sheets."""
    diags = []
    if cover.target is not g and graph_isomorphic(cover.target, g) is None:
        diags.append("cover target is not g")
    if find_proper_plateau(g) is not None:
        diags.append("g has a proper plateau; scaling is not guaranteed")
    if verify_admissible(cover):
        diags.append("cover is not admissible")
    if not is_topological(cover):
        diags.append("cover is not topological")
    c = len(cover.source.vertices) // len(g.vertices)
    if c * len(g.vertices) != len(cover.source.vertices):
        diags.append("source vertex count is not a multiple of the target's")
        return diags
    try:
        xs = crkz_vector(cover.source, n, l)
        xt = crkz_vector(g, n, l)
    except GraphError as exc:
        diags.append(f"levels undefined: {exc}")
        return diags
    if xs != xt.scaled(c):
        diags.append(f"X(source) = {xs} is not a rotation of {c} X(target) = {xt.scaled(c)}")
    return diags


def unit_loop(g):
    """The half-edge labeled +-1 of a loop whose other end is not +-1, or None."""
    for e in g.edges:
        a, b = abs(g.label(e)), abs(g.label(bar(e)))
        if g.is_loop(e) and min(a, b) == 1 and max(a, b) > 1:
            return e if a == 1 else bar(e)
    return None
