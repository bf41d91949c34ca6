"""Admissible branched covers of labeled graphs.

A cover is a graph morphism pi: B -> A with a degree map d on the cells
of B. Admissibility: for every e in E(A) at v and u over v, with
k = gcd(d(u), |lambda(e)|), exactly k half-edges at u map to e, each with
label lambda(e)/k and degree d(u)/k.
"""

import os
from dataclasses import dataclass
from math import gcd

from .arith import is_prime, valuation
from .graph import GraphError, LabeledGraph, bar, graph_isomorphic, parse_graph, serialize_graph
from .modular import height_map, is_p_unimodular
from .moves import collapse, expand


class CoverError(ValueError):
    pass


@dataclass
class BranchedCover:
    source: LabeledGraph
    target: LabeledGraph
    vmap: dict
    emap: dict
    degree: dict

    def sheets(self, v=None):
        """Number of source vertices over v (or the list of counts)."""
        if v is not None:
            return sum(1 for u in self.vmap if self.vmap[u] == v)
        return {w: self.sheets(w) for w in self.target.vertices}

    def fibre(self, v):
        return sorted(u for u in self.vmap if self.vmap[u] == v)


@dataclass(frozen=True)
class Diagnostic:
    condition: str
    where: tuple
    detail: str

    def __str__(self):
        return f"{self.condition} at {', '.join(map(str, self.where))}: {self.detail}"


def verify_admissible(c):
    """List of violated conditions (empty iff c is an admissible branched cover)."""
    A, B = c.target, c.source
    out = []
    if set(c.vmap) != set(B.vertices):
        out.append(Diagnostic("vmap", (), "vmap is not defined on exactly the source vertices"))
    if set(c.emap) != set(B.half_edges):
        out.append(Diagnostic("emap", (), "emap is not defined on exactly the source half-edges"))
    if out:
        return out
    if set(c.vmap.values()) != set(A.vertices):
        out.append(Diagnostic("surjective", (), "vmap is not onto"))
    if set(c.emap.values()) != set(A.half_edges):
        out.append(Diagnostic("surjective", (), "emap is not onto"))
    for x in list(B.vertices) + list(B.half_edges):
        d = c.degree.get(x)
        if not isinstance(d, int) or d < 1:
            out.append(Diagnostic("degree", (x,), f"degree {d!r} is not a positive integer"))
    if out:
        return out
    for e in B.half_edges:
        f = c.emap[e]
        if c.emap[bar(e)] != bar(f):
            out.append(Diagnostic("involution", (e,), f"pi(~{e}) != ~pi({e})"))
        if c.vmap[B.origin(e)] != A.origin(f):
            out.append(Diagnostic("incidence", (e,), f"pi(o({e})) != o(pi({e}))"))
        if c.degree[e] != c.degree[bar(e)]:
            out.append(Diagnostic("edge degree", (e,), "d(e) != d(~e)"))
    for v in A.vertices:
        over = c.fibre(v)
        for e in A.star(v):
            lam = A.label(e)
            for u in over:
                k = gcd(c.degree[u], abs(lam))
                lifts = [x for x in B.star(u) if c.emap[x] == e]
                if len(lifts) != k:
                    out.append(Diagnostic("lift count", (u, e), f"{len(lifts)} lifts, expected k = {k}"))
                for x in lifts:
                    if B.label(x) * k != lam:
                        out.append(Diagnostic("lift label", (u, e, x), f"label {B.label(x)}, expected {lam // k}"))
                    if c.degree[x] * k != c.degree[u]:
                        out.append(Diagnostic("lift degree", (u, e, x), f"degree {c.degree[x]}, expected {c.degree[u] // k}"))
    return out


def is_topological(c):
    """Star-bijective with labels pulled back."""
    A, B = c.target, c.source
    for u in B.vertices:
        img = [c.emap[x] for x in B.star(u)]
        if sorted(img) != sorted(A.star(c.vmap[u])):
            return False
        if any(B.label(x) != A.label(c.emap[x]) for x in B.star(u)):
            return False
    return True


def identity_cover(g, degree=1):
    d = {x: degree for x in list(g.vertices) + list(g.half_edges)}
    return BranchedCover(g, g, {v: v for v in g.vertices}, {e: e for e in g.half_edges}, d)


def compose(outer, inner):
    """outer o inner, where inner: C -> B and outer: B -> A. Degrees multiply."""
    if inner.target != outer.source:
        iso = graph_isomorphic(inner.target, outer.source)
        if iso is None:
            raise CoverError("inner target and outer source are not isomorphic")
        vm, em = iso
    else:
        vm = {v: v for v in inner.target.vertices}
        em = {e: e for e in inner.target.half_edges}
    vmap = {u: outer.vmap[vm[inner.vmap[u]]] for u in inner.source.vertices}
    emap = {e: outer.emap[em[inner.emap[e]]] for e in inner.source.half_edges}
    deg = {}
    for u in inner.source.vertices:
        deg[u] = inner.degree[u] * outer.degree[vm[inner.vmap[u]]]
    for e in inner.source.half_edges:
        deg[e] = inner.degree[e] * outer.degree[em[inner.emap[e]]]
    return BranchedCover(inner.source, outer.target, vmap, emap, deg)


def constant_degree_cover(topo, c):
    """Re-degree a topological cover with the constant c (prime to every label)."""
    if not is_topological(topo):
        raise CoverError("input is not a topological covering")
    bad = [e for e in topo.target.half_edges if gcd(c, topo.target.label(e)) != 1]
    if bad:
        raise CoverError(f"degree {c} shares a factor with label of {bad[0]}")
    d = {x: c for x in list(topo.source.vertices) + list(topo.source.half_edges)}
    return BranchedCover(topo.source, topo.target, dict(topo.vmap), dict(topo.emap), d)


def cyclic_unwind(g, loop, c):
    """Degree-1 topological cover with c sheets unwinding ``loop`` into a c-cycle.

    Sheet i has vertices ``v.i``; copies of ``loop`` go from sheet i to
    sheet i+1 (mod c), every other edge stays in its sheet.
    """
    if not g.has_edge(loop) or not g.is_loop(loop):
        raise CoverError(f"{loop} is not a loop")
    if c < 1:
        raise CoverError("need c >= 1")
    lp = loop if not loop.startswith("~") else bar(loop)
    vs, origin, label, vmap, emap = [], {}, {}, {}, {}
    for i in range(c):
        for v in g.vertices:
            vs.append(f"{v}.{i}")
            vmap[f"{v}.{i}"] = v
        for e in g.edges:
            x = f"{e}.{i}"
            j = (i + 1) % c if e == lp else i
            origin[x], origin[bar(x)] = f"{g.origin(e)}.{i}", f"{g.terminus(e)}.{j}"
            label[x], label[bar(x)] = g.label(e), g.label(bar(e))
            emap[x], emap[bar(x)] = e, bar(e)
    src = LabeledGraph(vs, origin, label, name=f"{g.name or 'A'} unwound {c}x along {lp}")
    deg = {x: 1 for x in list(src.vertices) + list(src.half_edges)}
    return BranchedCover(src, g, vmap, emap, deg)


# coprime cover construction

@dataclass
class CoprimeConstruction:
    """Intermediate objects of the coprime-p construction."""
    p: int
    expanded: LabeledGraph        # A1: every p-divisible end split into (p, 1) edges
    new_edges: list               # geometric ids of the expansion edges in A1
    heights: dict                 # h_p on A1
    alpha: int
    beta: int
    copies: dict                  # height -> number of copies in the lift
    lifted: BranchedCover         # pi_1: A1~ -> A1
    collapsed_into: dict          # A1~ vertex -> A_p vertex
    cover: BranchedCover          # A_p -> A
    result: LabeledGraph


def _expand_all(g, p):
    """Split every half-edge with p | label into a chain of nu_p (p, 1) edges."""
    new_edges, origin_of = [], {}
    A = g
    for e in g.half_edges:
        k = valuation(g.label(e), p) if g.label(e) % p == 0 else 0
        for i in range(1, k + 1):
            v = A.origin(e)
            w, x = f"{e}:{i}", f"x:{e}:{i}"
            A = expand(A, v, p, [e], new_vertex=w, new_edge=x)
            new_edges.append(x)
            origin_of[w] = g.origin(e)
    return A, new_edges


def coprime_construction(g, p):
    """Run the coprime-p cover construction, keeping every stage."""
    if not is_prime(p):
        raise CoverError(f"{p} is not prime")
    if not g.is_connected():
        raise CoverError("graph is not connected")
    if not is_p_unimodular(g, p):
        raise CoverError(f"graph is not {p}-unimodular")
    A1, new_edges = _expand_all(g, p)
    new = set(new_edges) | {bar(x) for x in new_edges}
    h = height_map(A1, p, base=g.vertices[0])
    alpha = min(h.values())
    beta = max(h.values()) - alpha
    # (p at v, 1 at w) edges climb one level
    for x in new_edges:
        assert h[A1.terminus(x)] == h[A1.origin(x)] + 1
    # B1 edges (both labels prime to p) stay inside a level
    for e in A1.half_edges:
        if e not in new:
            assert A1.label(e) % p and h[A1.origin(e)] == h[A1.terminus(e)]
    level = {v: h[v] - alpha for v in A1.vertices}
    copies = {i: p ** i for i in range(beta + 1)}

    vs, origin, label, vmap, emap, deg = [], {}, {}, {}, {}, {}
    cp = lambda v, j: f"{v}^{j}"
    for v in A1.vertices:
        i = level[v]
        for j in range(1, p ** i + 1):
            vs.append(cp(v, j))
            vmap[cp(v, j)] = v
            deg[cp(v, j)] = p ** (beta - i)
    for e in A1.edges:
        if e in new:
            continue
        i = level[A1.origin(e)]
        for j in range(1, p ** i + 1):
            x = f"{e}^{j}"
            origin[x], origin[bar(x)] = cp(A1.origin(e), j), cp(A1.terminus(e), j)
            label[x], label[bar(x)] = A1.label(e), A1.label(bar(e))
            emap[x], emap[bar(x)] = e, bar(e)
            deg[x] = deg[bar(x)] = p ** (beta - i)
    lifted_new = []
    for e in new_edges:
        lo, hi = A1.origin(e), A1.terminus(e)
        i = level[lo]
        for j in range(1, p ** (i + 1) + 1):
            x = f"{e}^{j}"
            phi = (j - 1) % p ** i + 1      # Z/p^(i+1) -> Z/p^i on residues 1..p^(i+1)
            origin[x], origin[bar(x)] = cp(lo, phi), cp(hi, j)
            label[x] = label[bar(x)] = 1
            emap[x], emap[bar(x)] = e, bar(e)
            deg[x] = deg[bar(x)] = p ** (beta - i - 1)
            lifted_new.append(x)
    At = LabeledGraph(vs, origin, label, name=f"lift of {g.name or 'A'} at p={p}")
    pi1 = BranchedCover(At, A1, vmap, emap, deg)

    # collapse the lifted new edges (a forest): children merge into parents
    Ap = At
    into = {v: v for v in At.vertices}
    for x in sorted(lifted_new, key=lambda x: (-level[A1.origin(emap[x])], x)):
        child, parent = Ap.terminus(x), Ap.origin(x)
        if child == parent:
            raise CoverError("expansion edges do not form a forest")
        Ap = collapse(Ap, x)
        for v, r in into.items():
            if r == child:
                into[v] = parent
    Ap.name = f"{g.name or 'A'} coprime to {p}"

    # compose A_p -> A~1 -> A1 -> A; A1 keeps the original edge ids
    vmap2, emap2, deg2 = {}, {}, {}
    for w in Ap.vertices:
        members = [v for v in At.vertices if into[v] == w]
        roots = [v for v in members if vmap[v] in g.vertices]
        if len(roots) != 1:
            raise CoverError(f"collapsed vertex {w} does not contain exactly one original vertex")
        vmap2[w] = vmap[roots[0]]
        deg2[w] = max(deg[v] for v in members)
    for x in Ap.half_edges:
        emap2[x] = emap[x]
        deg2[x] = deg[x]
    cover = BranchedCover(Ap, g, vmap2, emap2, deg2)
    return CoprimeConstruction(p, A1, new_edges, h, alpha, beta, copies, pi1, into, cover, Ap)


def construct_coprime_cover(g, p):
    """Finite admissible cover (cover, A_p) of g with p dividing no label of A_p.

    Raises CoverError if g is not p-unimodular or if the assembled cover
    fails verification (the failure is reported, not repaired).
    """
    st = coprime_construction(g, p)
    diags = verify_admissible(st.cover)
    if diags:
        raise CoverError("constructed cover is not admissible: " + "; ".join(map(str, diags[:5])))
    bad = [e for e in st.result.half_edges if st.result.label(e) % p == 0]
    if bad:
        raise CoverError(f"result label on {bad[0]} is divisible by {p}")
    return st.cover, st.result


# Leighton common cover (regular directed case)

def _check_regular(g, d, m, n):
    if g.positive is None:
        raise CoverError(f"{g.name or 'graph'} has no directed structure")
    P = g.positive
    for e in P.positive:
        if g.label(e) != m or g.label(bar(e)) != n:
            raise CoverError(f"E+ edge {e} is not labeled ({m}, {n})")
    for v in g.vertices:
        if len(P.out_edges(g, v)) != d or len(P.in_edges(g, v)) != d:
            raise CoverError(f"vertex {v} does not have {d} outgoing and {d} incoming E+ edges")


def edge_colouring(g):
    """Split E+ of a d-in/d-out graph into d permutations by repeated perfect matching.

    Each round matches tails to heads with scipy's bipartite matching on
    the remaining edges. Returns a list of dicts colour -> {tail: positive half-edge}.
    """
    import numpy as np
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import maximum_bipartite_matching

    vs = list(g.vertices)
    idx = {v: i for i, v in enumerate(vs)}
    remaining = sorted(g.positive.positive)
    colours = []
    while remaining:
        between = {}
        for e in remaining:
            between.setdefault((idx[g.origin(e)], idx[g.terminus(e)]), []).append(e)
        rows, cols = zip(*sorted(between))
        adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(vs), len(vs)))
        match = maximum_bipartite_matching(adj, perm_type="column")
        if (match < 0).any():
            raise CoverError("no perfect matching (internal error for a regular graph)")
        colour = {vs[i]: between[(i, int(j))][0] for i, j in enumerate(match)}
        colours.append(colour)
        used = set(colour.values())
        remaining = [e for e in remaining if e not in used]
    return colours


def leighton_common_cover(g1, g2, d, m, n):
    """Common topological cover of two d-in/d-out graphs with all E+ labels (m, n).

    Returns (common, c1, c2) with c_i: common -> g_i degree-1 covers. The
    common graph lives on V1 x V2 and need not be connected.
    """
    _check_regular(g1, d, m, n)
    _check_regular(g2, d, m, n)
    col1, col2 = edge_colouring(g1), edge_colouring(g2)
    vs = [f"{u}*{v}" for u in g1.vertices for v in g2.vertices]
    origin, label, pos = {}, {}, []
    e1map, e2map, v1map, v2map = {}, {}, {}, {}
    for u in g1.vertices:
        for v in g2.vertices:
            v1map[f"{u}*{v}"], v2map[f"{u}*{v}"] = u, v
    for c in range(d):
        for u in g1.vertices:
            a = col1[c][u]
            for v in g2.vertices:
                b = col2[c][v]
                x = f"{a}*{b}"
                origin[x] = f"{u}*{v}"
                origin[bar(x)] = f"{g1.terminus(a)}*{g2.terminus(b)}"
                label[x], label[bar(x)] = m, n
                pos.append(x)
                e1map[x], e1map[bar(x)] = a, bar(a)
                e2map[x], e2map[bar(x)] = b, bar(b)
    common = LabeledGraph(vs, origin, label, name="common cover", positive=pos)
    one = {x: 1 for x in list(common.vertices) + list(common.half_edges)}
    c1 = BranchedCover(common, g1, v1map, e1map, dict(one))
    c2 = BranchedCover(common, g2, v2map, e2map, dict(one))
    return common, c1, c2


# cover files

def serialize_cover(c, source_ref, target_ref):
    out = ["gbscover v1", f"target {target_ref}", f"source {source_ref}"]
    for u in c.source.vertices:
        out.append(f"vmap {u} {c.vmap[u]} {c.degree[u]}")
    for e in c.source.half_edges:
        out.append(f"emap {e} {c.emap[e]} {c.degree[e]}")
    return "\n".join(out) + "\n"


def parse_cover(text, load_graph):
    """Parse a cover file; ``load_graph(ref)`` resolves graph references."""
    refs, vmap, emap, deg = {}, {}, {}, {}
    header = False
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if not header:
            if line != "gbscover v1":
                raise GraphError(f"line {no}: expected header 'gbscover v1'")
            header = True
            continue
        if tok[0] in ("target", "source") and len(tok) == 2:
            refs[tok[0]] = tok[1]
        elif tok[0] in ("vmap", "emap") and len(tok) == 4:
            try:
                d = int(tok[3])
            except ValueError:
                raise GraphError(f"line {no}: degree must be an integer") from None
            (vmap if tok[0] == "vmap" else emap)[tok[1]] = tok[2]
            if tok[1] in deg:
                raise GraphError(f"line {no}: duplicate id {tok[1]}")
            deg[tok[1]] = d
        else:
            raise GraphError(f"line {no}: syntax error")
    if set(refs) != {"target", "source"}:
        raise GraphError("cover file needs target and source lines")
    return BranchedCover(load_graph(refs["source"]), load_graph(refs["target"]), vmap, emap, deg)


def write_cover(c, path, target_path=None):
    """Write ``path`` plus its source graph (and target if no path is given) next to it."""
    stem = os.path.splitext(path)[0]
    src = stem + ".source.gbs"
    with open(src, "w") as fh:
        fh.write(serialize_graph(c.source))
    if target_path is None:
        target_path = stem + ".target.gbs"
        with open(target_path, "w") as fh:
            fh.write(serialize_graph(c.target))
    base = os.path.dirname(os.path.abspath(path))
    rel = lambda p: os.path.relpath(os.path.abspath(p), base)
    with open(path, "w") as fh:
        fh.write(serialize_cover(c, rel(src), rel(target_path)))


def read_cover(path):
    base = os.path.dirname(os.path.abspath(path))

    def load(ref):
        with open(os.path.join(base, ref)) as fh:
            return parse_graph(fh.read(), connected=False)

    with open(path) as fh:
        return parse_cover(fh.read(), load)
