"""Constructors for the example families B1 = Gamma_1, Gamma_k, Delta_k, Lambda_l and A(n,l;a).

All lattice families come with their directed structure (E+ = the
forward half-edges). Normalization move scripts live in ``gbs/data``.
"""

from dataclasses import dataclass, field
from importlib import resources
from math import gcd

from .arith import is_prime
from .graph import LabeledGraph
from .moves import apply_script


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)

    def __hash__(self):
        return hash((self.family, tuple(sorted(self.params.items()))))

    def label(self):
        p = self.params
        if self.family == "Gamma_k":
            return f"Gamma_{p['k']}(d={p['d']},m={p['m']},n={p['n']},p={p.get('p', 1)})"
        if self.family == "B1":
            return f"Gamma_1(d={p['d']},m={p['m']},n={p['n']})"
        if self.family == "Delta_k":
            return f"Delta_{p['k']}(d={p['d']},n={p['n']},p={p['p']})"
        if self.family == "Lambda_l":
            return f"Lambda_{p['l']}(d={p['d']},m={p['m']},n={p['n']},q={p['q']})"
        if self.family == "Bouquet_A":
            return f"A({p['n']},{p['l']};{','.join(map(str, p['a']))})"
        return self.family


def _need(cond, msg):
    if not cond:
        raise FamilyError(msg)


def b1_graph(d, m, n):
    """Two vertices u1, v1 and 2d edges: e_i u1->v1 and f_i v1->u1, all labeled (m, n)."""
    _need(d >= 1, "need d >= 1")
    _need(gcd(m, n) == 1, "Gamma_1 needs gcd(m, n) = 1")
    edges = [(f"e{i}", "u1", "v1", m, n) for i in range(1, d + 1)]
    edges += [(f"f{i}", "v1", "u1", m, n) for i in range(1, d + 1)]
    return LabeledGraph.from_edges(["u1", "v1"], edges, name=f"Gamma_1(d={d},m={m},n={n})", directed=True)


def gamma_graph(k, d, m, n, p=None):
    """Gamma_k: d edges v_i -> v_{i+1} labeled (m, n) and d/p edges v_k -> v_1 labeled (pm, pn)."""
    if k == 1:
        return b1_graph(d, m, n)
    _need(k >= 2, "need k >= 1")
    _need(gcd(m, n) == 1, "Gamma_k needs gcd(m, n) = 1")
    _need(p is not None and is_prime(p), "Gamma_k needs a prime p")
    _need(d % p == 0, "Gamma_k needs p | d (d/p closing edges)")
    _need(m % p == 0, "Gamma_k needs p | m")
    vs = [f"v{i}" for i in range(1, k + 1)]
    edges = []
    for i in range(1, k):
        edges += [(f"e{i}.{j}", f"v{i}", f"v{i + 1}", m, n) for j in range(1, d + 1)]
    edges += [(f"f{j}", f"v{k}", "v1", p * m, p * n) for j in range(1, d // p + 1)]
    return LabeledGraph.from_edges(vs, edges, name=f"Gamma_{k}(d={d},m={m},n={n},p={p})", directed=True)


def delta_graph(k, d, n, p):
    """Delta_k: d edges v_i -> v_{i+1} labeled (1, n), d-p edges v_k -> v_1 labeled (1, n)
    and one edge h: v_k -> v_1 labeled (p, np)."""
    _need(k >= 2, "Delta_k needs k >= 2")
    _need(is_prime(p), "Delta_k needs a prime p")
    _need(n % p == 0, "Delta_k needs p | n")
    _need(p < d, "Delta_k needs p < d")
    vs = [f"v{i}" for i in range(1, k + 1)]
    edges = []
    for i in range(1, k):
        edges += [(f"e{i}.{j}", f"v{i}", f"v{i + 1}", 1, n) for j in range(1, d + 1)]
    edges += [(f"g{j}", f"v{k}", "v1", 1, n) for j in range(1, d - p + 1)]
    edges.append(("h", f"v{k}", "v1", p, n * p))
    return LabeledGraph.from_edges(vs, edges, name=f"Delta_{k}(d={d},n={n},p={p})", directed=True)


def lambda_DI(d, m, n, q):
    """D = largest divisor of d-q prime to m and n; I = (d-q)/D."""
    r = d - q
    D = max(x for x in range(1, r + 1) if r % x == 0 and gcd(x, m) == 1 and gcd(x, n) == 1)
    return D, r // D


def lambda_graph(l, d, m, n, q):
    """Lambda_l: d edges v_i -> v_{i+1} labeled (m, n), one v_l -> v_1 labeled (qm, qn)
    and D edges v_l -> v_1 labeled (Im, In)."""
    _need(l >= 2, "Lambda_l needs l >= 2")
    _need(is_prime(q) and m % q == 0, "Lambda_l needs a prime q dividing m")
    _need(q < d, "Lambda_l needs q < d")
    _need(gcd(m, d) == 1 and gcd(n, d) == 1, "Lambda_l needs gcd(m, d) = gcd(n, d) = 1")
    _need(m > 1 and n > 1 and gcd(m, n) == 1, "Lambda_l needs coprime m, n > 1")
    D, I = lambda_DI(d, m, n, q)
    vs = [f"v{i}" for i in range(1, l + 1)]
    edges = []
    for i in range(1, l):
        edges += [(f"e{i}.{j}", f"v{i}", f"v{i + 1}", m, n) for j in range(1, d + 1)]
    edges.append(("f", f"v{l}", "v1", q * m, q * n))
    edges += [(f"g{j}", f"v{l}", "v1", I * m, I * n) for j in range(1, D + 1)]
    return LabeledGraph.from_edges(vs, edges, name=f"Lambda_{l}(d={d},m={m},n={n},q={q})", directed=True)


def bouquet_graph(n, l, a):
    """A(n,l;a): one vertex, loop e1 labeled (1, n^l), loops e_{i+1} labeled (n^a_i, n^a_i)."""
    _need(n >= 2 and l >= 1, "bouquet needs n >= 2, l >= 1")
    _need(len(a) >= 1, "bouquet needs k >= 2 loops")
    _need(all(0 <= x < l for x in a), "bouquet exponents must lie in [0, l-1]")
    edges = [("e1", "v", "v", 1, n ** l)]
    edges += [(f"e{i + 2}", "v", "v", n ** x, n ** x) for i, x in enumerate(a)]
    return LabeledGraph.from_edges(["v"], edges, name=f"A({n},{l};{','.join(map(str, a))})")


def lattice_params(spec):
    """(d, m, n) of the tree X_{dm,dn} the family acts on."""
    p = spec.params
    if spec.family in ("B1", "Gamma_k", "Lambda_l"):
        return p["d"], p["m"], p["n"]
    if spec.family == "Delta_k":
        return p["d"], 1, p["n"]
    raise FamilyError(f"{spec.family} is not a lattice family")


def family_graph(spec):
    """Build the family graph; returns (graph, directed structure or None)."""
    p = spec.params
    f = spec.family
    if f == "B1":
        g = b1_graph(p["d"], p["m"], p["n"])
    elif f == "Gamma_k":
        g = gamma_graph(p["k"], p["d"], p["m"], p["n"], p.get("p"))
    elif f == "Delta_k":
        g = delta_graph(p["k"], p["d"], p["n"], p["p"])
    elif f == "Lambda_l":
        g = lambda_graph(p["l"], p["d"], p["m"], p["n"], p["q"])
    elif f == "Bouquet_A":
        g = bouquet_graph(p["n"], p["l"], list(p["a"]))
    else:
        raise FamilyError(f"unknown family {f}")
    return g, g.positive


# normalization to a bouquet

def gamma1_script(d):
    """Moves taking Gamma_1 (m = 1) to BS(1,n^2) + (d-1) BS(1,1) + (d-1) BS(n,n)."""
    lines = [f"collapse ~e{d}"]
    lines += [f"slide ~f{j} over ~f1" for j in range(2, d + 1)]
    return "\n".join(lines) + "\n"


def delta_script(k, d, p):
    """Moves taking Delta_k to its one-vertex bouquet.

    Collapse g1 (merging v_k into v_1), then e_{k-1}.1, ..., e_2.1; the
    d edges e_1.j become (1, n^k) loops and d-1 of them are slid to (1, 1).
    """
    _need(d - p >= 1, "script needs at least one g edge")
    lines = ["collapse ~g1"]
    lines += [f"collapse ~e{i}.1" for i in range(k - 1, 1, -1)]
    lines += [f"slide ~e1.{j} over ~e1.1" for j in range(2, d + 1)]
    return "\n".join(lines) + "\n"


def stored_script(name):
    """Text of a move script shipped in gbs/data."""
    return resources.files("gbs").joinpath("data", name).read_text()


def normalization_script(spec):
    p = spec.params
    if spec.family in ("B1", "Gamma_k") and p.get("k", 1) == 1:
        _need(p["m"] == 1, "bouquet normalization of Gamma_1 needs m = 1")
        return gamma1_script(p["d"])
    if spec.family == "Delta_k":
        return delta_script(p["k"], p["d"], p["p"])
    raise FamilyError(f"no normalization script for {spec.family}")


def loop_multiset(g):
    """Sorted unordered label pairs of the loops of a one-vertex graph."""
    return sorted(tuple(sorted((g.label(e), g.label("~" + e)))) for e in g.edges)


def expected_bouquet(spec):
    """The loop multiset the normalization should produce."""
    p = spec.params
    n, d = p["n"], p["d"]
    if spec.family in ("B1", "Gamma_k"):
        out = [(1, n * n)] + [(1, 1)] * (d - 1) + [(n, n)] * (d - 1)
    else:
        k, pp = p["k"], p["p"]
        out = [(pp * n, pp * n), (1, n ** k)] + [(1, 1)] * (d - 1) + [(n, n)] * (d - pp - 1)
        for j in range(2, k):
            out += [(n ** j, n ** j)] * (d - 1)
    return sorted(out)


def normalized_bouquet(spec, script=None):
    """Replay the normalization script and check the resulting loop multiset."""
    g, _ = family_graph(spec)
    g = g.without_positive()
    b = apply_script(g, script or normalization_script(spec))
    _need(len(b.vertices) == 1, "normalization did not reach a single vertex")
    _need(loop_multiset(b) == expected_bouquet(spec), "normalized loop multiset differs from the expected display")
    return b
