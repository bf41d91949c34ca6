"""Random graph generators and brute-force oracles shared by the tests."""

import random
from itertools import combinations

from gbs.graph import LabeledGraph, bar
from gbs.profile import brute_force_index


def random_graph(rng, max_vertices=4, max_extra=3, labels=(1, 2, 3, 4, 6), signs=False):
    """Connected graph: random spanning tree plus a few extra edges (loops allowed)."""
    nv = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(nv)]
    edges = []

    def lab():
        x = rng.choice(labels)
        return -x if signs and rng.random() < 0.2 else x

    for i in range(1, nv):
        edges.append((f"t{i}", vs[rng.randrange(i)], vs[i], lab(), lab()))
    for j in range(rng.randint(0 if nv > 1 else 1, max_extra)):
        edges.append((f"x{j}", rng.choice(vs), rng.choice(vs), lab(), lab()))
    return LabeledGraph.from_edges(vs, edges)


def random_2_unimodular(rng, max_vertices=5, max_label=24):
    """Random connected graph whose 2-adic modulus vanishes on every cycle.

    Pick heights h(v) and for an edge a -> b use labels 2^s x, 2^t y with
    s - t = h(b) - h(a) and x, y odd.
    """
    while True:
        nv = rng.randint(1, max_vertices)
        vs = [f"v{i}" for i in range(nv)]
        h = {v: rng.randint(0, 3) for v in vs}
        pairs = [(vs[rng.randrange(i)], vs[i]) for i in range(1, nv)]
        pairs += [(rng.choice(vs), rng.choice(vs)) for _ in range(rng.randint(0 if nv > 1 else 1, 3))]
        edges = []
        ok = True
        for k, (a, b) in enumerate(pairs):
            d = h[b] - h[a]
            opts = [(s, s - d) for s in range(0, 5) if s - d >= 0]
            choices = []
            for s, t in opts:
                for x in (1, 3, 5):
                    for y in (1, 3, 5):
                        if 2 ** s * x <= max_label and 2 ** t * y <= max_label:
                            choices.append((2 ** s * x, 2 ** t * y))
            if not choices:
                ok = False
                break
            la, lb = rng.choice(choices)
            edges.append((f"e{k}", a, b, la, lb))
        if ok:
            return LabeledGraph.from_edges(vs, edges)


def random_regular(rng, d, nv, m, n):
    """Connected directed graph with d outgoing and d incoming E+ edges per vertex, labels (m, n)."""
    vs = [f"u{i}" for i in range(nv)]
    while True:
        edges = []
        for c in range(d):
            perm = vs[:]
            rng.shuffle(perm)
            edges += [(f"c{c}.{i}", vs[i], perm[i], m, n, True) for i in range(nv)]
        g = LabeledGraph.from_edges(vs, edges, directed=True)
        if g.is_connected():
            return g


# plateau oracle

def brute_plateaus(g, primes=(2, 3)):
    """All proper p-plateaus by enumerating vertex and edge subsets; keys (sorted vertices, p)."""
    found = []
    vs = list(g.vertices)
    geo = list(g.edges)
    for r in range(1, len(vs) + 1):
        for S in combinations(vs, r):
            S = set(S)
            inside = [e for e in geo if g.origin(e) in S and g.terminus(e) in S]
            for k in range(len(inside) + 1):
                for F in combinations(inside, k):
                    half = set(F) | {bar(e) for e in F}
                    if not _connected(g, S, half):
                        continue
                    if len(S) == len(vs) and len(half) == len(g.half_edges):
                        continue
                    for p in primes:
                        if all((g.label(e) % p == 0) != (e in half) for v in S for e in g.star(v)):
                            found.append((sorted(S), p))
    return found


def _connected(g, S, half):
    start = min(S)
    seen, todo = {start}, [start]
    while todo:
        v = todo.pop()
        for e in g.star(v):
            if e in half and g.terminus(e) not in seen:
                seen.add(g.terminus(e))
                todo.append(g.terminus(e))
    return seen == S


def small_graphs(labels=(1, 2, 3, 4)):
    """Every connected graph on <= 3 vertices with few edges, all label pairs from ``labels``.

    Shapes: 1 vertex with 1-2 loops; 2 vertices with 1-3 edges; 3 vertices with 2-3 edges.
    Edge multisets are taken up to nothing (plain enumeration), so some graphs repeat.
    """
    from itertools import combinations_with_replacement, product
    for nv, sizes in ((1, (1, 2)), (2, (1, 2, 3)), (3, (2, 3))):
        vs = [f"v{i}" for i in range(nv)]
        slots = [(a, b) for i, a in enumerate(vs) for b in vs[i:]]
        for size in sizes:
            for shape in combinations_with_replacement(slots, size):
                touched = {x for ab in shape for x in ab}
                if touched != set(vs):
                    continue
                for labs in product(labels, repeat=2 * size):
                    edges = [(f"e{k}", a, b, labs[2 * k], labs[2 * k + 1]) for k, (a, b) in enumerate(shape)]
                    g = LabeledGraph.from_edges(vs, edges)
                    if g.is_connected():
                        yield g


# profile oracle

def type_profile(g, base, max_len):
    """Indices of closed admissible paths at base with |modulus| 1, over label types.

    Parallel edges with the same endpoints and labels collapse to one type
    with a multiplicity; reversing along type t is allowed when the far
    label is >= 2 or another edge of the type exists. Indices come from
    the brute-force stabilizer search.
    """
    types = {}
    for e in g.half_edges:
        key = (g.origin(e), g.terminus(e), g.label(e), g.label(bar(e)))
        types.setdefault(key, []).append(e)
    out = set()

    def rec(v, last, labs, length):
        if length and v == base:
            N, M = brute_force_index(labs)
            if N == M:
                out.add(N)
        if length == max_len:
            return
        for key, mult in types.items():
            if key[0] != v:
                continue
            if last is not None and key == (last[1], last[0], last[3], last[2]):
                if abs(key[2]) < 2 and len(mult) < 2:
                    continue
            rec(key[1], key, labs + [(key[2], key[3])], length + 1)

    rec(base, None, [], 0)
    return out


def seeded(seed=0):
    return random.Random(seed)
