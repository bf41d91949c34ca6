"""Lattice conditions for labeled graphs acting on the tree X_{dm,dn}.

Two checks: the direct sufficient condition on an oriented graph, and
a search for an orientation plus length function with equal-sum
partitions at every vertex. Counting uses |label| throughout.
"""

import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .arith import lcm
from .graph import DirectedStructure, GraphError, LengthFunction, bar, base_edge
from .modular import modular_generators


class LatticeTimeout(RuntimeError):
    pass


def _need_params(d, m, n):
    if d < 1 or m < 1 or n < 1:
        raise ValueError("d, m, n must be positive")
    if gcd(m, n) != 1:
        raise ValueError(f"gcd(m, n) = {gcd(m, n)} != 1")


@dataclass
class LatticeCheck:
    ok: bool
    failures: list = field(default_factory=list)   # (where, message)

    def __bool__(self):
        return self.ok


def _positive(g, directed):
    if directed is None:
        directed = g.positive
    if directed is None:
        raise GraphError("graph has no directed structure")
    pos = directed.positive if isinstance(directed, DirectedStructure) else frozenset(directed)
    for e in g.edges:
        if (e in pos) == (bar(e) in pos):
            raise GraphError(f"directed structure must contain exactly one of {e}, ~{e}")
    return pos


def _vertex_sums(g, pos, d, m, n):
    out = []
    for v in g.vertices:
        sp = sum(abs(g.label(e)) for e in g.star(v) if e in pos)
        sm = sum(abs(g.label(e)) for e in g.star(v) if e not in pos)
        if sp != d * m:
            out.append((v, f"sum over E+_0({v}) is {sp}, expected dm = {d * m}"))
        if sm != d * n:
            out.append((v, f"sum over E-_0({v}) is {sm}, expected dn = {d * n}"))
    return out


def _edge_ok(g, e, m, n):
    a, b = abs(g.label(e)), abs(g.label(bar(e)))
    k = gcd(a, b)
    return a // k == m and b // k == n


def verify_lattice_sufficient(g, directed, d, m, n):
    """Vertex sums dm/dn over E+/E- and, for e in E+, reduced labels (m, n)."""
    _need_params(d, m, n)
    pos = _positive(g, directed)
    fails = _vertex_sums(g, pos, d, m, n)
    for e in sorted(pos):
        if not _edge_ok(g, e, m, n):
            fails.append((e, f"labels ({g.label(e)}, {g.label(bar(e))}) do not reduce to ({m}, {n})"))
    return LatticeCheck(not fails, fails)


@dataclass
class LatticeCertificate:
    directed: DirectedStructure
    lengths: LengthFunction
    params: tuple
    partitions: dict       # vertex -> (parts of E+_0(v), parts of E-_0(v))

    def k0(self, v):
        return gcd(self.lengths.vertex[v], self.params[1])

    def k1(self, v):
        return gcd(self.lengths.vertex[v], self.params[2])


def strongly_connected(g, pos):
    """Is the digraph (vertices, E+) strongly connected?"""
    def reach(start, forward):
        seen, todo = {start}, [start]
        while todo:
            v = todo.pop()
            for e in g.star(v):
                if (e in pos) == forward and g.terminus(e) not in seen:
                    seen.add(g.terminus(e))
                    todo.append(g.terminus(e))
        return seen
    v0 = g.vertices[0]
    allv = set(g.vertices)
    return reach(v0, True) == allv and reach(v0, False) == allv


def _deadline(max_seconds):
    if max_seconds is None:
        env = os.environ.get("GBS_MAX_SECONDS")
        max_seconds = float(env) if env else None
    return None if max_seconds is None else time.monotonic() + max_seconds


def _tick(deadline):
    if deadline is not None and time.monotonic() > deadline:
        raise LatticeTimeout("search exceeded the configured time bound")


def _orientations(g, d, m, n, deadline):
    """Orientations satisfying the vertex sums and per-edge label condition, in deterministic order."""
    edges = list(g.edges)
    opts = []
    for e in edges:
        o = [h for h in (e, bar(e)) if _edge_ok(g, h, m, n)]
        opts.append(o)
    # remaining capacity per vertex
    cap_p = {v: d * m for v in g.vertices}
    cap_m = {v: d * n for v in g.vertices}
    chosen = []

    def rec(i):
        _tick(deadline)
        if i == len(edges):
            if all(c == 0 for c in cap_p.values()) and all(c == 0 for c in cap_m.values()):
                yield frozenset(chosen)
            return
        for h in opts[i]:
            a, b = abs(g.label(h)), abs(g.label(bar(h)))
            u, w = g.origin(h), g.terminus(h)
            cap_p[u] -= a
            cap_m[w] -= b
            if cap_p[u] >= 0 and cap_m[w] >= 0:
                chosen.append(h)
                yield from rec(i + 1)
                chosen.pop()
            cap_p[u] += a
            cap_m[w] += b

    yield from rec(0)


def solve_lengths(g, pos, m, n):
    """Minimal positive integer lengths with l(o e)|l(e)| = m l(e), l(t e)|l(~e)| = n l(e) on E+.

    Returns None if the multiplicative constraints are inconsistent.
    """
    def step(h):
        # ratio l(t h) / l(o h) along half-edge h
        e = h if h in pos else bar(h)
        r = Fraction(n * abs(g.label(e)), m * abs(g.label(bar(e))))
        return r if h in pos else 1 / r
    order, parent = g.bfs_tree()
    lv = {order[0]: Fraction(1)}
    for v in order[1:]:
        h = parent[v]
        lv[v] = lv[g.origin(h)] * step(h)
    for h in g.half_edges:
        if lv[g.origin(h)] * step(h) != lv[g.terminus(h)]:
            return None
    le = {}
    for e in pos:
        le[base_edge(e)] = lv[g.origin(e)] * abs(g.label(e)) / m
    vals = list(lv.values()) + list(le.values())
    L = 1
    for x in vals:
        L = lcm(L, x.denominator)
    ints = [int(x * L) for x in vals]
    G = 0
    for x in ints:
        G = gcd(G, x)
    return LengthFunction({v: int(x * L) // G for v, x in lv.items()},
                          {e: int(x * L) // G for e, x in le.items()})


def equal_sum_partition(items, k, deadline=None):
    """Partition [(key, weight)] into k blocks of equal total weight, or None."""
    total = sum(w for _, w in items)
    if k < 1 or total % k:
        return None
    target = total // k
    items = sorted(items, key=lambda t: (-t[1], t[0]))
    if items and items[0][1] > target:
        return None
    blocks = [[] for _ in range(k)]
    sums = [0] * k

    def rec(i):
        _tick(deadline)
        if i == len(items):
            return True
        key, w = items[i]
        tried = set()
        for b in range(k):
            if sums[b] + w > target or sums[b] in tried:
                continue
            tried.add(sums[b])
            blocks[b].append(key)
            sums[b] += w
            if rec(i + 1):
                return True
            sums[b] -= w
            blocks[b].pop()
        return False

    if not rec(0):
        return None
    return [sorted(b) for b in blocks]


def _partitions(g, pos, lengths, m, n, deadline):
    parts = {}
    for v in g.vertices:
        out = [(e, lengths(e)) for e in g.star(v) if e in pos]
        inn = [(e, lengths(e)) for e in g.star(v) if e not in pos]
        p0 = equal_sum_partition(out, gcd(lengths.vertex[v], m), deadline)
        p1 = equal_sum_partition(inn, gcd(lengths.vertex[v], n), deadline)
        if p0 is None or p1 is None:
            return None
        parts[v] = (p0, p1)
    return parts


def search_lattice_structure(g, d, m, n, max_seconds=None):
    """Orientation, length function and partitions certifying a compact structure, or None."""
    _need_params(d, m, n)
    if m == n:
        raise ValueError("m = n is not supported (the criterion needs m != n)")
    deadline = _deadline(max_seconds)
    for pos in _orientations(g, d, m, n, deadline):
        lengths = solve_lengths(g, pos, m, n)
        if lengths is None:
            continue
        parts = _partitions(g, pos, lengths, m, n, deadline)
        if parts is None:
            continue
        assert strongly_connected(g, pos), "certified orientation is not strongly connected"
        return LatticeCertificate(DirectedStructure(pos), lengths, (d, m, n), parts)
    return None


def check_certificate(g, cert):
    """Re-verify a certificate from scratch; returns a list of failure messages."""
    d, m, n = cert.params
    pos = _positive(g, cert.directed)
    l = cert.lengths
    fails = [msg for _, msg in _vertex_sums(g, pos, d, m, n)]
    try:
        l.check(g)
    except GraphError as exc:
        fails.append(str(exc))
        return fails
    for e in sorted(pos):
        if l.vertex[g.origin(e)] * abs(g.label(e)) != m * l(e):
            fails.append(f"l(o {e})|l({e})| != m l({e})")
        if l.vertex[g.terminus(e)] * abs(g.label(bar(e))) != n * l(e):
            fails.append(f"l(t {e})|l(~{e})| != n l({e})")
    for v in g.vertices:
        p0, p1 = cert.partitions.get(v, (None, None))
        for parts, want, k in ((p0, {e for e in g.star(v) if e in pos}, cert.k0(v)),
                               (p1, {e for e in g.star(v) if e not in pos}, cert.k1(v))):
            if parts is None:
                fails.append(f"missing partition at {v}")
                continue
            flat = [e for b in parts for e in b]
            if sorted(flat) != sorted(want) or len(parts) != k:
                fails.append(f"partition at {v} does not split its edges into {k} blocks")
                continue
            sums = {sum(l(e) for e in b) for b in parts}
            if len(sums) != 1:
                fails.append(f"unequal block sums at {v}: {sorted(sums)}")
    if not strongly_connected(g, pos):
        fails.append("orientation is not strongly connected")
    return fails


@dataclass
class StructureReport:
    skipped: bool
    alpha: dict = field(default_factory=dict)
    beta: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)


def _small_divisor(x, d):
    return any(x % k == 0 for k in range(2, d + 1))


def assert_structure_lemma(g, cert, d, m, n):
    """|l(e)| = alpha m and |l(~e)| = beta n with 1 <= alpha, beta <= d on E+,
    and every modular generator is +-(m/n)^k.

    Only meaningful when m and n have no divisor in 2..d; otherwise the
    report is marked skipped.
    """
    if _small_divisor(m, d) or _small_divisor(n, d):
        return StructureReport(True, diagnostics=["hypothesis fails: m or n has a divisor <= d; check skipped"])
    rep = StructureReport(False)
    pos = _positive(g, cert.directed)
    for e in sorted(pos):
        a, b = abs(g.label(e)), abs(g.label(bar(e)))
        if a % m or b % n:
            rep.diagnostics.append(f"{e}: labels ({a}, {b}) not multiples of ({m}, {n})")
            continue
        rep.alpha[e], rep.beta[e] = a // m, b // n
        if not (1 <= a // m <= d and 1 <= b // n <= d):
            rep.diagnostics.append(f"{e}: alpha={a // m}, beta={b // n} outside [1, {d}]")
    r = Fraction(m, n)
    for q in modular_generators(g):
        q = abs(q)
        ok = q == 1
        if not ok and m != n:
            x, k = (q, 0) if q > 1 else (1 / q, 0)
            base = r if r > 1 else 1 / r
            while x > 1 and (x / base).denominator <= x.denominator and k < 200:
                x /= base
                k += 1
            ok = x == 1
        if not ok:
            rep.diagnostics.append(f"modular generator {q} is not a power of {m}/{n}")
    return rep
