"""The modular homomorphism q, p-adic valuations, heights and levels.

Values of q are ``fractions.Fraction`` instances (always reduced, with a
positive denominator). Path moduli keep their sign; valuations, heights
and levels work with |label|.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .arith import factorize, hermite_rows, is_prime, rational_valuation, valuation
from .graph import GraphError, bar


def path_modulus(g, path):
    """prod label(e_i) / label(~e_i) over a composable path."""
    q = Fraction(1)
    prev = None
    for e in path:
        if prev is not None and g.terminus(prev) != g.origin(e):
            raise GraphError(f"path not composable at {prev} -> {e}")
        q *= Fraction(g.label(e), g.label(bar(e)))
        prev = e
    return q


def fundamental_cycles(g):
    """One closed path at the least vertex per chord of the BFS spanning tree."""
    order, parent = g.bfs_tree()
    if len(order) != len(g.vertices):
        raise GraphError("graph is not connected")
    tree = {e for e in parent.values() if e is not None}
    tree |= {bar(e) for e in tree}
    cycles = []
    for e in g.edges:
        if e in tree:
            continue
        to_start = g.tree_path(parent, g.origin(e))
        back = [bar(x) for x in reversed(g.tree_path(parent, g.terminus(e)))]
        cycles.append(to_start + [e] + back)
    return cycles


def modular_generators(g):
    return [path_modulus(g, c) for c in fundamental_cycles(g)]


@dataclass(frozen=True)
class ModularSubgroup:
    """A finitely generated subgroup of Q*.

    ``primes`` index the exponent columns; ``rows`` is the Hermite form of
    the lattice of (exponents | sign) vectors modulo (0, ..., 0 | 2). The
    last column is the sign bit, so -1 is in the group iff the final row is
    (0, ..., 0 | 1).
    """
    generators: tuple
    primes: tuple
    rows: tuple

    @property
    def canonical(self):
        return (self.primes, self.rows)

    def __eq__(self, other):
        return isinstance(other, ModularSubgroup) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def has_minus_one(self):
        return bool(self.rows) and self.rows[-1] == (0,) * len(self.primes) + (1,)

    def basis(self):
        """Canonical generators as Fractions (sign included)."""
        out = []
        for r in self.rows:
            q = Fraction(-1 if r[-1] % 2 else 1)
            for p, e in zip(self.primes, r[:-1]):
                q *= Fraction(p) ** e
            if r[:-1] == (0,) * len(self.primes) and r[-1] == 2:
                continue
            out.append(q)
        return out

    def rank(self):
        return sum(1 for r in self.rows if any(r[:-1]))

    def exponent_rows(self):
        return [r[:-1] for r in self.rows if any(r[:-1])]

    def contains(self, x):
        x = Fraction(x)
        return subgroup_canonical(list(self.generators) + [x]) == self

    def __str__(self):
        b = self.basis()
        return "<" + ", ".join(str(q) for q in b) + ">" if b else "<1>"


def subgroup_canonical(gens):
    gens = [Fraction(q) for q in gens]
    if any(q == 0 for q in gens):
        raise ValueError("zero is not in Q*")
    primes = set()
    for q in gens:
        primes |= set(factorize(q.numerator)) if abs(q.numerator) > 1 else set()
        primes |= set(factorize(q.denominator)) if q.denominator > 1 else set()
    primes = tuple(sorted(primes))
    vecs = [[rational_valuation(q, p) for p in primes] + [1 if q < 0 else 0] for q in gens]
    vecs.append([0] * len(primes) + [2])
    rows = hermite_rows(vecs)
    # drop prime columns that vanish on the whole lattice
    keep = [i for i in range(len(primes)) if any(r[i] for r in rows)]
    primes2 = tuple(primes[i] for i in keep)
    rows2 = hermite_rows([[r[i] for i in keep] + [r[-1]] for r in rows])
    return ModularSubgroup(tuple(gens), primes2, tuple(tuple(r) for r in rows2))


def modular_subgroup(g):
    return subgroup_canonical(modular_generators(g))


def is_p_unimodular(g, p):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return all(rational_valuation(q, p) == 0 for q in modular_generators(g))


def is_unimodular(g):
    return all(abs(q) == 1 for q in modular_generators(g))


def intersects_integers_trivially(sub):
    """True iff the subgroup meets Z only in {1}.

    An element other than 1 is an integer iff it is -1 or its exponent
    vector is nonzero and nonnegative. Rank <= 1 is decided directly;
    higher rank uses an LP over the rational span of the lattice.
    """
    if sub.has_minus_one():
        return False
    rows = sub.exponent_rows()
    if not rows:
        return True
    if len(rows) == 1:
        r = rows[0]
        return not (all(x >= 0 for x in r) or all(x <= 0 for x in r))
    import numpy as np
    from scipy.optimize import linprog
    B = np.array(rows, dtype=float).T
    # find c with B c >= 0 componentwise and sum(B c) = 1
    k = B.shape[1]
    res = linprog(np.zeros(k), A_ub=-B, b_ub=np.zeros(B.shape[0]),
                  A_eq=B.sum(axis=0, keepdims=True), b_eq=[1.0],
                  bounds=[(None, None)] * k, method="highs")
    return res.status != 0


def height_map(g, p, base=None):
    """Integer potential h with h(t(e)) - h(o(e)) = nu_p(label e) - nu_p(label ~e)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    base = g.vertices[0] if base is None else base
    h = _potential(g, base, lambda e: valuation(g.label(e), p) - valuation(g.label(bar(e)), p))
    if h is None:
        raise GraphError(f"graph is not {p}-unimodular")
    return h


def _potential(g, base, step, modulus=None):
    h = {base: 0}
    q = deque([base])
    while q:
        v = q.popleft()
        for e in g.star(v):
            w = g.terminus(e)
            if w not in h:
                h[w] = h[v] + step(e)
                if modulus:
                    h[w] %= modulus
                q.append(w)
    if len(h) != len(g.vertices):
        raise GraphError("graph is not connected")
    for e in g.half_edges:
        d = h[g.origin(e)] + step(e) - h[g.terminus(e)]
        if (d % modulus if modulus else d) != 0:
            return None
    return h


def levels(g, n, l, base=None):
    """Vertex and edge levels mod l with respect to ``base``.

    Every label must be +-n**i. Returns (vertex_levels, edge_levels) with
    edge_levels keyed by half-edge; e and ~e always agree.
    """
    if n < 2 or l < 1:
        raise ValueError("need n >= 2 and l >= 1")
    base = g.vertices[0] if base is None else base
    nu = {}
    for e in g.half_edges:
        x = abs(g.label(e))
        i = valuation(x, n)
        if n ** i != x:
            raise GraphError(f"label {g.label(e)} of {e} is not a power of {n}")
        nu[e] = i
    vl = _potential(g, base, lambda e: nu[e] - nu[bar(e)], modulus=l)
    if vl is None:
        raise GraphError(f"levels mod {l} are inconsistent (modular image not in <n^{l}>)")
    el = {e: (nu[e] + vl[g.origin(e)]) % l for e in g.half_edges}
    for e in g.half_edges:
        assert el[e] == el[bar(e)]
    return vl, el
