"""p-plateaus and the proper-plateau search."""

from dataclasses import dataclass

from .arith import factorize, is_prime
from .graph import GraphError, bar


@dataclass(frozen=True)
class Plateau:
    prime: int
    vertices: frozenset
    edges: frozenset

    def __str__(self):
        es = sorted(e for e in self.edges if not e.startswith("~"))
        return f"p={self.prime} vertices={sorted(self.vertices)} edges={es}"


def _check_sub(g, vertices, edges):
    vertices, edges = set(vertices), set(edges)
    if not vertices:
        raise GraphError("empty subgraph")
    for e in edges:
        if not g.has_edge(e):
            raise GraphError(f"unknown half-edge {e}")
        if bar(e) not in edges:
            raise GraphError("subgraph edge set is not closed under the involution")
        if g.origin(e) not in vertices:
            raise GraphError(f"edge {e} leaves the subgraph vertex set")
    for v in vertices:
        if not g.has_vertex(v):
            raise GraphError(f"unknown vertex {v}")
    # connectivity inside the subgraph
    start = min(vertices)
    seen, todo = {start}, [start]
    while todo:
        v = todo.pop()
        for e in g.star(v):
            if e in edges and g.terminus(e) not in seen:
                seen.add(g.terminus(e))
                todo.append(g.terminus(e))
    if seen != vertices:
        raise GraphError("subgraph is not connected")
    return vertices, edges


def is_p_plateau(g, vertices, edges, p):
    """For every e at a subgraph vertex: p | label(e) iff e is not a subgraph edge."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    vertices, edges = _check_sub(g, vertices, edges)
    for v in vertices:
        for e in g.star(v):
            if (g.label(e) % p == 0) == (e in edges):
                return False
    return True


def candidate_primes(g):
    ps = set()
    for e in g.half_edges:
        if abs(g.label(e)) > 1:
            ps |= set(factorize(g.label(e)))
    return sorted(ps)


def p_plateaus(g, p):
    """All p-plateaus of g.

    A p-plateau only uses edges with both labels prime to p and must
    contain every such edge at its vertices, so it is a whole component
    of that subgraph; it remains to test the leaving half-edges.
    """
    coprime = {e for e in g.half_edges if g.label(e) % p and g.label(bar(e)) % p}
    seen, out = set(), []
    for v0 in g.vertices:
        if v0 in seen:
            continue
        comp, todo = {v0}, [v0]
        while todo:
            v = todo.pop()
            for e in g.star(v):
                if e in coprime and g.terminus(e) not in comp:
                    comp.add(g.terminus(e))
                    todo.append(g.terminus(e))
        seen |= comp
        cedges = {e for e in coprime if g.origin(e) in comp}
        if all(g.label(e) % p == 0 for v in comp for e in g.star(v) if e not in cedges):
            out.append(Plateau(p, frozenset(comp), frozenset(cedges)))
    return out


def find_proper_plateau(g):
    """A proper plateau (not all of g) with lexicographically least vertex set, or None."""
    best = None
    for p in candidate_primes(g):
        for P in p_plateaus(g, p):
            if len(P.vertices) == len(g.vertices) and len(P.edges) == len(g.half_edges):
                continue
            k = (sorted(P.vertices), p)
            if best is None or k < best[0]:
                best = (k, P)
    return best[1] if best else None
