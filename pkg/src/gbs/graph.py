"""Labeled graphs (A, lambda) with an edge involution.

Half-edges are opaque strings. Every geometric edge ``e`` has two
half-edges, ``e`` and its reverse ``~e``; ``bar`` swaps them. The label
``label(e)`` is the index of the edge group in the vertex group at
``origin(e)``.
"""

from collections import deque
from dataclasses import dataclass, field


class GraphError(ValueError):
    """Malformed graph or graph file."""


def bar(e):
    """The reverse half-edge."""
    return e[1:] if e.startswith("~") else "~" + e


def base_edge(e):
    return e[1:] if e.startswith("~") else e


class LabeledGraph:
    """A finite labeled graph.

    Built from half-edge data: ``origin`` and ``label`` are dicts keyed by
    half-edge id and must be closed under ``bar``. Instances are treated as
    immutable; moves return new graphs.
    """

    def __init__(self, vertices, origin, label, name=None, positive=None):
        vertices = tuple(sorted(set(vertices)))
        if not vertices:
            raise GraphError("empty graph")
        vset = set(vertices)
        origin = dict(origin)
        label = dict(label)
        if set(origin) != set(label):
            raise GraphError("origin and label maps have different domains")
        for e, v in origin.items():
            if bar(e) not in origin:
                raise GraphError(f"half-edge {e} has no reverse")
            if v not in vset:
                raise GraphError(f"dangling vertex reference {v} (edge {e})")
            lab = label[e]
            if not isinstance(lab, int) or isinstance(lab, bool):
                raise GraphError(f"label of {e} is not an integer")
            if lab == 0:
                raise GraphError(f"zero label on {e}")
        self.vertices = vertices
        self.half_edges = tuple(sorted(origin))
        self.edges = tuple(e for e in self.half_edges if not e.startswith("~"))
        self._origin = origin
        self._label = label
        self.name = name
        star = {v: [] for v in vertices}
        for e in self.half_edges:
            star[origin[e]].append(e)
        self._star = {v: tuple(es) for v, es in star.items()}
        self.positive = None
        if positive is not None:
            self.positive = DirectedStructure(frozenset(positive))
            self.positive.check(self)

    @classmethod
    def from_edges(cls, vertices, edges, name=None, directed=False):
        """Build from geometric edges ``(id, from, to, label_from, label_to[, positive])``.

        With ``directed=True`` the half-edge ``id`` goes into E+ unless the
        optional sixth entry is False (then ``~id`` does).
        """
        origin, label, pos = {}, {}, []
        for item in edges:
            eid, a, b, la, lb = item[:5]
            if eid.startswith("~"):
                raise GraphError(f"edge id may not start with '~': {eid}")
            if eid in origin:
                raise GraphError(f"duplicate id {eid}")
            origin[eid], origin[bar(eid)] = a, b
            label[eid], label[bar(eid)] = la, lb
            if directed:
                fwd = item[5] if len(item) > 5 else True
                pos.append(eid if fwd else bar(eid))
        return cls(vertices, origin, label, name=name, positive=pos if directed else None)

    # basic accessors
    def origin(self, e):
        return self._origin[e]

    def terminus(self, e):
        return self._origin[bar(e)]

    def label(self, e):
        return self._label[e]

    def star(self, v):
        """E_0(v): half-edges starting at v, sorted."""
        return self._star[v]

    def is_loop(self, e):
        return self._origin[e] == self._origin[bar(e)]

    def has_vertex(self, v):
        return v in self._star

    def has_edge(self, e):
        return e in self._origin

    def origins(self):
        return dict(self._origin)

    def labels(self):
        return dict(self._label)

    def geometric(self):
        """Geometric edges as ``(id, from, to, label_from, label_to)``."""
        return [(e, self._origin[e], self.terminus(e), self._label[e], self._label[bar(e)])
                for e in self.edges]

    def num_vertices(self):
        return len(self.vertices)

    def num_edges(self):
        """Number of geometric edges."""
        return len(self.edges)

    def betti(self):
        return len(self.edges) - len(self.vertices) + 1

    def neighbours(self, v):
        return [self.terminus(e) for e in self._star[v]]

    def is_connected(self):
        seen = {self.vertices[0]}
        todo = [self.vertices[0]]
        while todo:
            v = todo.pop()
            for w in self.neighbours(v):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)

    def bfs_tree(self, root=None):
        """Deterministic BFS spanning tree: returns (order, parent_edge).

        parent_edge[v] is the half-edge used to reach v (pointing at v).
        """
        root = self.vertices[0] if root is None else root
        parent = {root: None}
        order = [root]
        q = deque([root])
        while q:
            v = q.popleft()
            for e in self._star[v]:
                w = self.terminus(e)
                if w not in parent:
                    parent[w] = e
                    order.append(w)
                    q.append(w)
        return order, parent

    def tree_path(self, parent, v):
        """Path of half-edges from the BFS root to v."""
        path = []
        while parent[v] is not None:
            e = parent[v]
            path.append(e)
            v = self.origin(e)
        return path[::-1]

    def with_positive(self, positive):
        return LabeledGraph(self.vertices, self._origin, self._label, self.name, positive)

    def without_positive(self):
        return LabeledGraph(self.vertices, self._origin, self._label, self.name)

    def key(self):
        return (self.vertices, tuple(sorted(self._origin.items())), tuple(sorted(self._label.items())))

    def __eq__(self, other):
        return isinstance(other, LabeledGraph) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<LabeledGraph{nm}: {len(self.vertices)} vertices, {len(self.edges)} edges>"


def validate(g):
    """Raise GraphError unless g is connected (the GBS-semantic requirement)."""
    if not g.is_connected():
        raise GraphError("graph is not connected")
    return g


@dataclass(frozen=True)
class DirectedStructure:
    """E+ as a set of half-edges; exactly one of e, ~e belongs to it."""
    positive: frozenset

    def check(self, g):
        for e in g.edges:
            if (e in self.positive) == (bar(e) in self.positive):
                raise GraphError(f"directed structure must contain exactly one of {e}, {bar(e)}")
        extra = set(self.positive) - set(g.half_edges)
        if extra:
            raise GraphError(f"unknown half-edges in directed structure: {sorted(extra)}")

    def out_edges(self, g, v):
        """E+_0(v)."""
        return tuple(e for e in g.star(v) if e in self.positive)

    def in_edges(self, g, v):
        """E-_0(v)."""
        return tuple(e for e in g.star(v) if e not in self.positive)


@dataclass
class LengthFunction:
    """Positive integer lengths on vertices and half-edges, with l(e) = l(~e)."""
    vertex: dict = field(default_factory=dict)
    edge: dict = field(default_factory=dict)

    def __call__(self, x):
        if x in self.vertex:
            return self.vertex[x]
        if x in self.edge:
            return self.edge[x]
        return self.edge[bar(x)]

    def check(self, g):
        for v in g.vertices:
            if self.vertex.get(v, 0) <= 0:
                raise GraphError(f"length of vertex {v} must be positive")
        for e in g.edges:
            a = self.edge.get(e, self.edge.get(bar(e)))
            b = self.edge.get(bar(e), a)
            if a is None or a <= 0 or a != b:
                raise GraphError(f"bad length on edge {e}")


# file format

def _parse(text):
    lines = text.splitlines()
    header = None
    vertices, edges, lengths, pos = [], [], {}, []
    seen = set()
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            if line != "gbsgraph v1":
                raise GraphError(f"line {no}: expected header 'gbsgraph v1'")
            header = line
            continue
        tok = line.split()
        kw = tok[0]
        if kw == "vertex":
            if len(tok) != 2:
                raise GraphError(f"line {no}: syntax error: vertex <id>")
            if tok[1] in seen:
                raise GraphError(f"line {no}: duplicate id {tok[1]}")
            seen.add(tok[1])
            vertices.append(tok[1])
        elif kw == "edge":
            if len(tok) not in (6, 7) or (len(tok) == 7 and tok[6] != "+"):
                raise GraphError(f"line {no}: syntax error: edge <id> <from> <to> <label_from> <label_to> [+]")
            eid = tok[1]
            if eid.startswith("~"):
                raise GraphError(f"line {no}: edge id may not start with '~'")
            if eid in seen:
                raise GraphError(f"line {no}: duplicate id {eid}")
            seen.add(eid)
            try:
                la, lb = int(tok[4]), int(tok[5])
            except ValueError:
                raise GraphError(f"line {no}: labels must be integers") from None
            if la == 0 or lb == 0:
                raise GraphError(f"line {no}: zero label")
            edges.append((eid, tok[2], tok[3], la, lb))
            if len(tok) == 7:
                pos.append(eid)
        elif kw == "length":
            if len(tok) != 3:
                raise GraphError(f"line {no}: syntax error: length <id> <value>")
            try:
                lengths[tok[1]] = int(tok[2])
            except ValueError:
                raise GraphError(f"line {no}: length must be an integer") from None
        else:
            raise GraphError(f"line {no}: unknown keyword {kw!r}")
    if header is None:
        raise GraphError("empty file")
    vs = set(vertices)
    for eid, a, b, _, _ in edges:
        for v in (a, b):
            if v not in vs:
                raise GraphError(f"dangling vertex reference {v} (edge {eid})")
    # once any '+' appears, unmarked lines have their reverse in E+
    directed = bool(pos)
    items = [(e + (e[0] in pos,)) if directed else e for e in edges]
    g = LabeledGraph.from_edges(vertices, items, directed=directed)
    return g, lengths


def parse_graph(text, connected=True):
    """Parse a ``gbsgraph v1`` file. Connectivity is checked unless connected=False."""
    g, _ = _parse(text)
    return validate(g) if connected else g


def parse_annotated_graph(text):
    """Parse a graph file that may carry ``length`` lines (lattice certificates).

    Returns (graph, LengthFunction or None).
    """
    g, lengths = _parse(text)
    validate(g)
    if not lengths:
        return g, None
    lf = LengthFunction()
    for k, val in lengths.items():
        if g.has_vertex(k):
            lf.vertex[k] = val
        elif g.has_edge(k):
            lf.edge[base_edge(k)] = val
        else:
            raise GraphError(f"length for unknown id {k}")
    return g, lf


def serialize_graph(g, lengths=None):
    """Canonical text: vertices sorted, then edges sorted by id.

    When g has a directed structure, each edge line is written from its
    positive half-edge with a trailing ``+`` (so ``e`` and ``~e`` may swap
    names when E+ contained ``~e``).
    """
    out = ["gbsgraph v1"]
    for v in g.vertices:
        out.append(f"vertex {v}")
    for e in g.edges:
        a, b, la, lb = g.origin(e), g.terminus(e), g.label(e), g.label(bar(e))
        if g.positive is None:
            out.append(f"edge {e} {a} {b} {la} {lb}")
        elif e in g.positive.positive:
            out.append(f"edge {e} {a} {b} {la} {lb} +")
        else:
            # written from the positive side; e and ~e swap names on reparse
            out.append(f"edge {e} {b} {a} {lb} {la} +")
    if lengths is not None:
        for v in g.vertices:
            out.append(f"length {v} {lengths.vertex[v]}")
        for e in g.edges:
            out.append(f"length {e} {lengths(e)}")
    return "\n".join(out) + "\n"


# isomorphism

def _pair_profile(g, u, w):
    """Sorted label pairs of half-edges from u to w (loops included when u == w)."""
    return sorted((g.label(e), g.label(bar(e))) for e in g.star(u) if g.terminus(e) == w)


def _vertex_signature(g, v):
    return (len(g.star(v)),
            tuple(sorted(g.label(e) for e in g.star(v))),
            tuple(_pair_profile(g, v, v)))


def _edge_map(g1, g2, vmap):
    """Given a vertex bijection compatible with all pair profiles, match half-edges."""
    emap = {}
    for u in g1.vertices:
        for w in g1.vertices:
            if w < u:
                continue
            e1 = [e for e in g1.star(u) if g1.terminus(e) == w]
            e2 = [e for e in g2.star(vmap[u]) if g2.terminus(e) == vmap[w]]
            if u == w:
                # match geometric loops by unordered label pair
                loops1 = [e for e in e1 if not e.startswith("~")]
                loops2 = [e for e in e2 if not e.startswith("~")]
                key = lambda g, e: tuple(sorted((g.label(e), g.label(bar(e)))))
                loops1.sort(key=lambda e: (key(g1, e), e))
                loops2.sort(key=lambda e: (key(g2, e), e))
                for a, b in zip(loops1, loops2):
                    if (g1.label(a), g1.label(bar(a))) != (g2.label(b), g2.label(bar(b))):
                        b = bar(b)
                    emap[a], emap[bar(a)] = b, bar(b)
            else:
                k = lambda g, e: (g.label(e), g.label(bar(e)), e)
                e1.sort(key=lambda e: k(g1, e))
                e2.sort(key=lambda e: k(g2, e))
                for a, b in zip(e1, e2):
                    emap[a], emap[bar(a)] = b, bar(b)
    return emap


def graph_isomorphic(g1, g2):
    """Return (vmap, emap) for a label-preserving isomorphism g1 -> g2, or None.

    Backtracking over vertex bijections pruned by local signatures and
    the multiset of label pairs between already-matched vertices.
    """
    if (len(g1.vertices), len(g1.half_edges)) != (len(g2.vertices), len(g2.half_edges)):
        return None
    sig1 = {v: _vertex_signature(g1, v) for v in g1.vertices}
    sig2 = {v: _vertex_signature(g2, v) for v in g2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return None
    # most constrained first: rare signatures, then high degree
    counts = {}
    for s in sig1.values():
        counts[s] = counts.get(s, 0) + 1
    order = sorted(g1.vertices, key=lambda v: (counts[sig1[v]], -len(g1.star(v)), v))
    prof1 = {(u, w): _pair_profile(g1, u, w) for u in g1.vertices for w in g1.vertices}
    vmap, used = {}, set()

    def extend(i):
        if i == len(order):
            return True
        u = order[i]
        for x in g2.vertices:
            if x in used or sig2[x] != sig1[u]:
                continue
            ok = True
            for w, y in vmap.items():
                if prof1[(u, w)] != _pair_profile(g2, x, y) or prof1[(w, u)] != _pair_profile(g2, y, x):
                    ok = False
                    break
            if not ok:
                continue
            vmap[u] = x
            used.add(x)
            if extend(i + 1):
                return True
            del vmap[u]
            used.discard(x)
        return False

    if not extend(0):
        return None
    return dict(vmap), _edge_map(g1, g2, vmap)


def check_isomorphism(g1, g2, vmap, emap):
    """Independent check that (vmap, emap) is a labeled-graph isomorphism."""
    if sorted(vmap) != list(g1.vertices) or sorted(vmap.values()) != list(g2.vertices):
        return False
    if sorted(emap) != list(g1.half_edges) or sorted(emap.values()) != list(g2.half_edges):
        return False
    for e in g1.half_edges:
        f = emap[e]
        if emap[bar(e)] != bar(f):
            return False
        if vmap[g1.origin(e)] != g2.origin(f) or g1.label(e) != g2.label(f):
            return False
    return True


def relabel(g, vmap, emap_base=None, name=None):
    """Rename vertices (and optionally geometric edges) of g."""
    emap_base = emap_base or {}
    ren = lambda e: (("~" + emap_base.get(base_edge(e), base_edge(e))) if e.startswith("~")
                     else emap_base.get(e, e))
    origin = {ren(e): vmap.get(g.origin(e), g.origin(e)) for e in g.half_edges}
    label = {ren(e): g.label(e) for e in g.half_edges}
    pos = None if g.positive is None else [ren(e) for e in g.positive.positive]
    return LabeledGraph([vmap.get(v, v) for v in g.vertices], origin, label, name or g.name, pos)
