"""Elementary deformation moves: collapse, expansion, slide, induction.

Every move returns a new graph; the input is never modified. The
directed structure, if any, is dropped by moves.
"""

from .graph import LabeledGraph, bar, base_edge


class MoveError(ValueError):
    pass


def _check_edge(g, e):
    if not g.has_edge(e):
        raise MoveError(f"no half-edge {e}")


def _rebuild(g, vertices, origin, label):
    return LabeledGraph(vertices, origin, label, name=g.name)


def collapse(g, e):
    """Collapse the non-loop edge e whose far end carries label +-1.

    The terminal vertex of e is merged into its origin and every other
    half-edge there has its label multiplied by label(e) * label(~e).
    """
    _check_edge(g, e)
    if g.is_loop(e):
        raise MoveError(f"cannot collapse loop {e}")
    if abs(g.label(bar(e))) != 1:
        raise MoveError(f"|label({bar(e)})| must be 1 to collapse {e}")
    u, w = g.origin(e), g.terminus(e)
    factor = g.label(e) * g.label(bar(e))
    origin, label = g.origins(), g.labels()
    for x in (e, bar(e)):
        del origin[x], label[x]
    for f in g.star(w):
        if f == bar(e):
            continue
        origin[f] = u
        label[f] = factor * label[f]
    return _rebuild(g, [v for v in g.vertices if v != w], origin, label)


def _fresh(existing, stem):
    if stem not in existing:
        return stem
    i = 1
    while f"{stem}{i}" in existing:
        i += 1
    return f"{stem}{i}"


def expand(g, v, n, moved=(), new_vertex=None, new_edge=None):
    """Expansion at v: a new edge (n at v, 1 at w) with ``moved`` re-rooted at w.

    Each moved half-edge f gets label(f)/n. When only one end of a loop is
    listed, only that end moves. Returns the new graph; the new vertex and
    edge ids default to fresh names derived from v.
    """
    if not g.has_vertex(v):
        raise MoveError(f"no vertex {v}")
    if n < 1:
        raise MoveError("expansion index must be >= 1")
    moved = list(dict.fromkeys(moved))
    for f in moved:
        _check_edge(g, f)
        if g.origin(f) != v:
            raise MoveError(f"{f} does not start at {v}")
        if g.label(f) % n:
            raise MoveError(f"divisibility failure: {n} does not divide label({f})={g.label(f)}")
    w = new_vertex or _fresh(set(g.vertices), f"{v}'")
    if g.has_vertex(w):
        raise MoveError(f"vertex {w} already exists")
    x = new_edge or _fresh({base_edge(e) for e in g.half_edges}, f"x{v}")
    if x.startswith("~") or g.has_edge(x):
        raise MoveError(f"bad new edge id {x}")
    origin, label = g.origins(), g.labels()
    for f in moved:
        origin[f] = w
        label[f] = label[f] // n
    origin[x], origin[bar(x)] = v, w
    label[x], label[bar(x)] = n, 1
    return _rebuild(g, list(g.vertices) + [w], origin, label)


def slide(g, mover, along):
    """Slide the end ``mover`` over ``along``.

    Both start at the same vertex and label(along) divides label(mover)
    = l*label(along). The mover is re-rooted at the far end of ``along``
    with label l*label(~along).
    """
    _check_edge(g, mover)
    _check_edge(g, along)
    if mover in (along, bar(along)):
        raise MoveError("cannot slide an edge along itself")
    if g.origin(mover) != g.origin(along):
        raise MoveError(f"{mover} and {along} start at different vertices")
    q, r = divmod(g.label(mover), g.label(along))
    if r:
        raise MoveError(f"divisibility failure: label({along}) does not divide label({mover})")
    origin, label = g.origins(), g.labels()
    origin[mover] = g.terminus(along)
    label[mover] = q * g.label(bar(along))
    return _rebuild(g, g.vertices, origin, label)


def induction(g, loop, l):
    """Induction on a loop labeled (+-1, k) with l | k: other labels at v get multiplied by l."""
    _check_edge(g, loop)
    if not g.is_loop(loop):
        raise MoveError(f"{loop} is not a loop")
    if abs(g.label(loop)) != 1:
        raise MoveError(f"label({loop}) must be +-1")
    if l < 1 or g.label(bar(loop)) % l:
        raise MoveError(f"{l} does not divide label({bar(loop)})={g.label(bar(loop))}")
    v = g.origin(loop)
    label = g.labels()
    for f in g.star(v):
        if f not in (loop, bar(loop)):
            label[f] *= l
    return _rebuild(g, g.vertices, g.origins(), label)


def is_reduced(g):
    """True iff every half-edge labeled +-1 is a loop."""
    return all(g.is_loop(e) for e in g.half_edges if abs(g.label(e)) == 1)


def collapsible(g):
    """Half-edges e that may be collapsed (non-loop, |label(~e)| = 1), sorted."""
    return [e for e in g.half_edges if not g.is_loop(e) and abs(g.label(bar(e))) == 1]


def reduce(g, log=None):
    """Collapse, in id order, until reduced. Appends script lines to ``log`` if given."""
    while True:
        cands = collapsible(g)
        if not cands:
            return g
        e = cands[0]
        if log is not None:
            log.append(f"collapse {e}")
        g = collapse(g, e)


# move scripts

def parse_script(text):
    """Parse a move script into a list of (op, args) tuples.

    Lines::

        collapse E
        slide E over F
        induction E by L
        expand V by N [moving E1,E2,...] [as W X]
    """
    steps = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for part in line.split(";"):
            tok = part.split()
            if not tok:
                continue
            try:
                steps.append(_parse_step(tok))
            except (ValueError, IndexError):
                raise MoveError(f"line {no}: cannot parse move {part.strip()!r}") from None
    return steps


def _parse_step(tok):
    op = tok[0]
    if op == "collapse" and len(tok) == 2:
        return ("collapse", (tok[1],))
    if op == "slide" and len(tok) == 4 and tok[2] == "over":
        return ("slide", (tok[1], tok[3]))
    if op == "induction" and len(tok) == 4 and tok[2] == "by":
        return ("induction", (tok[1], int(tok[3])))
    if op == "expand" and len(tok) >= 4 and tok[2] == "by":
        v, n = tok[1], int(tok[3])
        rest = tok[4:]
        moved, names = [], (None, None)
        while rest:
            if rest[0] == "moving":
                moved = [x for x in rest[1].split(",") if x]
                rest = rest[2:]
            elif rest[0] == "as":
                names = (rest[1], rest[2])
                rest = rest[3:]
            else:
                raise ValueError
        return ("expand", (v, n, tuple(moved), names[0], names[1]))
    raise ValueError


def format_step(step):
    op, a = step
    if op == "collapse":
        return f"collapse {a[0]}"
    if op == "slide":
        return f"slide {a[0]} over {a[1]}"
    if op == "induction":
        return f"induction {a[0]} by {a[1]}"
    s = f"expand {a[0]} by {a[1]}"
    if a[2]:
        s += " moving " + ",".join(a[2])
    if a[3]:
        s += f" as {a[3]} {a[4]}"
    return s


def apply_step(g, step):
    op, a = step
    if op == "collapse":
        return collapse(g, *a)
    if op == "slide":
        return slide(g, *a)
    if op == "induction":
        return induction(g, *a)
    if op == "expand":
        return expand(g, a[0], a[1], a[2], a[3], a[4])
    raise MoveError(f"unknown move {op}")


def apply_script(g, script, trace=False):
    """Replay a script (text or parsed steps). With trace=True also return all intermediate graphs."""
    steps = parse_script(script) if isinstance(script, str) else script
    states = [g]
    for i, st in enumerate(steps, 1):
        try:
            g = apply_step(g, st)
        except MoveError as exc:
            raise MoveError(f"step {i} ({format_step(st)}): {exc}") from None
        states.append(g)
    return (g, states) if trace else g
