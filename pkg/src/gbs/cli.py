"""Command-line front end.

Exit codes: 0 for success or a true verdict, 1 for a false verdict,
2 for input errors. Every report starts with the command echo and a
sha256 digest of the input files, so identical inputs give identical
output.
"""

import argparse
import sys

from . import covering, crkz, lattice, modular, moves, plateau, profile
from .families import FamilyError, FamilySpec, family_graph
from .graph import GraphError, parse_annotated_graph, parse_graph, serialize_graph, validate
from .report import digest_of, incommensurability_report

OK, FALSE, INPUT = 0, 1, 2


class Out:
    def __init__(self, argv, inputs):
        self.lines = [f"command: gbs {' '.join(argv)}"]
        chunks = []
        for path in inputs:
            with open(path, "rb") as fh:
                chunks.append(fh.read())
        self.lines.append(f"inputs sha256: {digest_of(*chunks)}")

    def __call__(self, *lines):
        self.lines.extend(lines)

    def flush(self):
        sys.stdout.write("\n".join(self.lines) + "\n")


def _read(path):
    with open(path) as fh:
        return fh.read()


def _graph(path, connected=True):
    return parse_graph(_read(path), connected=connected)


def _ints(s):
    return [int(x) for x in s.split(",") if x.strip()]


# subcommands

def cmd_validate(a, out):
    g = _graph(a.graph, connected=False)
    out(f"vertices: {len(g.vertices)}", f"edges: {len(g.edges)}")
    out(f"directed: {'yes' if g.positive is not None else 'no'}")
    try:
        validate(g)
    except GraphError as exc:
        out(f"invalid: {exc}")
        return FALSE
    out("valid")
    return OK


def cmd_modulus(a, out):
    g = _graph(a.graph)
    for c, q in zip(modular.fundamental_cycles(g), modular.modular_generators(g)):
        out(f"cycle {' '.join(c)}: {q}")
    sub = modular.modular_subgroup(g)
    out(f"q(G) = {sub}", f"unimodular: {modular.is_unimodular(g)}",
        f"q(G) meets Z trivially: {modular.intersects_integers_trivially(sub)}")
    if a.p:
        out(f"{a.p}-unimodular: {modular.is_p_unimodular(g, a.p)}")
        if modular.is_p_unimodular(g, a.p):
            h = modular.height_map(g, a.p)
            out("heights: " + " ".join(f"{v}={h[v]}" for v in g.vertices))
    return OK


def cmd_plateau(a, out):
    g = _graph(a.graph)
    P = plateau.find_proper_plateau(g)
    if P is None:
        out("no proper plateau")
        return OK
    out(f"proper plateau: {P}")
    return FALSE


def cmd_cover_verify(a, out):
    c = covering.read_cover(a.cover)
    diags = covering.verify_admissible(c)
    for d in diags:
        out(f"violation: {d}")
    if diags:
        return FALSE
    topo = covering.is_topological(c)
    out("admissible", f"topological: {topo}")
    if a.topological and not topo:
        return FALSE
    return OK


def _write(out, c, path, target_path=None):
    covering.write_cover(c, path, target_path)
    out(f"wrote {path}")


def cmd_cover_coprime(a, out):
    g = _graph(a.graph)
    c, _ = covering.construct_coprime_cover(g, a.p)
    res = covering.coprime_construction(g, a.p)
    out(f"copies per height: {' '.join(f'{h}:{n}' for h, n in sorted(res.copies.items()))}",
        f"result: {len(res.result.vertices)} vertices, {len(res.result.edges)} edges",
        f"labels prime to {a.p}: {all(x % a.p for x in res.result.labels().values())}")
    if a.out:
        _write(out, c, a.out, a.graph)
    else:
        out(serialize_graph(res.result).rstrip())
    return OK


def cmd_cover_unwind(a, out):
    g = _graph(a.graph)
    c = covering.cyclic_unwind(g, a.loop, a.c)
    out(f"unwound {a.loop} into a {a.c}-cycle")
    if a.out:
        _write(out, c, a.out, a.graph)
    else:
        out(serialize_graph(c.source).rstrip())
    return OK


def cmd_cover_leighton(a, out):
    g1, g2 = _graph(a.graph1), _graph(a.graph2)
    common, c1, c2 = covering.leighton_common_cover(g1, g2, a.d, a.m, a.n)
    ok = all(not covering.verify_admissible(c) and covering.is_topological(c) for c in (c1, c2))
    out(f"common cover: {len(common.vertices)} vertices, {len(common.edges)} edges",
        f"projections verified: {ok}")
    if a.out:
        stem = a.out[:-4] if a.out.endswith(".cov") else a.out
        _write(out, c1, stem + ".1.cov", a.graph1)
        _write(out, c2, stem + ".2.cov", a.graph2)
    return OK if ok else FALSE


def cmd_lattice_verify(a, out):
    g = _graph(a.graph)
    directed = g.positive
    if a.orient:
        og, _ = parse_annotated_graph(_read(a.orient))
        directed = og.positive
    if directed is None:
        raise GraphError("no directed structure: mark E+ edges with '+' or pass --orient")
    r = lattice.verify_lattice_sufficient(g, directed, a.d, a.m, a.n)
    for where, msg in r.failures:
        out(f"fails at {where}: {msg}")
    out("lattice condition holds" if r else "lattice condition fails")
    return OK if r else FALSE


def cmd_lattice_search(a, out):
    g = _graph(a.graph)
    cert = lattice.search_lattice_structure(g, a.d, a.m, a.n, max_seconds=a.max_seconds)
    if cert is None:
        out("no compact structure found")
        return FALSE
    fails = lattice.check_certificate(g, cert)
    out("certificate found", f"re-verified: {not fails}")
    for v in g.vertices:
        p0, p1 = cert.partitions[v]
        out(f"partition {v}: E+ {p0} | E- {p1}")
    text = serialize_graph(g.with_positive(cert.directed.positive), cert.lengths)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text)
        out(f"wrote {a.out}")
    else:
        out(text.rstrip())
    return OK if not fails else FALSE


def parse_family(s):
    """'gamma:k=2,d=2,m=2,n=3,p=2' -> FamilySpec."""
    name, _, rest = s.partition(":")
    params = {}
    for kv in rest.split(","):
        if not kv.strip():
            continue
        k, _, v = kv.partition("=")
        params[k.strip()] = tuple(_ints(v.replace(";", ","))) if k.strip() == "a" else int(v)
    name = name.strip().lower()
    if name in ("gamma", "b1"):
        if params.get("k", 1) == 1:
            return FamilySpec("B1", {k: params[k] for k in ("d", "m", "n")})
        return FamilySpec("Gamma_k", params)
    if name == "delta":
        return FamilySpec("Delta_k", params)
    if name == "lambda":
        return FamilySpec("Lambda_l", params)
    if name == "bouquet":
        return FamilySpec("Bouquet_A", params)
    raise FamilyError(f"unknown family {name!r}")


def cmd_profile(a, out):
    g = _graph(a.graph)
    rep = profile.profile_report(g, a.base, a.max_len)
    out(f"I({a.base}) up to length {a.max_len}: " + " ".join(map(str, sorted(rep.indices))))
    out("D(G,V) contains: " + " ".join(map(str, sorted(rep.lower_depths))))
    if rep.odd_length:
        out("odd-length contributions: " + " ".join(map(str, sorted(rep.odd_length))))
    for N in sorted(rep.indices):
        out(f"  {N}: {' '.join(rep.witnesses[N])}")
    if a.closed_form:
        S = profile.closed_form_profile(parse_family(a.closed_form))
        outside = sorted(x for x in rep.indices if x not in S)
        out(f"closed form: {S}", f"outside closed form: {outside if outside else 'none'}")
        return OK if not outside else FALSE
    return OK


def cmd_ladder_eq(a, out):
    A, B = profile.parse_ladder(_read(a.a)), profile.parse_ladder(_read(a.b))
    r = profile.ladder_equivalent(A, B, bound=a.bound)
    if r.verdict == "equivalent":
        out(f"equivalent: witness (r, r') = {r.witness}")
        return OK
    if r.verdict == "inequivalent":
        out(f"not equivalent: {r.reason}")
        return FALSE
    out(f"undetermined: {r.reason}")
    return FALSE


def cmd_crkz_vector(a, out):
    g = _graph(a.graph)
    x = crkz.crkz_vector(g, a.n, a.l, a.base)
    out(f"X^{a.l} = {x}", f"canonical rotation: {x.canonical}")
    return OK


def cmd_crkz_comm(a, out):
    p1 = crkz.parse_presentation(_read(a.p1))
    p2 = crkz.parse_presentation(_read(a.p2))
    out(f"{p1}: X = {p1.vector()}", f"{p2}: X = {p2.vector()}",
        f"isomorphic: {crkz.cnl_isomorphic(p1, p2)}")
    d = crkz.cnl_commensurable(p1, p2)
    if not d:
        out(f"not commensurable: {d.obstruction}")
        return FALSE
    s = d.scalars
    out(f"commensurable: c1={s.c1} c2={s.c2} rotation={s.rotation}")
    for i, side in enumerate(d.sides, 1):
        out(f"side {i}: degree {side.degree} cover of {side.presentation}")
        if side.align_script:
            out("  align:", *["    " + x for x in side.align_script.splitlines()])
        out("  moves:", *["    " + x for x in side.script.splitlines()])
    out("bouquet:", serialize_graph(d.sides[0].bouquet).rstrip())
    fails = crkz.check_witness(d)
    out(f"witness re-checked: {not fails}")
    return OK if not fails else FALSE


def cmd_family(a, out):
    f = a.family
    if f == "gamma":
        spec = parse_family(f"gamma:k={a.k},d={a.d},m={a.m},n={a.n}" + (f",p={a.p}" if a.p else ""))
    elif f == "delta":
        spec = FamilySpec("Delta_k", dict(k=a.k, d=a.d, n=a.n, p=a.p))
    elif f == "lambda":
        spec = FamilySpec("Lambda_l", dict(l=a.l, d=a.d, m=a.m, n=a.n, q=a.q))
    else:
        spec = FamilySpec("Bouquet_A", dict(n=a.n, l=a.l, a=tuple(_ints(a.a))))
    g, _ = family_graph(spec)
    out(f"# {spec.label()}", serialize_graph(g).rstrip())
    return OK


def cmd_moves_apply(a, out):
    g = _graph(a.graph, connected=False)
    res = moves.apply_script(g, _read(a.script), trace=a.trace)
    if a.trace:
        res, states = res
        steps = moves.parse_script(_read(a.script))
        for st, h in zip(steps, states[1:]):
            out(f"# {moves.format_step(st)}: {len(h.vertices)} vertices, {len(h.edges)} edges")
    out(serialize_graph(res).rstrip())
    return OK


def cmd_report_incomm(a, out):
    specs = [parse_family(s) for s in a.family]
    rep = incommensurability_report(specs, command="gbs " + " ".join(a.argv))
    out.lines = rep.text().rstrip("\n").splitlines()
    return OK if all(v == "incommensurable" for v, _ in rep.verdicts.values()) else FALSE


def build_parser():
    ap = argparse.ArgumentParser(prog="gbs", description="Computations with GBS labeled graphs.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, inputs=(), **kw):
        p = sub.add_parser(name, **kw) if isinstance(name, str) else name[0].add_parser(name[1], **kw)
        p.set_defaults(fn=fn, inputs=inputs)
        return p

    p = add("validate", cmd_validate, ("graph",), help="check a graph file")
    p.add_argument("graph")
    p = add("modulus", cmd_modulus, ("graph",), help="modular homomorphism and heights")
    p.add_argument("graph")
    p.add_argument("--p", type=int)
    p = add("plateau", cmd_plateau, ("graph",), help="search for a proper plateau")
    p.add_argument("graph")

    cov = sub.add_parser("cover", help="branched covers").add_subparsers(dest="sub", required=True)
    p = add((cov, "verify"), cmd_cover_verify, ("cover",))
    p.add_argument("cover")
    p.add_argument("--topological", action="store_true", help="also require a topological cover")
    p = add((cov, "coprime"), cmd_cover_coprime, ("graph",))
    p.add_argument("graph")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out")
    p = add((cov, "unwind"), cmd_cover_unwind, ("graph",))
    p.add_argument("graph")
    p.add_argument("--loop", required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--out")
    p = add((cov, "leighton"), cmd_cover_leighton, ("graph1", "graph2"))
    p.add_argument("graph1")
    p.add_argument("graph2")
    for k in ("d", "m", "n"):
        p.add_argument(f"--{k}", type=int, required=True)
    p.add_argument("--out")

    lat = sub.add_parser("lattice", help="lattice conditions").add_subparsers(dest="sub", required=True)
    p = add((lat, "verify"), cmd_lattice_verify, ("graph", "orient"))
    p.add_argument("graph")
    p.add_argument("--orient")
    for k in ("d", "m", "n"):
        p.add_argument(f"--{k}", type=int, required=True)
    p = add((lat, "search"), cmd_lattice_search, ("graph",))
    p.add_argument("graph")
    for k in ("d", "m", "n"):
        p.add_argument(f"--{k}", type=int, required=True)
    p.add_argument("--max-seconds", type=float)
    p.add_argument("--out")

    p = add("profile", cmd_profile, ("graph",), help="depth profile enumeration")
    p.add_argument("graph")
    p.add_argument("--base", required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--closed-form", help="family spec, e.g. gamma:k=1,d=2,m=2,n=3")

    lad = sub.add_parser("ladder", help="ladder sets").add_subparsers(dest="sub", required=True)
    p = add((lad, "eq"), cmd_ladder_eq, ("a", "b"))
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--bound", type=int, default=3)

    ck = sub.add_parser("crkz", help="CRKZ vectors").add_subparsers(dest="sub", required=True)
    p = add((ck, "vector"), cmd_crkz_vector, ("graph",))
    p.add_argument("graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--base")
    p = add((ck, "comm"), cmd_crkz_comm, ("p1", "p2"))
    p.add_argument("p1")
    p.add_argument("p2")

    p = add("family", cmd_family, help="print a family graph")
    p.add_argument("family", choices=["gamma", "delta", "lambda", "bouquet"])
    for k in ("k", "d", "m", "n", "p", "l", "q"):
        p.add_argument(f"--{k}", type=int)
    p.add_argument("--a", help="bouquet exponents, comma separated")

    mv = sub.add_parser("moves", help="move scripts").add_subparsers(dest="sub", required=True)
    p = add((mv, "apply"), cmd_moves_apply, ("graph", "script"))
    p.add_argument("graph")
    p.add_argument("script")
    p.add_argument("--trace", action="store_true")

    rp = sub.add_parser("report", help="reports").add_subparsers(dest="sub", required=True)
    p = add((rp, "incomm"), cmd_report_incomm)
    p.add_argument("--family", action="append", required=True,
                   help="family spec like lambda:l=2,d=3,m=2,n=5,q=2 (repeat)")
    return ap


def run(argv):
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else INPUT
    a.argv = list(argv)
    try:
        inputs = [getattr(a, k) for k in a.inputs if getattr(a, k, None)]
        out = Out(argv, inputs)
        code = a.fn(a, out)
    except (GraphError, FamilyError, moves.MoveError, covering.CoverError, ValueError,
            OSError, lattice.LatticeTimeout) as exc:
        print(f"gbs: error: {exc}", file=sys.stderr)
        return INPUT
    out.flush()
    return code


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
