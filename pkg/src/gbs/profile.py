"""Segment indices, depth profiles and ladder sets.

The segment calculus works on quotient paths. Crossing an edge e from a
state (N, rho) with M = N*rho gives N' = N*|l(e)| / gcd(M, |l(e)|) and
rho' = rho * |l(~e)| / |l(e)|; i(sigma) = N and i(reverse) = N*|rho|.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, prod

from .arith import divisors, exact_power, factorize, lcm, valuation
from .graph import GraphError, bar


@dataclass(frozen=True)
class SegmentState:
    index: int = 1
    modulus: Fraction = Fraction(1)

    def cross(self, lam, colam):
        a, b = abs(lam), abs(colam)
        M = self.index * self.modulus
        assert M.denominator == 1
        N = self.index * a // gcd(M.numerator, a)
        return SegmentState(N, self.modulus * Fraction(b, a))

    @property
    def reverse_index(self):
        x = self.index * abs(self.modulus)
        assert x.denominator == 1
        return x.numerator


def segment_index(g, path):
    """(i(sigma), i(reverse sigma)) for a composable quotient path."""
    st = SegmentState()
    prev = None
    for e in path:
        if prev is not None and g.terminus(prev) != g.origin(e):
            raise GraphError(f"path not composable at {prev} -> {e}")
        st = st.cross(g.label(e), g.label(bar(e)))
        prev = e
    return st.index, st.reverse_index


def brute_force_index(labels):
    """Smallest N with the divisibility chain M0 = N, |l_i| | M_i, M_{i+1} = M_i |m_i| / |l_i|.

    ``labels`` is a list of (l(e), l(~e)). Returns (N, M_final). The valid
    N are the multiples of the least one, and the product of the |l(e)| is
    valid, so scanning its divisors in order finds the least.
    """
    bound = prod(abs(a) for a, _ in labels) if labels else 1
    for N in divisors(bound):
        M = N
        ok = True
        for a, b in labels:
            if M % abs(a):
                ok = False
                break
            M = M // abs(a) * abs(b)
        if ok:
            return N, M
    raise AssertionError("no stabilizer index found within bound")


def admissible_step(g, prev, e):
    """May e follow prev in a path that lifts to a segment?"""
    if prev is None:
        return True
    if g.terminus(prev) != g.origin(e):
        return False
    return e != bar(prev) or abs(g.label(e)) >= 2


def is_admissible(g, path):
    prev = None
    for e in path:
        if not admissible_step(g, prev, e):
            return False
        prev = e
    return True


@dataclass
class TreeBall:
    """Finite ball of the Bass-Serre tree with its projection.

    nodes[i] = (parent, quotient half-edge from parent, coset, quotient vertex, path)
    """
    base: str
    radius: int
    nodes: list = field(default_factory=list)
    labels: dict = field(default_factory=dict)    # node -> [(l(e), l(~e)), ...] along its path

    def paths(self):
        return [n[4] for n in self.nodes[1:]]

    def stabilizer_index(self, i):
        return brute_force_index(self.labels[i])


def tree_ball(g, base, radius, budget=200000):
    """Ball of radius ``radius`` around a lift of ``base``.

    At a lift of v the tree edges over e in E_0(v) are the |l(e)| cosets;
    the arrival edge is coset 0 of the reversed quotient edge.
    """
    if not g.has_vertex(base):
        raise GraphError(f"no vertex {base}")
    ball = TreeBall(base, radius)
    ball.nodes.append((None, None, None, base, ()))
    labels = ball.labels
    labels[0] = []
    frontier = [0]
    for _ in range(radius):
        nxt = []
        for i in frontier:
            _, arr, _, v, path = ball.nodes[i]
            for e in g.star(v):
                for c in range(abs(g.label(e))):
                    if arr is not None and e == bar(arr) and c == 0:
                        continue
                    ball.nodes.append((i, e, c, g.terminus(e), path + (e,)))
                    j = len(ball.nodes) - 1
                    labels[j] = labels[i] + [(g.label(e), g.label(bar(e)))]
                    nxt.append(j)
                    if len(ball.nodes) > budget:
                        raise ValueError("tree ball exceeds node budget")
        frontier = nxt
    return ball


@dataclass
class ProfileReport:
    base: str
    max_len: int
    indices: frozenset          # I(x), truncated
    witnesses: dict             # index -> shortest path found
    odd_length: frozenset       # indices first realised only by odd-length paths

    @property
    def lower_depths(self):
        """I(x) minus {1}: the part certainly in D(G, V)."""
        return self.indices - {1}


def profile_report(g, base, max_len):
    """Enumerate admissible closed quotient paths at base of length <= max_len with |rho| = 1.

    States (vertex, last edge, N, rho) are merged across paths, so the
    work is polynomial in the number of distinct states.
    """
    if not g.has_vertex(base):
        raise GraphError(f"no vertex {base}")
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    layer = {(base, None, 1, Fraction(1)): ()}
    seen = set(layer)
    found, odd = {}, set()
    for length in range(1, max_len + 1):
        nxt = {}
        for (v, last, N, rho), path in layer.items():
            st = SegmentState(N, rho)
            for e in g.star(v):
                if not admissible_step(g, last, e):
                    continue
                s2 = st.cross(g.label(e), g.label(bar(e)))
                key = (g.terminus(e), e, s2.index, s2.modulus)
                if key in seen:
                    continue
                nxt[key] = path + (e,)
        for key, path in nxt.items():
            w, _, N, rho = key
            if w == base and abs(rho) == 1 and N not in found:
                found[N] = path
                if length % 2:
                    odd.add(N)
        seen |= set(nxt)
        layer = nxt
    return ProfileReport(base, max_len, frozenset(found), found, frozenset(odd))


def enumerate_profile(g, base, max_len):
    """I(base) truncated at even length max_len (use profile_report for odd bounds)."""
    if max_len % 2:
        raise ValueError("max_len must be even")
    return profile_report(g, base, max_len).indices


# ladder sets

@dataclass(frozen=True)
class LadderSet:
    """Finite union of cones {s * prod r_j^i_j : j in J} minus a finite set.

    ``terms`` holds (seed, J) pairs with J a frozenset of indices into
    ``ratios``. A plain ladder has every ratio free on every seed.
    """
    ratios: tuple
    terms: frozenset
    excluded: frozenset = frozenset()

    def __post_init__(self):
        if any(r < 2 for r in self.ratios):
            raise ValueError("ratios must be >= 2")
        if any(s < 1 for s, _ in self.terms):
            raise ValueError("seeds must be positive")

    @property
    def seeds(self):
        return sorted({s for s, _ in self.terms})

    def is_plain(self):
        full = frozenset(range(len(self.ratios)))
        return all(J == full for _, J in self.terms)

    def __contains__(self, x):
        if x < 1 or x in self.excluded:
            return False
        return any(x % s == 0 and _in_monoid(x // s, [self.ratios[j] for j in J]) for s, J in self.terms)

    def elements(self, limit):
        """Sorted elements <= limit."""
        out = set()
        for s, J in self.terms:
            rs = [self.ratios[j] for j in sorted(J)]
            stack = [(s, 0)]
            while stack:
                x, k = stack.pop()
                if x > limit:
                    continue
                out.add(x)
                for i in range(k, len(rs)):
                    stack.append((x * rs[i], i))
        return sorted(out - self.excluded)

    def is_finite(self):
        return all(not J for _, J in self.terms)

    def first(self, count):
        """The ``count`` smallest elements (fewer if the set is finite)."""
        limit = max([s for s, _ in self.terms] + [1])
        while True:
            xs = self.elements(limit)
            if len(xs) >= count or self.is_finite():
                return xs[:count]
            limit *= 2

    def __str__(self):
        if self.is_plain():
            s = f"{{{', '.join(map(str, self.seeds))}}}"
            if self.ratios:
                s += "[" + ",".join(map(str, self.ratios)) + "]"
        else:
            parts = []
            for seed, J in sorted(self.terms, key=lambda t: (t[0], sorted(t[1]))):
                rs = ",".join(str(self.ratios[j]) for j in sorted(J))
                parts.append(f"{seed}[{rs}]" if rs else str(seed))
            s = " u ".join(parts)
        if self.excluded:
            s += " - {" + ", ".join(map(str, sorted(self.excluded))) + "}"
        return s


def _in_monoid(y, rs, _cache={}):
    key = (y, tuple(rs))
    if key in _cache:
        return _cache[key]
    if y == 1:
        res = True
    else:
        res = any(y % r == 0 and _in_monoid(y // r, rs) for r in rs)
    _cache[key] = res
    return res


def ladder(seeds, ratios=(), excluded=()):
    ratios = tuple(ratios)
    full = frozenset(range(len(ratios)))
    return LadderSet(ratios, frozenset((s, full) for s in seeds), frozenset(excluded))


def finite_set(xs):
    return LadderSet((), frozenset((x, frozenset()) for x in xs))


def ladder_bracket(S, k):
    """S[k] = {x k^i}: S finite (iterable) or an exclusion-free ladder, everything prime to k."""
    if k < 2:
        raise ValueError("bracket ratio must be >= 2")
    if not isinstance(S, LadderSet):
        S = finite_set(S)
    if S.excluded:
        raise ValueError("cannot bracket a ladder with exclusions")
    for s, _ in S.terms:
        if gcd(s, k) != 1:
            raise ValueError(f"gcd({s}, {k}) != 1")
    for r in S.ratios:
        if gcd(r, k) != 1:
            raise ValueError(f"gcd({r}, {k}) != 1")
    j = len(S.ratios)
    return LadderSet(S.ratios + (k,), frozenset((s, J | {j}) for s, J in S.terms))


def ladder_div(S, r):
    """S/r = {x / gcd(r, x) : x in S}, exactly."""
    if r < 1:
        raise ValueError("r must be positive")
    if r == 1:
        return S
    T = max(factorize(r).values())
    terms = set()
    for s, J in S.terms:
        J = sorted(J)
        # each free exponent is either fixed below T or saturated (>= T, stays free)
        for choice in product(*[list(range(T)) + ["sat"] for _ in J]):
            x = s
            free = set()
            for j, c in zip(J, choice):
                if c == "sat":
                    x *= S.ratios[j] ** T
                    free.add(j)
                else:
                    x *= S.ratios[j] ** c
            terms.add((x // gcd(r, x), frozenset(free)))
    excl = set()
    for x in S.excluded:
        y = x // gcd(r, x)
        # y survives if some non-excluded z in S has the same image
        if not any(z in S and gcd(r, z) == d for d in divisors(r) for z in [y * d]):
            excl.add(y)
    return _simplify(LadderSet(S.ratios, frozenset(terms), frozenset(excl)))


def _simplify(S):
    """Drop terms contained in another term (cosmetic; the set is unchanged)."""
    terms = sorted(S.terms, key=lambda t: (-len(t[1]), t[0]))
    kept = []
    for s, J in terms:
        covered = False
        for s2, J2 in kept:
            if J <= J2 and s % s2 == 0 and _in_monoid(s // s2, [S.ratios[j] for j in J2]):
                covered = True
                break
        if not covered:
            kept.append((s, J))
    return LadderSet(S.ratios, frozenset(kept), S.excluded)


def _root(r):
    """(b, a) with r = b**a and a maximal."""
    fs = factorize(r)
    a = 0
    for e in fs.values():
        a = gcd(a, e)
    b = 1
    for p, e in fs.items():
        b *= p ** (e // a)
    return b, a


def _with_ratios(S, new):
    """Re-express S over ``new``: each old ratio r must satisfy r**t == some new ratio."""
    idx = {}
    for j, r in enumerate(S.ratios):
        for i, R in enumerate(new):
            t = exact_power(R, r)
            if t:
                idx[j] = (i, t)
                break
        else:
            raise ValueError(f"ratio {r} has no power among {new}")
    terms = set()
    for s, J in S.terms:
        J = sorted(J)
        for offs in product(*[range(idx[j][1]) for j in J]):
            x = s
            for j, o in zip(J, offs):
                x *= S.ratios[j] ** o
            terms.add((x, frozenset(idx[j][0] for j in J)))
    return LadderSet(tuple(new), frozenset(terms), S.excluded)


def _common_ratios(A, B):
    rs = []
    for r in list(A.ratios) + list(B.ratios):
        b, a = _root(r)
        for i, (b2, a2) in enumerate(rs):
            if b2 == b:
                rs[i] = (b, lcm(a, a2))
                break
        else:
            rs.append((b, a))
    new = tuple(b ** a for b, a in rs)
    coprime = all(gcd(x, y) == 1 for i, x in enumerate(new) for y in new[i + 1:])
    return new, coprime


def ladder_equal(A, B):
    """Exact set equality when the unified ratios are pairwise coprime.

    Returns (equal, exact). Membership is invariant under multiplying by
    r_j once the r_j-adic valuation exceeds every seed's, so it suffices
    to compare on the finitely many lower elements.
    """
    new, coprime = _common_ratios(A, B)
    if not coprime:
        a, b = A.first(200), B.first(200)
        return a == b, False
    A2, B2 = _with_ratios(A, new), _with_ratios(B, new)
    M = []
    for j, r in enumerate(new):
        vals = [valuation(s, r) for s, _ in A2.terms | B2.terms]
        vals += [valuation(x, r) for x in A2.excluded | B2.excluded]
        M.append(max(vals, default=0) + 1)
    cands = set(A2.excluded | B2.excluded)
    for s, J in A2.terms | B2.terms:
        J = sorted(J)
        for exps in product(*[range(M[j] + 1) for j in J]):
            x = s
            for j, i in zip(J, exps):
                x *= new[j] ** i
            cands.add(x)
    return all((x in A2) == (x in B2) for x in cands), True


def ratio_tail(S):
    """Primitive period of successive ratios of a one-ratio ladder, or None.

    None when the tail is not a divisibility chain (the invariance argument
    needs each element to divide the next).
    """
    if len(S.ratios) != 1 or S.is_finite():
        return None
    k = S.ratios[0]
    X = max([s for s, _ in S.terms] + list(S.excluded) + [1]) * k
    xs = S.elements(X * k * k)
    xs = [x for x in xs if x >= X]
    L = sum(1 for x in xs if x < X * k)
    if L == 0:
        return None
    seq = xs[:L + 1]
    if any(b % a for a, b in zip(seq, seq[1:])):
        return None
    word = tuple(Fraction(b, a) for a, b in zip(seq, seq[1:]))
    for p in range(1, L + 1):
        if L % p == 0 and word == word[:p] * (L // p):
            return word[:p]
    return word


def _rotation_equal(u, v):
    if len(u) != len(v):
        return False
    return any(u[i:] + u[:i] == v for i in range(len(u))) if u else True


@dataclass
class LadderEquivalence:
    verdict: str                # "equivalent", "inequivalent", "undetermined"
    witness: tuple = None       # (r, r2) with S/r == S2/r2
    reason: str = ""

    def __bool__(self):
        return self.verdict == "equivalent"


def _bracket_index(S):
    """Index of a ratio that is prime to every seed and every other ratio, free in every term."""
    for j in reversed(range(len(S.ratios))):
        k = S.ratios[j]
        if all(j in J and gcd(s, k) == 1 for s, J in S.terms) and \
                all(gcd(k, r) == 1 for i, r in enumerate(S.ratios) if i != j):
            return j
    return None


def _strip_exclusions(S):
    """(S/k^a, k^a) with no exclusions, using the bracket ratio k; or (S, 1)."""
    if not S.excluded:
        return S, 1
    j = _bracket_index(S)
    if j is None:
        return S, None
    k = S.ratios[j]
    a = max(valuation(x, k) for x in S.excluded) + 1
    T = ladder_div(S, k ** a)
    return (T, k ** a) if not T.excluded else (S, None)


def _drop_ratio(S, j):
    keep = [i for i in range(len(S.ratios)) if i != j]
    pos = {i: n for n, i in enumerate(keep)}
    return LadderSet(tuple(S.ratios[i] for i in keep),
                     frozenset((s, frozenset(pos[i] for i in J if i != j)) for s, J in S.terms),
                     S.excluded)


def ladder_equivalent(S, S2, bound=3):
    """Decide S ~ S2 (some S/r == S2/r2).

    Equivalence is proved by a witness; inequivalence by differing ratio
    tails after removing exclusions and a shared bracket ratio. Anything
    else is reported as undetermined within the witness bound.
    """
    # structural candidate first: strip exclusions through the bracket ratio
    T, r = _strip_exclusions(S)
    T2, r2 = _strip_exclusions(S2)
    tried = set()

    def attempt(a, b):
        tried.add((a, b))
        eq, exact = ladder_equal(ladder_div(S, a), ladder_div(S2, b))
        return eq and exact

    if r is not None and r2 is not None and attempt(r, r2):
        return LadderEquivalence("equivalent", (r, r2), f"S/{r} = S'/{r2}")
    # differing ratio tails rule out every witness, so test them before searching
    if r is not None and r2 is not None:
        j, j2 = _bracket_index(T), _bracket_index(T2)
        if j is not None and j2 is not None and T.ratios[j] == T2.ratios[j2] and len(T.ratios) > 1:
            T, T2 = _drop_ratio(T, j), _drop_ratio(T2, j2)
        t, t2 = ratio_tail(T), ratio_tail(T2)
        if t is not None and t2 is not None and not _rotation_equal(t, t2):
            fmt = lambda w: "(" + ", ".join(str(x) for x in w) + ")"
            return LadderEquivalence("inequivalent", None,
                                     f"ratio tails differ at period: {fmt(t)} vs {fmt(t2)}")
    P = prod(s for s, _ in S.terms) * prod(S.ratios) ** bound
    P2 = prod(s for s, _ in S2.terms) * prod(S2.ratios) ** bound
    ds, ds2 = divisors(P), divisors(P2)
    for a, b in sorted(((a, b) for a in ds for b in ds2), key=lambda t: (t[0] * t[1], t)):
        if (a, b) not in tried and attempt(a, b):
            return LadderEquivalence("equivalent", (a, b), f"S/{a} = S'/{b}")
    return LadderEquivalence("undetermined", None, f"not equivalent within bound B={bound}")


# closed forms

def s1_ladder(m):
    return ladder([1], (m,)) if m > 1 else finite_set([1])


def sk_ladder(k, m, p):
    """S_k = {p m^{ik}, m^{ik+1}, ..., m^{ik+k-1}}."""
    if k == 1:
        return s1_ladder(m)
    return ladder({p} | {m ** j for j in range(1, k)}, (m ** k,))


def closed_form_profile(spec):
    """Closed-form depth profile of a family as a ladder set."""
    f, P = spec.family, spec.params
    if f in ("B1", "Gamma_k") and P.get("k", 1) == 1:
        m, n = P["m"], P["n"]
        S = ladder_bracket(s1_ladder(m), n)
        return LadderSet(S.ratios, S.terms, frozenset({1}))
    if f == "Gamma_k":
        k, m, n, p = P["k"], P["m"], P["n"], P["p"]
        S = ladder_bracket(sk_ladder(k, m, p), n)
        # when m = p the element p = m is the index of a length-2 segment e~e
        return LadderSet(S.ratios, S.terms, frozenset({p}) if m != p else frozenset())
    if f == "Delta_k":
        k, d, n, p = P["k"], P["d"], P["n"], P["p"]
        seeds = {p * n, 1} | {n ** j for j in range(1, k)}
        if d == p + 1:
            seeds.discard(n)
        return ladder(seeds, (n ** k,))
    if f == "Bouquet":
        return bouquet_profile(P["N"], P["ns"])
    raise ValueError(f"no closed form for family {f}")


def bouquet_profile(N, ns):
    """{n_i N^j} for BS(1,N) with BS(n_i,n_i) petals; {n_i} must contain 1 and be lcm-closed."""
    ns = set(ns) | {1}
    for a in ns:
        for b in ns:
            if lcm(a, b) not in ns:
                raise ValueError(f"petal labels not closed under lcm: lcm({a},{b})")
    return ladder(ns, (N,))


# ladder files

def parse_ladder(text):
    seeds, ratios, excl, terms = None, (), (), []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, val = line.partition(":")
        try:
            nums = [int(x) for x in val.replace(",", " ").split()]
        except ValueError:
            raise ValueError(f"line {no}: expected integers") from None
        key = key.strip()
        if key == "seeds":
            seeds = nums
        elif key == "ratios":
            ratios = tuple(nums)
        elif key == "excluded":
            excl = nums
        elif key == "term":
            terms.append(nums)
        else:
            raise ValueError(f"line {no}: unknown key {key!r}")
    if seeds is None and not terms:
        raise ValueError("ladder file needs a seeds line")
    S = ladder(seeds or [], ratios, excl)
    if terms:
        extra = frozenset((t[0], frozenset(t[1:])) for t in terms)
        S = LadderSet(S.ratios, S.terms | extra, S.excluded)
    return S


def serialize_ladder(S):
    out = []
    plain = [s for s, J in S.terms if J == frozenset(range(len(S.ratios)))]
    out.append("seeds: " + " ".join(map(str, sorted(plain))))
    out.append("ratios: " + " ".join(map(str, S.ratios)))
    if S.excluded:
        out.append("excluded: " + " ".join(map(str, sorted(S.excluded))))
    for s, J in sorted(S.terms, key=lambda t: (t[0], sorted(t[1]))):
        if s in plain and J == frozenset(range(len(S.ratios))):
            continue
        out.append("term: " + " ".join(map(str, [s] + sorted(J))))
    return "\n".join(out) + "\n"
