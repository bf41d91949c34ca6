"""Small exact integer helpers: primes, valuations, divisors, Hermite form."""

from fractions import Fraction
from functools import reduce
from math import gcd


def lcm(*xs):
    return reduce(lambda a, b: a * b // gcd(a, b), xs, 1)


def is_prime(p):
    if not isinstance(p, int) or p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def factorize(x):
    """Prime factorization of |x| as a dict {p: e}. Trial division; labels are small."""
    x = abs(x)
    if x == 0:
        raise ValueError("cannot factor 0")
    out = {}
    f = 2
    while f * f <= x:
        while x % f == 0:
            out[f] = out.get(f, 0) + 1
            x //= f
        f += 1 if f == 2 else 2
    if x > 1:
        out[x] = out.get(x, 0) + 1
    return out


def valuation(x, n):
    """Largest e with n**e dividing x. For composite n this is not additive."""
    if n < 2:
        raise ValueError("valuation base must be >= 2")
    x = abs(x)
    if x == 0:
        raise ValueError("valuation of 0")
    e = 0
    while x % n == 0:
        x //= n
        e += 1
    return e


def rational_valuation(q, p):
    q = Fraction(q)
    return valuation(q.numerator, p) - valuation(q.denominator, p)


def divisors(x):
    x = abs(x)
    fs = factorize(x) if x > 1 else {}
    ds = [1]
    for p, e in fs.items():
        ds = [d * p ** i for d in ds for i in range(e + 1)]
    return sorted(ds)


def exact_power(x, n):
    """Return i if |x| == n**i, else None."""
    x = abs(x)
    i = 0
    while x % n == 0 and x > 1:
        x //= n
        i += 1
    return i if x == 1 else None


def hermite_rows(rows):
    """Row-style Hermite normal form of an integer matrix.

    Returns the nonzero rows, pivots positive, entries above each pivot
    reduced into [0, pivot). The result only depends on the row lattice.
    """
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    out = []
    col = 0
    while rows and col < ncols:
        nz = [r for r in rows if r[col] != 0]
        if not nz:
            col += 1
            continue
        rest = [r for r in rows if r[col] == 0]
        # euclid on column col until a single row keeps a nonzero entry
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        for i, r in enumerate(out):
            q = r[col] // piv[col]
            if q:
                out[i] = [a - q * b for a, b in zip(r, piv)]
        out.append(piv)
        rows = rest
        col += 1
    return out
