"""Polynomials over a prime field F_q and the extension fields F_q[x]/(g).

Polynomials are plain tuples of least nonnegative residues, constant
term first, with no trailing zeros; the zero polynomial is ``()``.
"""

from __future__ import annotations

import random


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def normalize(a, q):
    return trim(c % q for c in a)


def degree(a):
    return len(a) - 1


def add(a, b, q):
    n = max(len(a), len(b))
    return trim(((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q for i in range(n))


def sub(a, b, q):
    n = max(len(a), len(b))
    return trim(((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % q for i in range(n))


def scale(a, c, q):
    c %= q
    return trim(x * c % q for x in a)


def mul(a, b, q):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(c % q for c in out)


def divmod_poly(a, b, q):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, q)
    if len(r) <= db:
        return (), trim(r)
    quot = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv % q
        if c:
            quot[k - db] = c
            for i in range(db + 1):
                r[k - db + i] = (r[k - db + i] - c * b[i]) % q
    return trim(quot), trim(r[:db])


def mod(a, b, q):
    return divmod_poly(a, b, q)[1]


def monic(a, q):
    if not a:
        return a
    return scale(a, pow(a[-1], -1, q), q)


def gcd(a, b, q):
    while b:
        a, b = b, mod(a, b, q)
    return monic(a, q)


def powmod(a, e, m, q):
    result = (1,)
    base = mod(a, m, q)
    while e:
        if e & 1:
            result = mod(mul(result, base, q), m, q)
        base = mod(mul(base, base, q), m, q)
        e >>= 1
    return mod(result, m, q)


def derivative(a, q):
    return trim(i * a[i] % q for i in range(1, len(a)))


def _equal_degree_split(h, f, q, rng):
    # Cantor-Zassenhaus; q = 2 uses the trace map instead of the half-power.
    n = degree(h)
    if n == f:
        return [h]
    while True:
        a = trim(rng.randrange(q) for _ in range(n))
        if degree(a) < 1:
            continue
        if q == 2:
            t, s = a, a
            for _ in range(f - 1):
                s = mod(mul(s, s, q), h, q)
                t = add(t, s, q)
            b = t
        else:
            b = sub(powmod(a, (q**f - 1) // 2, h, q), (1,), q)
        g = gcd(b, h, q)
        if 0 < degree(g) < n:
            other = divmod_poly(h, g, q)[0]
            return _equal_degree_split(g, f, q, rng) + _equal_degree_split(monic(other, q), f, q, rng)


def equal_degree_factor(h, f, q, seed=0):
    """Split a squarefree monic ``h`` whose irreducible factors all have degree ``f``.

    Factors are returned sorted lexicographically by coefficient tuple,
    constant term first.
    """
    h = monic(normalize(h, q), q)
    if degree(h) % f:
        raise ValueError(f"degree {degree(h)} is not a multiple of {f}")
    if degree(h) == 0:
        return []
    rng = random.Random(seed)
    return sorted(_equal_degree_split(h, f, q, rng))


def is_irreducible(g, q):
    # Rabin's test
    n = degree(g)
    if n < 1:
        return False
    x = (0, 1)
    primes = [r for r in range(2, n + 1) if n % r == 0 and all(r % s for s in range(2, r))]
    for r in primes:
        xr = powmod(x, q ** (n // r), g, q)
        if degree(gcd(sub(xr, x, q), g, q)) > 0:
            return False
    return powmod(x, q**n, g, q) == mod(x, g, q)


class ResidueField:
    """The finite field F_q[x]/(g) for an irreducible monic ``g``."""

    def __init__(self, q, g):
        self.q = q
        self.g = monic(normalize(g, q), q)
        self.f = degree(self.g)
        self.order = q**self.f

    def __repr__(self):
        return f"ResidueField(q={self.q}, g={self.g})"

    def __eq__(self, other):
        return isinstance(other, ResidueField) and (self.q, self.g) == (other.q, other.g)

    def __hash__(self):
        return hash((self.q, self.g))

    def reduce(self, poly):
        return mod(normalize(poly, self.q), self.g, self.q)

    def mul(self, a, b):
        return mod(mul(a, b, self.q), self.g, self.q)

    def add(self, a, b):
        return add(a, b, self.q)

    def sub(self, a, b):
        return sub(a, b, self.q)

    def neg(self, a):
        return sub((), a, self.q)

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        return powmod(a, e, self.g, self.q)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero in residue field")
        return self.pow(a, self.order - 2)

    def is_square(self, a):
        if not a:
            return True
        if self.q == 2:
            return True
        return self.pow(a, (self.order - 1) // 2) == (1,)

    def encode(self, a):
        """Integer index of ``a`` with base-q digits (constant digit lowest)."""
        out = 0
        for c in reversed(a):
            out = out * self.q + c
        return out

    def decode(self, n):
        digits = []
        for _ in range(self.f):
            n, r = divmod(n, self.q)
            digits.append(r)
        return trim(digits)


