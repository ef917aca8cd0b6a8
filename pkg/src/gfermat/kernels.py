"""Point counting on Weierstrass curves over small finite fields.

Elements of F_Q, Q = q^f, are encoded as integers 0 <= e < Q whose base-q
digits are the coefficients of the residue polynomial (constant digit
lowest).  Multiplication goes through discrete log / antilog tables,
addition through digit vectors; prime fields use plain modular integers.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import gfq
from ._accel import njit, numba_active

MAX_EXHAUSTIVE = 10**7


class SingularCurveError(ValueError):
    pass


def _prime_divisors(n):
    out = []
    r = 2
    while r * r <= n:
        if n % r == 0:
            out.append(r)
            while n % r == 0:
                n //= r
        r += 1
    if n > 1:
        out.append(n)
    return out


class FieldTables:
    """Lookup tables for the finite field F_q[x]/(g)."""

    def __init__(self, q, g):
        self.q = q
        if not gfq.is_irreducible(gfq.monic(gfq.normalize(g, q), q), q):
            raise ValueError(f"{g} is not irreducible over F_{q}")
        self.rf = gfq.ResidueField(q, g)
        self.f = self.rf.f
        self.order = q**self.f
        if self.order > MAX_EXHAUSTIVE:
            raise ValueError(f"field of size {self.order} exceeds the exhaustive limit")
        Q = self.order
        self.weights = np.array([q**i for i in range(self.f)], dtype=np.int64)
        idx = np.arange(Q, dtype=np.int64)
        self.digits = np.stack([(idx // w) % q for w in self.weights], axis=1)
        gen = self._primitive_element()
        exp = np.zeros(Q - 1, dtype=np.int64)
        cur = (1,)
        for i in range(Q - 1):
            exp[i] = self.rf.encode(cur)
            cur = self.rf.mul(cur, gen)
        log = np.full(Q, -1, dtype=np.int64)
        log[exp] = np.arange(Q - 1, dtype=np.int64)
        self.exp = exp
        self.log = log
        chi = np.zeros(Q, dtype=np.int64)
        if q == 2:
            chi[1:] = 1
        else:
            chi[1:] = np.where(log[1:] % 2 == 0, 1, -1)
        self.chi = chi
        # absolute trace to F_q of each element, used for q = 2
        tr = np.zeros(Q, dtype=np.int64)
        if q == 2:
            for e in range(Q):
                x = self.rf.decode(e)
                s, t = x, x
                for _ in range(self.f - 1):
                    s = self.rf.mul(s, s)
                    t = self.rf.add(t, s)
                tr[e] = t[0] if t else 0
        self.trace = tr

    def _primitive_element(self):
        Q = self.order
        divs = _prime_divisors(Q - 1)
        for e in range(1, Q):
            x = self.rf.decode(e)
            if all(self.rf.pow(x, (Q - 1) // r) != (1,) for r in divs):
                return x
        raise ArithmeticError("no primitive element")

    def encode(self, value):
        return self.rf.encode(value)

    def decode(self, e):
        return self.rf.decode(int(e))

    def encode_int(self, c):
        return int(c) % self.q

    # scalar helpers on encoded ints (used by the sieve)
    def add(self, a, b):
        if self.f == 1:
            return (a + b) % self.q
        return int(((self.digits[a] + self.digits[b]) % self.q) @ self.weights)

    def neg(self, a):
        if self.f == 1:
            return (-a) % self.q
        return int(((-self.digits[a]) % self.q) @ self.weights)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.f == 1:
            return a * b % self.q
        return int(self.exp[(self.log[a] + self.log[b]) % (self.order - 1)])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.exp[(-self.log[a]) % (self.order - 1)])

    def scalar(self, c):
        return int(c) % self.q

    def is_square(self, a):
        return a == 0 or self.q == 2 or self.chi[a] == 1


@lru_cache(maxsize=256)
def field_tables(q, g):
    return FieldTables(q, tuple(g))


# -- numpy path -----------------------------------------------------------


def _np_add(t, a, b):
    if t.f == 1:
        return (a + b) % t.q
    return ((t.digits[a] + t.digits[b]) % t.q) @ t.weights


def _np_mul(t, a, b):
    if t.f == 1:
        return a * b % t.q
    out = t.exp[(t.log[a] + t.log[b]) % (t.order - 1)]
    return np.where((a == 0) | (b == 0), 0, out)


def count_points_numpy(t, coeffs):
    """#E(F_Q) for encoded (a1, a2, a3, a4, a6), including the point at infinity."""
    a1, a2, a3, a4, a6 = (int(c) for c in coeffs)
    Q = t.order
    x = np.arange(Q, dtype=np.int64)
    full = lambda c: np.full(Q, c, dtype=np.int64)
    x2 = _np_mul(t, x, x)
    x3 = _np_mul(t, x2, x)
    g = _np_add(t, _np_add(t, x3, _np_mul(t, full(a2), x2)), _np_add(t, _np_mul(t, full(a4), x), full(a6)))
    h = _np_add(t, _np_mul(t, full(a1), x), full(a3))
    if t.q == 2:
        hz = h == 0
        hh = np.where(hz, 1, h)
        hinv = t.exp[(-t.log[hh]) % (Q - 1)] if Q > 2 else np.ones(Q, dtype=np.int64)
        ratio = _np_mul(t, g, _np_mul(t, hinv, hinv))
        sols = np.where(hz, 1, np.where(t.trace[ratio] == 0, 2, 0))
        return int(1 + sols.sum())
    four = full(4 % t.q)
    disc = _np_add(t, _np_mul(t, h, h), _np_mul(t, four, g))
    return int(1 + Q + t.chi[disc].sum())


# -- numba path -----------------------------------------------------------


@njit(cache=True)
def _nb_add(a, b, q, f, digits, weights):
    if f == 1:
        return (a + b) % q
    s = 0
    for i in range(f):
        s += ((digits[a, i] + digits[b, i]) % q) * weights[i]
    return s


@njit(cache=True)
def _nb_mul(a, b, q, f, order, exp, log):
    if a == 0 or b == 0:
        return 0
    if f == 1:
        return a * b % q
    return exp[(log[a] + log[b]) % (order - 1)]


@njit(cache=True)
def _nb_count_batch(curves, q, f, order, digits, weights, exp, log, chi, trace, out):
    for c in range(curves.shape[0]):
        a1 = curves[c, 0]
        a2 = curves[c, 1]
        a3 = curves[c, 2]
        a4 = curves[c, 3]
        a6 = curves[c, 4]
        total = 1
        for x in range(order):
            x2 = _nb_mul(x, x, q, f, order, exp, log)
            x3 = _nb_mul(x2, x, q, f, order, exp, log)
            g = _nb_add(x3, _nb_mul(a2, x2, q, f, order, exp, log), q, f, digits, weights)
            g = _nb_add(g, _nb_mul(a4, x, q, f, order, exp, log), q, f, digits, weights)
            g = _nb_add(g, a6, q, f, digits, weights)
            h = _nb_add(_nb_mul(a1, x, q, f, order, exp, log), a3, q, f, digits, weights)
            if q == 2:
                if h == 0:
                    total += 1
                else:
                    hinv = exp[(order - 1 - log[h]) % (order - 1)]
                    r = _nb_mul(g, _nb_mul(hinv, hinv, q, f, order, exp, log), q, f, order, exp, log)
                    if trace[r] == 0:
                        total += 2
            else:
                four = 4 % q
                d = _nb_add(_nb_mul(h, h, q, f, order, exp, log), _nb_mul(four, g, q, f, order, exp, log), q, f, digits, weights)
                total += 1 + chi[d]
        out[c] = total


def count_points_batch(t, curves, use_numba=None):
    """Point counts for an (m, 5) integer array of encoded (a1, a2, a3, a4, a6)."""
    curves = np.ascontiguousarray(np.asarray(curves, dtype=np.int64).reshape(-1, 5))
    if use_numba is None:
        use_numba = numba_active()
    if use_numba:
        out = np.zeros(curves.shape[0], dtype=np.int64)
        _nb_count_batch(curves, t.q, t.f, t.order, t.digits, t.weights, t.exp, t.log, t.chi, t.trace, out)
        return out
    return np.array([count_points_numpy(t, row) for row in curves], dtype=np.int64)


def discriminant(t, coeffs):
    """Discriminant of an encoded Weierstrass model, as an encoded field element."""
    a1, a2, a3, a4, a6 = (int(c) for c in coeffs)
    m, ad, s = t.mul, t.add, t.scalar
    b2 = ad(m(a1, a1), m(s(4), a2))
    b4 = ad(m(a1, a3), m(s(2), a4))
    b6 = ad(m(a3, a3), m(s(4), a6))
    b8 = t.sub(ad(ad(m(m(a1, a1), a6), m(m(s(4), a2), a6)), m(m(a2, a3), a3)), ad(m(m(a1, a3), a4), m(a4, a4)))
    d = t.neg(m(m(b2, b2), b8))
    d = t.sub(d, m(s(8), m(b4, m(b4, b4))))
    d = t.sub(d, m(s(27), m(b6, b6)))
    d = ad(d, m(s(9), m(b2, m(b4, b6))))
    return d


def count_points(t, coeffs, use_numba=None):
    """#E(F_Q) for a non-singular model; raises SingularCurveError otherwise."""
    if discriminant(t, coeffs) == 0:
        raise SingularCurveError("singular Weierstrass model")
    return int(count_points_batch(t, [coeffs], use_numba)[0])


def trace_of_frobenius(t, coeffs, use_numba=None):
    return t.order + 1 - count_points(t, coeffs, use_numba)


def brute_force_count(t, coeffs):
    """Independent oracle: enumerate all (x, y) pairs with the residue-field class."""
    a1, a2, a3, a4, a6 = (t.decode(c) for c in coeffs)
    rf = t.rf
    total = 1
    elems = [rf.decode(e) for e in range(t.order)]
    for x in elems:
        x2 = rf.mul(x, x)
        rhs = rf.add(rf.add(rf.mul(x2, x), rf.mul(a2, x2)), rf.add(rf.mul(a4, x), a6))
        for y in elems:
            lhs = rf.add(rf.mul(y, y), rf.mul(rf.add(rf.mul(a1, x), a3), y))
            if lhs == rhs:
                total += 1
    return total


def operation_tables(t):
    """Full addition and multiplication tables built from polynomial arithmetic (oracle use)."""
    rf = t.rf
    Q = t.order
    elems = [rf.decode(e) for e in range(Q)]
    add = np.array([[rf.encode(rf.add(a, b)) for b in elems] for a in elems], dtype=np.int64)
    mul = np.array([[rf.encode(rf.mul(a, b)) for b in elems] for a in elems], dtype=np.int64)
    return add, mul


def brute_force_counts(t, curves, tables=None):
    """Vectorised version of :func:`brute_force_count` over every (x, y) pair."""
    add, mul = tables or operation_tables(t)
    Q = t.order
    x = np.arange(Q)
    y = np.arange(Q)
    x2 = mul[x, x]
    x3 = mul[x2, x]
    y2 = mul[y, y]
    out = []
    for a1, a2, a3, a4, a6 in np.asarray(curves, dtype=np.int64).reshape(-1, 5):
        rhs = add[add[x3, mul[a2, x2]], add[mul[a4, x], np.full(Q, a6)]]
        h = add[mul[a1, x], np.full(Q, a3)]
        lhs = add[y2[None, :], mul[h[:, None], y[None, :]]]
        out.append(1 + int((lhs == rhs[:, None]).sum()))
    return np.array(out, dtype=np.int64)
