"""Ideals of the order Z[t] = Z[x]/(h) for a monic integer polynomial h.

An ideal is stored as the Hermite normal form of its Z-basis in the power
basis 1, t, ..., t^(m-1).  The zero ideal is the empty basis.
"""

from __future__ import annotations

from .zlinalg import hnf


class MonogenicOrder:
    def __init__(self, poly):
        poly = [int(c) for c in poly]
        if not poly or poly[-1] != 1:
            raise ValueError("defining polynomial must be monic")
        self.poly = tuple(poly)
        self.degree = len(poly) - 1

    def __repr__(self):
        return f"MonogenicOrder({list(self.poly)})"

    def __eq__(self, other):
        return isinstance(other, MonogenicOrder) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def element(self, coeffs):
        coeffs = [int(c) for c in coeffs]
        return self.reduce(coeffs)

    def reduce(self, coeffs):
        a = list(coeffs) + [0] * max(0, self.degree - len(coeffs))
        m = self.degree
        for k in range(len(a) - 1, m - 1, -1):
            c = a[k]
            if c:
                for i in range(m + 1):
                    a[k - m + i] -= c * self.poly[i]
        return tuple(a[:m]) if m else ()

    def mul(self, a, b):
        prod = [0] * (len(a) + len(b))
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self.reduce(prod)

    def scalar(self, c):
        return self.reduce([c])

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def is_zero(self, a):
        return not any(a)

    def shift(self, a):
        """a * t."""
        return self.reduce([0] + list(a))

    def principal(self, a):
        return Ideal.from_generators(self, [a])

    def zero_ideal(self):
        return Ideal(self, [])

    def unit_ideal(self):
        return Ideal.from_generators(self, [self.scalar(1)])


class Ideal:
    def __init__(self, order, basis):
        self.order = order
        self.basis = [tuple(r) for r in basis]

    @classmethod
    def from_generators(cls, order, gens):
        rows = []
        for g in gens:
            cur = tuple(g)
            for _ in range(order.degree):
                if any(cur):
                    rows.append(list(cur))
                cur = order.shift(cur)
        return cls(order, hnf(rows) if rows else [])

    def __repr__(self):
        return f"Ideal({self.basis})"

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.order == other.order and self.basis == other.basis

    def __hash__(self):
        return hash((self.order, tuple(self.basis)))

    def is_zero(self):
        return not self.basis

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return Ideal(self.order, hnf([list(r) for r in self.basis + other.basis]))

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return Ideal(self.order, [])
        gens = [self.order.mul(a, b) for a in self.basis for b in other.basis]
        return Ideal.from_generators(self.order, gens)

    def norm(self):
        """Index [Z[t] : I]; 0 for the zero ideal."""
        if self.is_zero():
            return 0
        if len(self.basis) < self.order.degree:
            raise ArithmeticError("ideal basis is not of full rank")
        out = 1
        for i, row in enumerate(self.basis):
            out *= row[i]
        return abs(out)


def integer_gcd_norm(values):
    """Norm path for the rational Hecke field: |gcd| of the generators (0 if all vanish)."""
    from math import gcd

    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
