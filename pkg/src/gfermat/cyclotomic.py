"""Exact arithmetic in real cyclotomic fields Q(zeta_n)^+ and their subfields.

Elements are dense integer coordinate vectors in the power basis of a
distinguished generator, with one shared positive denominator.  For the
full real field the generator is theta = zeta_n + zeta_n^-1; for the
degree (p-1)/4 subfield of Q(zeta_p)^+ (p = 1 mod 4) it is the period
theta_1 + theta_t, where t^2 = -1 mod p.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property, lru_cache

import mpmath
from mpmath import iv

from . import gfq
from .zlinalg import solve_rational

START_PREC_BITS = 64


class FieldError(ValueError):
    pass


class RamifiedPrimeError(FieldError):
    """Raised when a ramified prime is passed where an unramified one is required."""


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = 3
    while r * r <= n:
        if n % r == 0:
            return False
        r += 2
    return True


def prime_factors(n):
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


def ord_p(n, p):
    """p-adic valuation of a nonzero integer."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@contextmanager
def _iv_precision(bits):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients of Phi_n over Z, constant term first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _int_exact_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def _reduce_mod_monic(a, f):
    a = list(a)
    d = len(f) - 1
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k]
        if c:
            for i in range(d + 1):
                a[k - d + i] -= c * f[i]
    return a[:d]


def _int_exact_div(a, b):
    a = list(a)
    db = len(b) - 1
    quot = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] // b[-1]
        quot[k - db] = c
        for i in range(db + 1):
            a[k - db + i] -= c * b[i]
    if any(a[:db]):
        raise ArithmeticError("inexact polynomial division")
    return quot


def _reduce_mod_cyclotomic(vec, n):
    """Reduce an element of Z[x]/(x^n - 1) modulo Phi_n; returns the coefficient list."""
    phi = cyclotomic_polynomial(n)
    a = list(vec)
    dp = len(phi) - 1
    for k in range(len(a) - 1, dp - 1, -1):
        c = a[k]
        if c:
            for i in range(dp + 1):
                a[k - dp + i] -= c * phi[i]
    return a[:dp]


class RealCyclotomicField:
    """Q(zeta_n)^+ (``subfield=False``) or the index-2 subfield K' of Q(zeta_p)^+.

    Use :func:`build_field` rather than the constructor; instances are cached
    and immutable.
    """

    def __init__(self, conductor, subfield=False):
        n = conductor
        self.conductor = n
        self.subfield = subfield
        units = [a for a in range(1, n) if math.gcd(a, n) == 1] or [1]
        if subfield:
            t = next(x for x in range(2, n) if x * x % n == n - 1)
            self.twist = t
            hgroup = sorted({1 % n, (n - 1) % n, t, n - t})
            self._orbit_mults = (1, t)
        else:
            self.twist = None
            hgroup = sorted({1 % n, (n - 1) % n}) if n > 2 else [1 % n]
            self._orbit_mults = (1,)
        self.hgroup = tuple(hgroup)
        classes = []
        seen = set()
        for a in units:
            if a in seen:
                continue
            coset = {a * h % n for h in hgroup}
            seen |= coset
            classes.append(min(coset))
        self.classes = tuple(classes)
        self.degree = len(classes)
        self._class_of = {}
        for c in classes:
            for h in hgroup:
                self._class_of[c * h % n] = c
        self.min_poly = self._exact_min_poly()
        self._reduction_table = self._build_reduction_table()

    def __repr__(self):
        tag = "Kprime" if self.subfield else "K"
        return f"RealCyclotomicField(n={self.conductor}, {tag}, degree={self.degree})"

    def __reduce__(self):
        return (_cached_field, (self.conductor, self.subfield))

    @property
    def variant(self):
        return "Kprime" if self.subfield else "K"

    # -- construction -------------------------------------------------

    def conjugate_exponents(self, a):
        """Exponents e with sigma_a(generator) = sum of zeta^e."""
        n = self.conductor
        out = []
        for h in self._orbit_mults:
            out.extend([a * h % n, (-a * h) % n])
        return out

    def _exact_min_poly(self):
        n = self.conductor
        if n <= 2:
            return (-2, 1) if n == 1 else (2, 1)
        one = [0] * n
        one[0] = 1
        poly = [one]
        for a in self.classes:
            conj = [0] * n
            for e in self.conjugate_exponents(a):
                conj[e] += 1
            new = [[0] * n for _ in range(len(poly) + 1)]
            for i, c in enumerate(poly):
                row = new[i + 1]
                for k in range(n):
                    row[k] += c[k]
                row = new[i]
                for e, m in enumerate(conj):
                    if m:
                        for k in range(n):
                            if c[k]:
                                row[(k + e) % n] -= m * c[k]
            poly = new
        coeffs = []
        for c in poly:
            red = _reduce_mod_cyclotomic(c, n)
            if any(red[1:]):
                raise ArithmeticError("minimal polynomial coefficient is not rational")
            coeffs.append(red[0])
        return tuple(coeffs)

    def _build_reduction_table(self):
        # rows: x^k mod min_poly for k = d .. 2d-2, as coordinate lists
        d = self.degree
        f = self.min_poly
        table = []
        cur = [-c for c in f[:d]]
        for _ in range(max(d - 1, 1)):
            table.append(cur)
            # multiply by x
            top = cur[-1]
            nxt = [0] + cur[:-1]
            cur = [nxt[i] - top * f[i] for i in range(d)]
        return table

    # -- elements -----------------------------------------------------

    def element(self, coords, den=1):
        return FieldElement(self, coords, den)

    def __call__(self, value):
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, Fraction):
            return FieldElement(self, [value.numerator] + [0] * (self.degree - 1), value.denominator)
        return FieldElement(self, [int(value)] + [0] * (self.degree - 1))

    @cached_property
    def gen(self):
        if self.degree == 1:
            return self(-self.min_poly[0])
        return FieldElement(self, [0, 1] + [0] * (self.degree - 2))

    @cached_property
    def one(self):
        return self(1)

    @cached_property
    def zero(self):
        return self(0)

    def class_of(self, a):
        n = self.conductor
        a %= n
        if math.gcd(a, n) != 1:
            raise FieldError(f"{a} is not invertible modulo {n}")
        return self._class_of.get(a, 1)

    def _mul_coords(self, a, b):
        d = self.degree
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                row = self._reduction_table[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return out

    # -- Galois structure ---------------------------------------------

    @cached_property
    def ambient(self):
        """Q(zeta_p)^+ containing this subfield (self for a full field)."""
        return _cached_field(self.conductor, False) if self.subfield else self

    @cached_property
    def generator_in_ambient(self):
        K = self.ambient
        if not self.subfield:
            return K.gen
        return sum((K.theta_any(h) for h in self._orbit_mults), K.zero)

    @cached_property
    def galois_table(self):
        """Map class a -> sigma_a(generator) as an element of this field."""
        table = {}
        for a in self.classes:
            if not self.subfield:
                table[a] = self.theta_any(a)
            else:
                K = self.ambient
                img = sum((K.theta_any(a * h) for h in self._orbit_mults), K.zero)
                table[a] = self.from_ambient(img)
        return table

    @lru_cache(maxsize=None)
    def _galois_matrix(self, a):
        # columns are sigma_a(gen^i)
        img = self.galois_table[a]
        cols = []
        cur = self.one
        for _ in range(self.degree):
            if cur.den != 1:
                raise ArithmeticError("non-integral Galois image")
            cols.append(cur.coords)
            cur = cur * img
        return cols

    def galois_generator(self):
        """Smallest class a whose powers exhaust the (cyclic) Galois group, or None."""
        for a in self.classes:
            seen = set()
            x = 1
            for _ in range(self.degree):
                x = x * a % self.conductor
                seen.add(self.class_of(x))
            if len(seen) == self.degree:
                return a
        return None

    @lru_cache(maxsize=None)
    def _ambient_power_matrix(self):
        K = self.ambient
        g = self.generator_in_ambient
        cols = []
        cur = K.one
        for _ in range(self.degree):
            cols.append(cur)
            cur = cur * g
        return cols

    def from_ambient(self, x):
        """Express an element of Q(zeta_p)^+ fixed by the involution in this subfield."""
        if not self.subfield:
            return x
        cols = self._ambient_power_matrix()
        lcm_den = x.den
        for c in cols:
            lcm_den = lcm_den * c.den // math.gcd(lcm_den, c.den)
        A = [[c.coords[i] * (lcm_den // c.den) for c in cols] for i in range(self.ambient.degree)]
        b = [v * (lcm_den // x.den) for v in x.coords]
        try:
            sol = solve_rational(A, b)
        except ValueError as exc:
            raise FieldError("element does not lie in the subfield") from exc
        den = 1
        for s in sol:
            den = den * s.denominator // math.gcd(den, s.denominator)
        return FieldElement(self, [int(s * den) for s in sol], den)

    def to_ambient(self, x):
        if not self.subfield:
            return x
        K = self.ambient
        out = K.zero
        for c, col in zip(x.coords, self._ambient_power_matrix()):
            if c:
                out = out + col * c
        return out / x.den if x.den != 1 else out

    # -- theta_j -----------------------------------------------------

    @lru_cache(maxsize=None)
    def theta_any(self, j):
        """zeta^j + zeta^-j for any integer j (full field only)."""
        if self.subfield:
            raise FieldError("theta_j is defined in the full real field")
        n = self.conductor
        j %= n
        j = min(j, n - j)
        if j == 0:
            return self(2)
        prev, cur = self(2), self.gen
        for _ in range(j - 1):
            prev, cur = cur, self.gen * cur - prev
        return cur

    # -- embeddings --------------------------------------------------

    def embedding_value_mp(self, a):
        """Real value of sigma_a(generator) at the current mpmath precision."""
        n = self.conductor
        return mpmath.fsum(2 * mpmath.cos(2 * mpmath.pi * (a * h % n) / n) for h in self._orbit_mults)

    def _embedding_interval(self, a):
        n = self.conductor
        total = iv.mpf(0)
        for h in self._orbit_mults:
            total += 2 * iv.cos(2 * iv.pi * (a * h % n) / n)
        return total

    @cached_property
    def discriminant(self):
        return poly_discriminant(self.min_poly)


@lru_cache(maxsize=None)
def _cached_field(n, subfield):
    return RealCyclotomicField(n, subfield=subfield)


def build_field(p, subfield=False):
    """Q(zeta_p)^+ for an odd prime p, or with ``subfield=True`` its subfield of degree (p-1)/4."""
    if not isinstance(p, int) or isinstance(p, bool) or p % 2 == 0 or not is_prime(p):
        raise FieldError(f"expected an odd prime, got {p!r}")
    if subfield and p % 4 != 1:
        raise FieldError(f"the subfield needs p = 1 (mod 4); got p = {p}")
    return _cached_field(p, bool(subfield))


def real_cyclotomic_field(n):
    """Q(zeta_n)^+ for any conductor n >= 3 (composite conductors appear in the modularity scan)."""
    if not isinstance(n, int) or n < 3:
        raise FieldError(f"conductor must be an integer >= 3, got {n!r}")
    return _cached_field(n, False)


def poly_discriminant(f):
    """Discriminant of an integer polynomial (constant first) via the Sylvester resultant."""
    import sympy

    x = sympy.Symbol("x")
    return int(sympy.discriminant(sympy.Poly(list(reversed(f)), x)))


class FieldElement:
    """An element of a real cyclotomic field: ``sum(coords[i] * gen**i) / den``."""

    __slots__ = ("field", "coords", "den", "__weakref__")

    def __init__(self, field, coords, den=1):
        coords = [int(c) for c in coords]
        d = field.degree
        if len(coords) > d:
            coords = _reduce_mod_monic(coords, field.min_poly)
        if len(coords) < d:
            coords = coords + [0] * (d - len(coords))
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            coords = [-c for c in coords]
            den = -den
        g = den
        for c in coords:
            g = math.gcd(g, c)
            if g == 1:
                break
        if g > 1:
            coords = [c // g for c in coords]
            den //= g
        self.field = field
        self.coords = tuple(coords)
        self.den = den

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*t^{i}" if i > 1 else f"{c}*t")
        body = " + ".join(terms) or "0"
        return f"({body})/{self.den}" if self.den != 1 else body

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coords == o.coords and self.den == o.den

    def __hash__(self):
        return hash((self.field.conductor, self.field.subfield, self.coords, self.den))

    def __bool__(self):
        return any(self.coords)

    def is_zero(self):
        return not any(self.coords)

    def is_rational(self):
        return not any(self.coords[1:])

    def rational(self):
        if not self.is_rational():
            raise FieldError("element is not rational")
        return Fraction(self.coords[0], self.den)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return FieldElement(self.field, [a + b for a, b in zip(self.coords, o.coords)], self.den)
        return FieldElement(
            self.field, [a * o.den + b * self.den for a, b in zip(self.coords, o.coords)], self.den * o.den
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords], self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement(self.field, [a * other for a in self.coords], self.den)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._mul_coords(self.coords, o.coords), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        F = self.field
        if self.is_rational():
            return F(Fraction(self.den, self.coords[0]))
        # x^-1 = (product of the other conjugates) / N(x)
        prod = F.one
        for a in F.classes[1:]:
            prod = prod * galois_apply(F, a, self)
        nrm = (prod * self).rational()
        return prod * Fraction(nrm.denominator, nrm.numerator)

    def __truediv__(self, other):
        if isinstance(other, int):
            return FieldElement(self.field, self.coords, self.den * other)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse() if not isinstance(other, FieldElement) else other * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def coordinate_poly(self):
        return list(self.coords)

    def eval_interval(self, a):
        """Interval value of sigma_a(self); the caller sets ``iv.prec``."""
        F = self.field
        x = F._embedding_interval(a)
        acc = iv.mpf(0)
        for c in reversed(self.coords):
            acc = acc * x + c
        return acc / self.den

    def eval_mp(self, a):
        F = self.field
        x = F.embedding_value_mp(a)
        acc = mpmath.mpf(0)
        for c in reversed(self.coords):
            acc = acc * x + c
        return acc / self.den


# -- operations ---------------------------------------------------------


def theta(field, j):
    """theta_j = zeta^j + zeta^-j in the power basis of theta_1, for 1 <= j <= n/2."""
    if field.subfield:
        raise FieldError("theta_j needs the full real field")
    if not isinstance(j, int) or not 1 <= j <= field.conductor // 2:
        raise FieldError(f"index {j!r} out of range 1..{field.conductor // 2}")
    return field.theta_any(j)


def galois_apply(field, a, x):
    """sigma_a(x) for a invertible modulo the conductor."""
    a = field.class_of(a)
    if a == 1 or field.degree == 1:
        return x
    cols = field._galois_matrix(a)
    d = field.degree
    out = [0] * d
    for c, col in zip(x.coords, cols):
        if c:
            for i in range(d):
                out[i] += c * col[i]
    return FieldElement(field, out, x.den)


def conjugates(field, x):
    return [galois_apply(field, a, x) for a in field.classes]


def norm(field, x):
    """Absolute norm N_{K/Q}(x) as a Fraction: the product over the Galois orbit."""
    if x.is_rational():
        return x.rational() ** field.degree
    prod = x
    for a in field.classes[1:]:
        prod = prod * galois_apply(field, a, x)
    return prod.rational()


def trace(field, x):
    total = field.zero
    for a in field.classes:
        total = total + galois_apply(field, a, x)
    return total.rational()


def embedding_signs(field, x, start_bits=START_PREC_BITS):
    """Signs (+1/-1) of x under the real embeddings, ordered as ``field.classes``.

    Interval evaluation with precision doubling until every interval excludes 0.
    """
    if x.is_zero():
        raise FieldError("signs of zero are undefined")
    bits = start_bits
    signs = [0] * field.degree
    while True:
        with _iv_precision(bits):
            for i, a in enumerate(field.classes):
                if signs[i]:
                    continue
                val = x.eval_interval(a)
                if val.a > 0:
                    signs[i] = 1
                elif val.b < 0:
                    signs[i] = -1
        if all(signs):
            return tuple(signs)
        bits *= 2


# -- primes -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PrimeAboveQ:
    """An unramified prime ideal (q, g(gen)) of the ring of integers."""

    field: RealCyclotomicField
    rational_prime: int
    residue_degree: int
    factor_index: int
    local_factor: tuple
    residue_field: gfq.ResidueField = dc_field(repr=False)

    @property
    def norm(self):
        return self.rational_prime**self.residue_degree

    def __repr__(self):
        return (
            f"PrimeAboveQ(q={self.rational_prime}, f={self.residue_degree}, "
            f"index={self.factor_index}, g={self.local_factor})"
        )

    def __eq__(self, other):
        return (
            isinstance(other, PrimeAboveQ)
            and self.field is other.field
            and self.rational_prime == other.rational_prime
            and self.local_factor == other.local_factor
        )

    def __hash__(self):
        return hash((self.field.conductor, self.field.subfield, self.rational_prime, self.local_factor))

    def reduction(self, x):
        return reduce(x, self)


@dataclass(frozen=True)
class ResidueElement:
    """An element of the residue field F_q[y]/(g) attached to a prime."""

    value: tuple
    parent: PrimeAboveQ = dc_field(compare=False, hash=False, repr=False)

    @property
    def _rf(self):
        return self.parent.residue_field

    def _wrap(self, v):
        return ResidueElement(v, self.parent)

    def _val(self, other):
        if isinstance(other, ResidueElement):
            return other.value
        return self._rf.reduce((int(other),))

    def __add__(self, other):
        return self._wrap(self._rf.add(self.value, self._val(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self._rf.sub(self.value, self._val(other)))

    def __rsub__(self, other):
        return self._wrap(self._rf.sub(self._val(other), self.value))

    def __neg__(self):
        return self._wrap(self._rf.neg(self.value))

    def __mul__(self, other):
        return self._wrap(self._rf.mul(self.value, self._val(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._wrap(self._rf.mul(self.value, self._rf.inv(self._val(other))))

    def __pow__(self, e):
        return self._wrap(self._rf.pow(self.value, e))

    def __bool__(self):
        return bool(self.value)

    def is_zero(self):
        return not self.value

    def is_square(self):
        return self._rf.is_square(self.value)

    def in_prime_field(self):
        return len(self.value) <= 1


def galois_order_of(field, q):
    """Residue degree of an unramified q: the order of q in (Z/n)^x / H."""
    n = field.conductor
    hset = set(field.hgroup)
    x = q % n
    f = 1
    while x not in hset:
        x = x * q % n
        f += 1
    return f


def split_prime(field, q):
    """Primes of the field above an unramified rational prime q, in canonical order."""
    if not is_prime(q):
        raise FieldError(f"{q} is not prime")
    if field.conductor % q == 0:
        raise RamifiedPrimeError(f"{q} ramifies in {field!r}; use val_at_p for the prime above it")
    f = galois_order_of(field, q)
    factors = gfq.equal_degree_factor(field.min_poly, f, q)
    if sum(gfq.degree(g) for g in factors) != field.degree:
        raise ArithmeticError("factor degrees do not add up to the field degree")
    return [
        PrimeAboveQ(field, q, f, i, g, gfq.ResidueField(q, g))
        for i, g in enumerate(factors)
    ]


def reduce(x, prime):
    """Image of x in the residue field of ``prime``."""
    q = prime.rational_prime
    if x.den % q == 0:
        raise FieldError(f"denominator {x.den} is divisible by {q}")
    rf = prime.residue_field
    val = rf.reduce(x.coords)
    if x.den != 1:
        val = gfq.scale(val, pow(x.den, -1, q), q)
    return ResidueElement(val, prime)


def residue_norm_to_prime_field(r):
    """Norm from F_{q^f} down to F_q, as an integer in [1, q)."""
    if r.is_zero():
        raise FieldError("norm of zero residue")
    rf = r.parent.residue_field
    q, f = rf.q, rf.f
    val = rf.pow(r.value, (q**f - 1) // (q - 1))
    if len(val) > 1:
        raise ArithmeticError("residue norm left the prime field")
    return val[0] if val else 0


def val_at_p(field, x):
    """Valuation at the unique (totally ramified) prime above the conductor p."""
    p = field.conductor
    if not is_prime(p):
        raise FieldError("val_at_p needs a prime conductor")
    if x.is_zero():
        raise FieldError("valuation of zero")
    n = norm(field, FieldElement(field, x.coords, 1))
    return ord_p(n.numerator, p) - ord_p(n.denominator, p) - field.degree * _ord_or_zero(x.den, p)


def _ord_or_zero(n, p):
    return ord_p(n, p) if n % p == 0 else 0


def _ring_mul(a, b, g, modulus):
    f = len(g) - 1
    prod = [0] * (2 * f - 1 if f else 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, f - 1, -1):
        c = prod[k]
        if c:
            for i in range(f + 1):
                prod[k - f + i] -= c * g[i]
    return [v % modulus for v in prod[:f]]


def _ring_eval(coeffs, r, g, modulus):
    f = len(g) - 1
    acc = [0] * f
    for c in reversed(coeffs):
        acc = _ring_mul(acc, r, g, modulus)
        acc[0] = (acc[0] + c) % modulus
    return acc


def _hensel_root(field, prime, k):
    """Root of min_poly in the Galois ring (Z/q^k)[y]/(g~) lifting y mod (q, g)."""
    q = prime.rational_prime
    g = list(prime.local_factor)
    f = len(g) - 1
    M = q**k
    P = list(field.min_poly)
    dP = [i * P[i] for i in range(1, len(P))]
    rf = prime.residue_field
    r = [0] * f
    if f == 1:
        r[0] = (-g[0]) % M
    else:
        r[1] = 1
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        mod_p = q**prec
        fr = _ring_eval(P, r, g, mod_p)
        dfr = _ring_eval(dP, r, g, mod_p)
        inv0 = rf.inv(gfq.trim([c % q for c in dfr]))
        w = list(inv0) + [0] * (f - len(inv0))
        wprec = 1
        while wprec < prec:
            wprec = min(2 * wprec, prec)
            mw = q**wprec
            zw = _ring_mul(dfr, w, g, mw)
            two_minus = [(-c) % mw for c in zw]
            two_minus[0] = (two_minus[0] + 2) % mw
            w = _ring_mul(w, two_minus, g, mw)
        step = _ring_mul(fr, w, g, mod_p)
        r = [(a - b) % mod_p for a, b in zip(r, step)]
    return r


def val_at_unramified_prime(x, prime, start_k=8):
    """Exact valuation of an integral x at an unramified prime via Hensel lifting."""
    if x.is_zero():
        raise FieldError("valuation of zero")
    if x.den != 1:
        raise FieldError("val_at_unramified_prime needs an integral element")
    field = prime.field
    q = prime.rational_prime
    g = list(prime.local_factor)
    k = start_k
    while True:
        M = q**k
        r = _hensel_root(field, prime, k)
        img = _ring_eval(list(x.coords), r, g, M)
        v = min((ord_p(c, q) if c else k) for c in img)
        if v < k:
            return v
        k *= 2


def valuation(x, prime):
    """Valuation at an unramified prime for any nonzero x (denominators allowed)."""
    q = prime.rational_prime
    v = val_at_unramified_prime(FieldElement(prime.field, x.coords, 1), prime)
    return v - _ord_or_zero(x.den, q)
