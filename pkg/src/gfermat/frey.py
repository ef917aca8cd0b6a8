"""Descent quantities beta_j and the Frey curves Y^2 = X(X - u)(X + v) over real cyclotomic fields."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import (
    FieldError,
    build_field,
    galois_apply,
    norm,
    ord_p,
    reduce,
    split_prime,
    theta,
    val_at_p,
    valuation,
)

NONDIVIDING = "nondividing"
DIVIDING = "dividing"
CASES = (NONDIVIDING, DIVIDING)


class DescentError(ValueError):
    pass


@dataclass(frozen=True)
class DescentInstance:
    """Coprime (a, b) of opposite parity with the 2-adic and p-adic shape of a putative solution."""

    p: int
    a: int
    b: int
    ell: int | None = None
    case: str = NONDIVIDING
    n: int = 0
    kappa: int = 0

    def __post_init__(self):
        if self.case not in CASES:
            raise DescentError(f"case must be one of {CASES}")
        if math.gcd(self.a, self.b) != 1:
            raise DescentError("a and b must be coprime")
        if (self.a + self.b) % 2 == 0:
            raise DescentError("exactly one of a, b must be even")
        if self.case == NONDIVIDING and self.a % self.p == 0:
            raise DescentError("p divides a in the non-dividing case")
        if self.case == DIVIDING and self.a % self.p:
            raise DescentError("p must divide a in the dividing case")

    def check_shape(self):
        """a = 2^(ell n) * p^(kappa ell - 1) * (odd, p-free) as required by the descent."""
        if self.ell is None:
            raise DescentError("exponent ell is required")
        if self.a == 0 or ord_p(self.a, 2) != self.ell * self.n:
            raise DescentError(f"ord_2(a) must be ell*n = {self.ell * self.n}")
        if self.case == DIVIDING and ord_p(self.a, self.p) != self.kappa * self.ell - 1:
            raise DescentError(f"ord_p(a) must be kappa*ell - 1 = {self.kappa * self.ell - 1}")
        return True

    @property
    def delta(self):
        """(kappa ell - 1)(p - 1) - 1, the exponent of the prime above p in w."""
        return (self.kappa * self.ell - 1) * (self.p - 1) - 1


def synthetic_instance(p, case, ell, n=1, kappa=1, rng=None, bound=50):
    """A random DescentInstance with a = 2^(ell n) [p^(kappa ell - 1)] * c and b odd."""
    rng = rng or random.Random(0)
    while True:
        c = rng.randrange(1, bound) * 2 + 1
        if c % p == 0:
            continue
        a = 2 ** (ell * n) * c
        if case == DIVIDING:
            a *= p ** (kappa * ell - 1)
        a *= rng.choice((1, -1))
        b = rng.randrange(-bound, bound) * 2 + 1
        if math.gcd(a, b) == 1:
            return DescentInstance(p, a, b, ell, case, n, kappa if case == DIVIDING else 0)


def beta(field, j, a, b):
    """beta_j = (theta_j + 2) a^2 + (theta_j - 2) b^2."""
    t = theta(field, j)
    return (t + 2) * (a * a) + (t - 2) * (b * b)


def gaussian_pow(z, e):
    """(x + y i)^e for a Gaussian integer given as a pair."""
    rx, ry = 1, 0
    bx, by = z
    while e:
        if e & 1:
            rx, ry = rx * bx - ry * by, rx * by + ry * bx
        bx, by = bx * bx - by * by, 2 * bx * by
        e >>= 1
    return rx, ry


def check_factor_identity(p, a, b):
    """a * prod_j beta_j == ((a + b i)^p + (a - b i)^p) / 2, evaluated exactly."""
    field = build_field(p)
    prod = field(a)
    for j in range(1, (p - 1) // 2 + 1):
        prod = prod * beta(field, j, a, b)
    if not prod.is_rational():
        return False
    re, _ = gaussian_pow((a, b), p)
    return prod.rational() == re


def beta_valuations(inst):
    """([ord_p(beta_j) for each j], ord_p(a)) at the prime above p."""
    field = build_field(inst.p)
    vals = []
    for j in range(1, (inst.p - 1) // 2 + 1):
        bj = beta(field, j, inst.a, inst.b)
        vals.append(val_at_p(field, bj) if bj else None)
    return vals, (ord_p(inst.a, inst.p) if inst.a else None)


def involution_class(field):
    """The class a of order 2 in the Galois group (p = 1 mod 4), or None."""
    for a in field.classes:
        if a != 1 and field.class_of(a * a) == 1:
            return a
    return None


def tau_pairs(p):
    """Pairs (j, k), j < k, with tau(theta_j) = theta_k."""
    field = build_field(p)
    t = involution_class(field)
    if t is None:
        return []
    out = []
    for j in range(1, (p - 1) // 2 + 1):
        k = field.class_of(j * t)
        if j < k:
            out.append((j, k))
    return out


@dataclass(frozen=True)
class FreyTriple:
    """u + v + w = 0, all in the full real field K."""

    field: object
    u: object
    v: object
    w: object
    j_idx: int
    k_idx: int
    twisted: bool = False
    case: str = NONDIVIDING

    @property
    def descends(self):
        """Whether the curve is defined over the degree (p-1)/4 subfield."""
        return self.twisted or (self.case == DIVIDING and self.field.conductor % 4 == 1 and _is_tau_pair(self))

    def model(self):
        """(a2, a4) of Y^2 = X^3 + a2 X^2 + a4 X."""
        return self.v - self.u, -(self.u * self.v)


def _is_tau_pair(t):
    return (min(t.j_idx, t.k_idx), max(t.j_idx, t.k_idx)) in tau_pairs(t.field.conductor)


def frey_triple_from_ab(p, a, b, j, k, case=NONDIVIDING, twisted=False):
    """The triple for integers (a, b) without any shape checks (also used for residue pairs)."""
    field = build_field(p)
    h = (p - 1) // 2
    if not (1 <= j <= h and 1 <= k <= h) or j == k:
        raise DescentError(f"need 1 <= j != k <= {h}")
    tj, tk = theta(field, j), theta(field, k)
    bj, bk = beta(field, j, a, b), beta(field, k, a, b)
    a2 = a * a
    if twisted:
        if p % 4 != 1:
            raise DescentError("the twist needs p = 1 (mod 4)")
        if (min(j, k), max(j, k)) not in tau_pairs(p):
            raise DescentError(f"tau(theta_{j}) != theta_{k}")
        if case == DIVIDING:
            # in the dividing case the curve itself descends; no twist is applied
            twisted = False
        else:
            u = (tk - 2) * bj
            v = -((tj - 2) * bk)
            w = (tj - tk) * (4 * a2)
            return FreyTriple(field, u, v, w, j, k, True, case)
    if case == NONDIVIDING:
        u = bj
        v = -((tj - 2) / (tk - 2) * bk)
        w = (tj - tk) / (tk - 2) * (4 * a2)
    elif case == DIVIDING:
        u = bj / (tj - 2)
        v = -(bk / (tk - 2))
        w = (tj - tk) / ((tj - 2) * (tk - 2)) * (4 * a2)
    else:
        raise DescentError(f"unknown case {case!r}")
    return FreyTriple(field, u, v, w, j, k, twisted, case)


def frey_triple(inst, j, k, twisted=False):
    return frey_triple_from_ab(inst.p, inst.a, inst.b, j, k, inst.case, twisted)


@dataclass(frozen=True)
class CurveInvariants:
    c4: object
    c6: object
    delta: object
    j_inv: object = None

    @property
    def singular(self):
        return self.delta.is_zero()


def curve_invariants(t):
    u, v, w = t.u, t.v, t.w
    c4 = (u * u - v * w) * 16
    if c4 != (v * v - w * u) * 16 or c4 != (w * w - u * v) * 16:
        raise ArithmeticError("c4 expressions disagree; u + v + w != 0")
    c6 = (u - v) * (v - w) * (w - u) * (-32)
    uvw = u * v * w
    delta = uvw * uvw * 16
    if c4 * c4 * c4 - c6 * c6 != delta * 1728:
        raise ArithmeticError("c4^3 - c6^2 != 1728 Delta")
    j_inv = None if delta.is_zero() else c4 * c4 * c4 / delta
    return CurveInvariants(c4, c6, delta, j_inv)


def _descend(field, x):
    sub = build_field(field.conductor, subfield=True)
    return sub, sub.from_ambient(x)


@dataclass
class ShapeReport:
    """Observed versus expected valuations of the discriminant."""

    ord_two: list
    expected_two: int
    ord_p: int
    expected_p: int
    ord_B: int | None = None
    expected_B: int | None = None
    c4_square: bool = False
    gamma_unramified: bool = False

    @property
    def ok(self):
        good = all(v == self.expected_two for v in self.ord_two)
        good = good and self.ord_p == self.expected_p
        if self.expected_B is not None:
            good = good and self.ord_B == self.expected_B
        return good and self.c4_square and self.gamma_unramified

    def to_dict(self):
        return dict(self.__dict__, ok=self.ok)


def check_conductor_shape(inst, t):
    """Valuations of Delta/2^12 above 2, at the prime above p (and above p in the subfield)."""
    inst.check_shape()
    field = t.field
    p = inst.p
    inv = curve_invariants(t)
    if inv.singular:
        raise DescentError("singular model")
    D = inv.delta / 4096
    two_primes = split_prime(field, 2)
    ord_two = [valuation(D, P) for P in two_primes]
    ord_pp = val_at_p(field, D)
    report = ShapeReport(ord_two, 4 * inst.ell * inst.n - 4, ord_pp, 0)
    if inst.case == DIVIDING:
        report.expected_p = 2 * inst.delta
    elif t.twisted:
        report.expected_p = 6
    if t.twisted or t.descends:
        sub, Dsub = _descend(field, D)
        report.ord_B = val_at_p(sub, Dsub)
        report.expected_B = 3 if inst.case == NONDIVIDING else inst.delta
    # multiplicative reduction at 2: c4/16 = (t b^2)^2 and 4 t b^2 gamma = 1 to high 2-adic order
    t0 = frey_triple_from_ab(p, 0, 1, t.j_idx, t.k_idx, inst.case, t.twisted).u
    tb2 = t0 * (inst.b * inst.b)
    gamma = -(inv.c4 / inv.c6)
    sq_diff = inv.c4 / 16 - tb2 * tb2
    ram_diff = tb2 * gamma * 4 - 1
    report.c4_square = all(sq_diff.is_zero() or valuation(sq_diff, P) >= 2 * inst.ell for P in two_primes)
    report.gamma_unramified = all(ram_diff.is_zero() or valuation(ram_diff, P) >= 3 for P in two_primes)
    return report


def j_residue_check(p=13):
    """For each tau-pair (j, k): whether theta_j^2 theta_k^2 / (theta_j - theta_k)^2 mod 2 avoids F_2.

    Computed in the subfield (2 is inert there for p = 13) and cross-checked in
    the full field.  Returns {(j, k): bool}.
    """
    field = build_field(p)
    out = {}
    for j, k in tau_pairs(p):
        tj, tk = theta(field, j), theta(field, k)
        x = (tj * tk) * (tj * tk) / ((tj - tk) * (tj - tk))
        sub, xs = _descend(field, x)
        verdicts = []
        for F, y in ((sub, xs), (field, x)):
            for P in split_prime(F, 2):
                r = reduce(y, P)
                if r.is_zero():
                    raise ArithmeticError("residue is zero")
                if r ** (P.norm) != r:
                    raise ArithmeticError("Frobenius check failed")
                verdicts.append(r * r != r)
        if len(set(verdicts)) != 1:
            raise ArithmeticError("subfield and full-field residues disagree")
        out[(j, k)] = verdicts[0]
    return out


def j_residue_check_p13():
    return all(j_residue_check(13).values())


def theta_norms(p):
    """|N(theta_j)|, |N(theta_j + 2)|, |N(theta_j - 2)| and |N(theta_j - theta_k)| for j < k."""
    field = build_field(p)
    h = (p - 1) // 2
    th = [theta(field, j) for j in range(1, h + 1)]
    out = {}
    for j, t in enumerate(th, 1):
        out[("theta", j)] = abs(norm(field, t))
        out[("theta+2", j)] = abs(norm(field, t + 2))
        out[("theta-2", j)] = abs(norm(field, t - 2))
        for k in range(j + 1, h + 1):
            out[("diff", j, k)] = abs(norm(field, t - th[k - 1]))
    return out


def scaled_invariants_agree(p, a, b, lam, j, k, case=NONDIVIDING):
    """Scaling (a, b) by lam scales u, v, w by lam^2, Delta by lam^12 and fixes j."""
    t1 = frey_triple_from_ab(p, a, b, j, k, case)
    t2 = frey_triple_from_ab(p, lam * a, lam * b, j, k, case)
    i1, i2 = curve_invariants(t1), curve_invariants(t2)
    l2 = lam * lam
    return (
        t2.u == t1.u * l2
        and t2.v == t1.v * l2
        and i2.delta == i1.delta * Fraction(l2) ** 6
        and i1.j_inv == i2.j_inv
    )


__all__ = [
    "CASES",
    "CurveInvariants",
    "DIVIDING",
    "DescentError",
    "DescentInstance",
    "FreyTriple",
    "NONDIVIDING",
    "ShapeReport",
    "beta",
    "beta_valuations",
    "check_conductor_shape",
    "check_factor_identity",
    "curve_invariants",
    "frey_triple",
    "frey_triple_from_ab",
    "galois_apply",
    "involution_class",
    "j_residue_check",
    "j_residue_check_p13",
    "theta_norms",
    "scaled_invariants_agree",
    "synthetic_instance",
    "tau_pairs",
]
