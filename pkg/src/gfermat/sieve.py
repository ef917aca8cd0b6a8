"""Elimination sieve comparing Frey-curve reductions with eigenform data over residue grids."""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np
import sympy

from .cyclotomic import build_field, reduce, split_prime
from .frey import DIVIDING, NONDIVIDING, frey_triple_from_ab, tau_pairs
from .ideals import Ideal, MonogenicOrder
from .kernels import count_points_batch, field_tables

GOOD = "good"
SPLIT = "split"
NONSPLIT = "nonsplit"

DEFAULT_S = {
    (7, DIVIDING): (3,),
    (11, NONDIVIDING): (23, 43),
    (11, DIVIDING): (23, 43),
    (13, NONDIVIDING): (79, 103),
    (13, DIVIDING): (3, 5, 31, 47),
}

DEFAULT_JK = {("K", 5): (1, 2), ("K", 7): (1, 2), ("K", 11): (1, 2), ("K", 13): (1, 2), ("Kprime", 13): (1, 5)}


class SieveError(ValueError):
    pass


def residue_pairs(q):
    """A_q: all (eta, mu) modulo q except (0, 0)."""
    return [(e, m) for e in range(q) for m in range(q) if (e, m) != (0, 0)]


def square_classes(q):
    """Counter of (eta^2, mu^2) mod q over A_q; the curve only depends on these."""
    return Counter(((e * e) % q, (m * m) % q) for e, m in residue_pairs(q))


@dataclass
class FreyFamily:
    """Coefficients of Y^2 = X^3 + a2 X^2 + a4 X as quadratic forms in (eta^2, mu^2).

    a2 = s A1 + t A2 and a4 = s^2 C1 + s t C2 + t^2 C3 with s = eta^2, t = mu^2,
    all constants in the sieve field.
    """

    p: int
    case: str
    j: int
    k: int
    field: object
    consts: tuple

    @classmethod
    def build(cls, p, case, j, k, variant="K"):
        twisted = variant == "Kprime" and case == NONDIVIDING
        if variant == "Kprime" and (min(j, k), max(j, k)) not in tau_pairs(p):
            raise SieveError(f"(j, k) = ({j}, {k}) is not exchanged by the involution")
        t10 = frey_triple_from_ab(p, 1, 0, j, k, case, twisted)
        t01 = frey_triple_from_ab(p, 0, 1, j, k, case, twisted)
        U1, V1, U2, V2 = t10.u, t10.v, t01.u, t01.v
        consts = (V1 - U1, V2 - U2, -(U1 * V1), -(U1 * V2 + U2 * V1), -(U2 * V2))
        if variant == "Kprime":
            sub = build_field(p, subfield=True)
            consts = tuple(sub.from_ambient(c) for c in consts)
            fld = sub
        else:
            fld = build_field(p)
        return cls(p, case, j, k, fld, consts)

    def model_at(self, eta, mu):
        s, t = eta * eta, mu * mu
        A1, A2, C1, C2, C3 = self.consts
        return A1 * s + A2 * t, C1 * (s * s) + C2 * (s * t) + C3 * (t * t)


@dataclass
class Reduction:
    kind: str
    count: int = 0
    trace: int = 0


def _classify_batch(tables, a2s, a4s, use_numba=None):
    """Reductions for parallel lists of encoded (a2, a4)."""
    T = tables
    out = [None] * len(a2s)
    good_idx = []
    for i, (a2, a4) in enumerate(zip(a2s, a4s)):
        disc = T.mul(T.mul(T.mul(a4, a4), T.scalar(16)), T.sub(T.mul(a2, a2), T.mul(T.scalar(4), a4)))
        if disc != 0:
            good_idx.append(i)
            continue
        c4 = T.mul(T.scalar(16), T.sub(T.mul(a2, a2), T.mul(T.scalar(3), a4)))
        if c4 == 0:
            raise SieveError("additive reduction encountered; q must not divide 2p")
        c6 = T.add(T.mul(T.scalar(-64), T.mul(a2, T.mul(a2, a2))), T.mul(T.scalar(288), T.mul(a2, a4)))
        gamma = T.neg(T.mul(c4, T.inv(c6)))
        out[i] = Reduction(SPLIT if T.is_square(gamma) else NONSPLIT)
    if good_idx:
        curves = np.array([[0, a2s[i], 0, a4s[i], 0] for i in good_idx], dtype=np.int64)
        counts = count_points_batch(T, curves, use_numba)
        for i, n in zip(good_idx, counts):
            out[i] = Reduction(GOOD, int(n), T.order + 1 - int(n))
    return out


def frey_reduction(family, pair, prime, use_numba=None):
    """Reduction type (and trace when good) of E_(eta, mu) at ``prime``."""
    q = prime.rational_prime
    if q == 2 or family.p % q == 0:
        raise SieveError(f"q = {q} divides 2p")
    a2, a4 = family.model_at(*pair)
    T = field_tables(q, prime.local_factor)
    r2, r4 = reduce(a2, prime), reduce(a4, prime)
    return _classify_batch(T, [T.encode(r2.value)], [T.encode(r4.value)], use_numba)[0]


def _local_constants(family, prime):
    T = field_tables(prime.rational_prime, prime.local_factor)
    return T, [T.encode(reduce(c, prime).value) for c in family.consts]


def _reductions_for_q(family, q, use_numba=None):
    """{(s, t): [Reduction per prime above q]} over the square classes of A_q."""
    primes = split_prime(family.field, q)
    classes = sorted(square_classes(q))
    per_prime = []
    for P in primes:
        T, (A1, A2, C1, C2, C3) = _local_constants(family, P)
        a2s, a4s = [], []
        for s, t in classes:
            ss, tt = T.scalar(s), T.scalar(t)
            a2s.append(T.add(T.mul(ss, A1), T.mul(tt, A2)))
            a4 = T.add(T.mul(T.mul(ss, ss), C1), T.mul(T.mul(ss, tt), C2))
            a4s.append(T.add(a4, T.mul(T.mul(tt, tt), C3)))
        per_prime.append(_classify_batch(T, a2s, a4s, use_numba))
    return primes, classes, per_prime


def _b_frak(red, norm_q, a_f, order):
    """B_frak as an element of the Hecke order (tuple of coordinates)."""
    if red.kind == GOOD:
        return order.sub(order.scalar(red.trace), a_f)
    if red.kind == SPLIT:
        return order.sub(order.scalar(norm_q + 1), a_f)
    return order.add(order.scalar(norm_q + 1), a_f)


def _order_for(f):
    return MonogenicOrder(f.hecke_poly)


def _a_f(f, order, q, idx):
    return order.element(f.eigenvalue(q, idx))


def b_value(f, q, pair, family=None, use_numba=None):
    """Generators B_frak(f, eta, mu) for each prime above q, and the ideal they generate."""
    family = family or family_for(f)
    order = _order_for(f)
    gens = []
    for P in split_prime(family.field, q):
        red = frey_reduction(family, pair, P, use_numba)
        gens.append(_b_frak(red, P.norm, _a_f(f, order, q, P.factor_index), order))
    return gens, Ideal.from_generators(order, gens)


@dataclass
class QResult:
    q: int
    zero: bool
    norm: int
    factored: dict
    ideal_basis: list = dc_field(default_factory=list)
    class_count: int = 0
    split_nodes: int = 0

    def to_dict(self):
        return {
            "q": self.q,
            "zero": self.zero,
            "norm": str(self.norm),
            "factored": {str(k): v for k, v in sorted(self.factored.items())},
            "class_count": self.class_count,
            "split_nodes": self.split_nodes,
        }


def _factor(n):
    if n == 0:
        return {}
    return {int(k): int(v) for k, v in sympy.factorint(abs(n)).items()}


def _merge(acc, fac, mult=1):
    for k, v in fac.items():
        acc[k] = acc.get(k, 0) + v * mult


def b_q(f, q, family=None, use_numba=None):
    """B_q(f) = q * prod over A_q of B_q(f, eta, mu); returns a QResult."""
    family = family or family_for(f)
    if q == 2 or family.p % q == 0:
        raise SieveError(f"q = {q} divides 2p")
    order = _order_for(f)
    primes, classes, per_prime = _reductions_for_q(family, q, use_numba)
    mult = square_classes(q)
    a_fs = [_a_f(f, order, q, P.factor_index) for P in primes]
    splits = sum(1 for reds in per_prime for r in reds if r.kind == SPLIT)
    if f.rational:
        factored = {q: 1}
        zero = False
        value = q
        for ci, cls in enumerate(classes):
            g = 0
            for P, reds, af in zip(primes, per_prime, a_fs):
                g = math.gcd(g, abs(_b_frak(reds[ci], P.norm, af, order)[0]))
            if g == 0:
                zero = True
                break
            value *= g ** mult[cls]
            _merge(factored, _factor(g), mult[cls])
        if zero:
            return QResult(q, True, 0, {}, [], len(classes), splits)
        return QResult(q, False, value, factored, [[value]], len(classes), splits)
    ideal = Ideal.from_generators(order, [order.scalar(q)])
    for ci, cls in enumerate(classes):
        gens = [_b_frak(reds[ci], P.norm, af, order) for P, reds, af in zip(primes, per_prime, a_fs)]
        I = Ideal.from_generators(order, gens)
        if I.is_zero():
            return QResult(q, True, 0, {}, [], len(classes), splits)
        for _ in range(mult[cls]):
            ideal = ideal * I
    nrm = ideal.norm()
    return QResult(q, False, nrm, _factor(nrm), [list(r) for r in ideal.basis], len(classes), splits)


@dataclass
class SieveReport:
    label: str
    p: int
    case: str
    j: int
    k: int
    variant: str
    S: tuple
    per_q: list
    b_s: int
    b_s_factored: dict
    surviving_exponents: list
    no_bound: bool = False
    hecke_discriminant: int = 0

    def to_dict(self):
        return {
            "label": self.label,
            "p": self.p,
            "case": self.case,
            "j": self.j,
            "k": self.k,
            "variant": self.variant,
            "S": list(self.S),
            "per_q": [r.to_dict() for r in self.per_q],
            "B_S": str(self.b_s),
            "B_S_factored": {str(k): v for k, v in sorted(self.b_s_factored.items())},
            "surviving_exponents": self.surviving_exponents,
            "no_bound": self.no_bound,
            "hecke_discriminant": str(self.hecke_discriminant),
        }


def format_factored(fac):
    if not fac:
        return "1"
    return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(fac.items()))


def family_for(f, case=None, j=None, k=None):
    if case is None:
        case = DIVIDING if f.variant == "Kprime" or f.level in ("2*p", "2*B") else NONDIVIDING
    if j is None or k is None:
        j, k = DEFAULT_JK[(f.variant, f.p)]
    return FreyFamily.build(f.p, case, j, k, f.variant)


def _bq_star(args):
    f, q, case, j, k, use_numba = args
    return b_q(f, q, family_for(f, case, j, k), use_numba)


def b_s(f, S, case=None, j=None, k=None, workers=1, use_numba=None):
    """B_S(f) = Norm(sum over q in S of B_q(f)) with the surviving exponents."""
    S = tuple(S)
    if not S:
        raise SieveError("S must be non-empty")
    family = family_for(f, case, j, k)
    for q in S:
        if q == 2 or f.p % q == 0:
            raise SieveError(f"q = {q} divides 2p")
    f.check_complete(S)
    if workers and workers > 1:
        args = [(f, q, family.case, family.j, family.k, use_numba) for q in S]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_q = list(pool.map(_bq_star, args))
    else:
        per_q = [b_q(f, q, family, use_numba) for q in S]
    nonzero = [r for r in per_q if not r.zero]
    if not nonzero:
        bs, fac = 0, {}
    elif f.rational:
        bs = 0
        for r in nonzero:
            bs = math.gcd(bs, r.norm)
        fac = _factor(bs)
    else:
        order = _order_for(f)
        total = order.zero_ideal()
        for r in nonzero:
            total = total + Ideal(order, r.ideal_basis)
        bs = total.norm()
        fac = _factor(bs)
    surviving = sorted(ell for ell in fac if ell >= 5 and ell != f.p)
    return SieveReport(
        f.label,
        f.p,
        family.case,
        family.j,
        family.k,
        f.variant,
        S,
        per_q,
        bs,
        fac,
        surviving,
        no_bound=bs == 0,
        hecke_discriminant=_hecke_discriminant(f.hecke_poly),
    )


def _hecke_discriminant(poly):
    if len(poly) == 2:
        return 1
    x = sympy.Symbol("x")
    return int(sympy.discriminant(sympy.Poly(list(reversed(poly)), x)))


def heuristic_success(q, d, r, c):
    """P_q ~ (1 - c^r / q^(d/2))^(q^2 - 1)."""
    if q < 3 or d < 1 or r < 1 or d % r:
        raise ValueError("need q >= 3, d >= 1 and r | d")
    return (1.0 - c**r / q ** (d / 2)) ** (q * q - 1)


def default_S(p, case):
    try:
        return DEFAULT_S[(p, case)]
    except KeyError:
        raise SieveError(f"no default prime set for p={p}, case={case}") from None


__all__ = [
    "DEFAULT_S",
    "FreyFamily",
    "QResult",
    "Reduction",
    "SieveError",
    "SieveReport",
    "b_q",
    "b_s",
    "b_value",
    "default_S",
    "format_factored",
    "frey_reduction",
    "heuristic_success",
    "residue_pairs",
    "square_classes",
]
