"""Norm bounds over subgroups and coset subsets of the Galois group, and the residual unit checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .cyclotomic import build_field, galois_apply, norm, split_prime, theta
from .modularity import find_witness, norm_vector, proper_subsets
from .units import UnitLattice, totally_positive_basis

SUPPORTED_PRIMES = (5, 7, 11, 13)
BASES = ("lattice", "theta")


class BoundsError(ValueError):
    pass


@dataclass
class BoundReport:
    p: int
    subgroup: tuple
    cosets: tuple
    subset: tuple
    values: list = dc_field(default_factory=list)
    gcd: int = 0

    @property
    def subgroup_order(self):
        return len(self.subgroup)

    @property
    def subset_mask(self):
        return sum(1 << self.cosets.index(t) for t in self.subset)

    def to_dict(self):
        return {
            "p": self.p,
            "subgroup": list(self.subgroup),
            "cosets": list(self.cosets),
            "subset": list(self.subset),
            "values": [str(v) for v in self.values],
            "gcd": self.gcd,
        }


def cyclic_galois_group(field):
    """(generator, [g^0, g^1, ...]) as classes modulo +-1."""
    g = field.galois_generator()
    n = field.conductor
    elems = []
    x = 1
    for _ in range(field.degree):
        elems.append(field.class_of(x))
        x = x * g % n
    return g, elems


def subgroups(field):
    """(D, T) pairs: each subgroup with its coset representatives g^0, ..., g^(m-1)."""
    _g, elems = cyclic_galois_group(field)
    order = len(elems)
    out = []
    for m in range(1, order + 1):
        if order % m:
            continue
        D = tuple(sorted({elems[(m * i) % order] for i in range(order // m)}))
        T = tuple(elems[:m])
        out.append((D, T))
    out.sort(key=lambda dt: (len(dt[0]), dt[1]))
    return out


def compose(field, a, b):
    return field.class_of(a * b)


def bound_value(field, u, D, subset):
    """Norm of (prod over tau in subset, sigma in D of u^(sigma tau)) - 1."""
    prod = field.one
    for tau in subset:
        for sigma in D:
            prod = prod * galois_apply(field, compose(field, sigma, tau), u)
    val = norm(field, prod - 1)
    if val.denominator != 1:
        raise BoundsError("non-integral norm")
    return val.numerator


def _nonempty_proper(T):
    out = []
    for r in range(1, len(T)):
        for mask in range(1 << len(T)):
            if bin(mask).count("1") == r:
                out.append(tuple(T[i] for i in range(len(T)) if mask >> i & 1))
    out.sort(key=lambda s: sum(1 << T.index(t) for t in s))
    return out


def tp_generators(p, basis="lattice"):
    """A basis of the totally positive units.

    "lattice" uses the reduced basis from the unit lattice; "theta" uses the
    squares theta_j^2, j = 1..d-1, which generate the squares of all units.
    """
    field = build_field(p)
    if basis == "lattice":
        return field, totally_positive_basis(UnitLattice.build(field))
    if basis == "theta":
        return field, [theta(field, j) ** 2 for j in range(1, field.degree)]
    raise BoundsError(f"unknown basis {basis!r}; expected one of {BASES}")


def bound_products(p, units=None, basis="lattice"):
    """BoundReports for every subgroup D and every non-empty proper subset of its cosets."""
    if p not in SUPPORTED_PRIMES:
        raise BoundsError(f"p must be one of {SUPPORTED_PRIMES}, got {p!r}")
    field, tp = tp_generators(p, basis)
    if units is not None:
        tp = units
    reports = []
    for D, T in subgroups(field):
        for subset in _nonempty_proper(T):
            vals = [bound_value(field, u, D, subset) for u in tp]
            g = 0
            for v in vals:
                g = math.gcd(g, v)
            reports.append(BoundReport(p, D, T, subset, vals, g))
    return reports


def attained_values(reports):
    return sorted({r.gcd for r in reports})


def residual_pair_check(p, ell):
    """Every non-empty proper subset of the primes above ell has a totally positive witness."""
    field, tp = tp_generators(p)
    primes = split_prime(field, ell)
    if len(primes) == 1:
        return True
    vectors = [norm_vector(u, primes) for u in tp]
    for S in proper_subsets(len(primes)):
        if find_witness(vectors, S, allow_pairs=False, modulus=ell) is None:
            return False
    return True
