"""Cyclotomic units of real cyclotomic fields and their totally positive part.

For a conductor n the real cyclotomic units are, up to sign, the products

    h_E = prod over (d, a) of (2 sin(pi a / d)) ** E[d, a]

where d runs over divisors of n, 1 <= a < d/2 with gcd(a, d) = 1 (plus the
value 2 for d = 2), and E is an integer vector such that h_E is a unit and
lies in Q(zeta_n)^+.  Both conditions are linear: a valuation condition at
each prime dividing n, and a parity condition coming from the Galois group
of Q(zeta_4n)/Q(zeta_n) acting on the sines.  The admissible E form a
lattice; a basis of it yields generators of the full group of real
cyclotomic units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import mpmath

from .cyclotomic import (
    FieldElement,
    embedding_signs,
    galois_apply,
    norm,
    prime_factors,
    real_cyclotomic_field,
)
from .zlinalg import gf2_kernel, integer_kernel

MAX_CONDUCTOR = 100
LOG_RANK_TOL = mpmath.mpf("1e-10")


class UnitError(ValueError):
    pass


def chebyshev_unit(field, c):
    """sin(2 pi c / n) / sin(2 pi / n) as a polynomial in theta_1 (Chebyshev, second kind)."""
    t = field.gen
    prev, cur = field.zero, field.one
    for _ in range(c - 1):
        prev, cur = cur, t * cur - prev
    return cur


def _sine_variables(n):
    """Index set (d, a) of the sine factors 2 sin(pi a / d)."""
    out = []
    for d in range(2, n + 1):
        if n % d:
            continue
        if d == 2:
            out.append((2, 1))
            continue
        for a in range(1, (d + 1) // 2):
            if 2 * a < d and math.gcd(a, d) == 1:
                out.append((d, a))
    return out


def _chi4(c):
    return 1 if c % 4 == 1 else -1


def _lattice_constraints(n, variables):
    """Integer rows (valuations) and GF(2) rows (reality) cutting out admissible exponents."""
    int_rows = []
    for ell in prime_factors(n):
        big_k = 0
        m = n
        while m % ell == 0:
            m //= ell
            big_k += 1
        row = []
        for d, _a in variables:
            k = 0
            m = d
            while m % ell == 0:
                m //= ell
                k += 1
            is_power = m == 1 and k > 0
            row.append(ell ** (big_k - k) if is_power else 0)
        int_rows.append(row)
    parity_rows = []
    for t in range(4):
        c = 1 + n * t
        if c % 2 == 0 or c == 1:
            continue
        row = []
        for d, a in variables:
            eps = _chi4(c) * (-1) ** ((a * (c - 1) // d) % 2)
            row.append(1 if eps < 0 else 0)
        parity_rows.append(row)
    return int_rows, parity_rows


def admissible_exponent_basis(n):
    """Z-basis of exponent vectors E for which h_E is a real unit."""
    variables = _sine_variables(n)
    int_rows, parity_rows = _lattice_constraints(n, variables)
    m = len(variables)
    # parity rows become integer rows with a slack column: row . E + 2 s = 0
    rows = [r + [0] * len(parity_rows) for r in int_rows]
    for i, r in enumerate(parity_rows):
        slack = [0] * len(parity_rows)
        slack[i] = 2
        rows.append(r + slack)
    kernel = integer_kernel(rows, m + len(parity_rows)) if rows else integer_kernel([], m)
    basis = [v[:m] for v in kernel]
    return variables, [v for v in basis if any(v)]


def _lll_like_reduce(basis):
    # size-reduce greedily in the max norm; cheap and keeps exponents small
    basis = [list(v) for v in basis]
    changed = True
    while changed:
        changed = False
        basis.sort(key=lambda v: (sum(abs(x) for x in v), v))
        for i in range(len(basis)):
            for j in range(len(basis)):
                if i == j:
                    continue
                for sgn in (1, -1):
                    cand = [x - sgn * y for x, y in zip(basis[i], basis[j])]
                    if sum(abs(x) for x in cand) < sum(abs(x) for x in basis[i]):
                        basis[i] = cand
                        changed = True
    return [v for v in basis if any(v)]


def _conjugate_values(n, variables, exps, classes, prec_bits):
    # sigma_c(h_E) for each class c; lift c to an odd residue so i is acted on by chi_4
    with mpmath.workprec(prec_bits):
        vals = []
        for c in classes:
            cl = c if c % 2 else c + n
            total = mpmath.mpf(1)
            for (d, a), e in zip(variables, exps):
                if e:
                    s = _chi4(cl) * 2 * mpmath.sin(mpmath.pi * a * cl / d)
                    total *= s**e
            vals.append(total)
        return vals


def _sine_square(field, d, a):
    """(2 sin(pi a/d))^2 = 2 - theta^{(d)}_a as an element of the field."""
    if d == 2:
        return field(4)
    n = field.conductor
    return 2 - field.theta_any(a * n // d)


def unit_from_exponents(field, variables, exps):
    """The exact element h_E (positive at the identity embedding)."""
    n = field.conductor
    deg = field.degree
    lhs = field.one
    rhs = field.one
    for (d, a), e in zip(variables, exps):
        if e > 0:
            rhs = rhs * _sine_square(field, d, a) ** e
        elif e < 0:
            lhs = lhs * _sine_square(field, d, a) ** (-e)
    bits = 128
    while True:
        vals = _conjugate_values(n, variables, exps, field.classes, bits)
        with mpmath.workprec(bits):
            thetas = [field.embedding_value_mp(c) for c in field.classes]
            V = mpmath.matrix([[th**i for i in range(deg)] for th in thetas])
            sol = mpmath.lu_solve(V, mpmath.matrix(vals))
            coords = [int(mpmath.nint(sol[i])) for i in range(deg)]
        h = FieldElement(field, coords)
        if h * h * lhs == rhs:
            return h
        bits *= 2
        if bits > 1 << 16:
            raise UnitError("could not recover cyclotomic unit exactly")


def _is_plus_minus_one(x):
    return x.is_rational() and abs(x.rational()) == 1


def cyclotomic_unit_generators(field):
    """Generators of the real cyclotomic units, verified to have norm +-1.

    Prime conductor p: sin(2 pi c/p)/sin(2 pi/p) for c = 2..(p-1)/2, which
    contains theta_1 (c = 2).  Other conductors: a reduced basis of the
    admissible exponent lattice, then the units 2 - theta^{(d)}_a for
    divisors d that are not prime powers.
    """
    n = field.conductor
    if n >= MAX_CONDUCTOR:
        raise UnitError(f"conductor {n} is outside the supported range n < {MAX_CONDUCTOR}")
    if field.subfield:
        raise UnitError("unit generators are built for the full real field")
    gens = []
    if _is_odd_prime(n):
        gens = [chebyshev_unit(field, c) for c in range(2, (n - 1) // 2 + 1)]
    else:
        variables, basis = admissible_exponent_basis(n)
        basis = _lll_like_reduce(basis)
        seen = set()
        for exps in basis:
            h = unit_from_exponents(field, variables, exps)
            if _is_plus_minus_one(h) or h in seen or -h in seen:
                continue
            seen.add(h)
            gens.append(h)
        for d in range(3, n + 1):
            if n % d or len(prime_factors(d)) < 2:
                continue
            for a in range(1, (d + 1) // 2):
                if math.gcd(a, d) == 1 and 2 * a < d:
                    u = _sine_square(field, d, a)
                    if u not in seen:
                        seen.add(u)
                        gens.append(u)
    for g in gens:
        if abs(norm(field, g)) != 1:
            raise UnitError(f"generator {g} is not a unit")
    return gens


def _is_odd_prime(n):
    return n > 2 and all(n % r for r in range(2, int(n**0.5) + 1))


def log_embedding_rank(field, units, tol=LOG_RANK_TOL):
    """Numerical rank of the Dirichlet log-embedding matrix, with precision doubling."""
    bits = 128
    while True:
        with mpmath.workprec(bits):
            rows = []
            for u in units:
                rows.append([mpmath.log(abs(u.eval_mp(c))) for c in field.classes[1:]])
            if not rows:
                return 0
            M = mpmath.matrix(rows)
            svals = mpmath.svd_r(M, compute_uv=False)
            top = max(abs(s) for s in svals) if len(svals) else mpmath.mpf(0)
            rank = sum(1 for s in svals if abs(s) > tol * max(top, 1))
            near = [s for s in svals if tol * max(top, 1) / 1e3 < abs(s) <= tol * max(top, 1) * 1e3]
        if not near or bits >= 1024:
            return rank
        bits *= 2


@dataclass
class UnitLattice:
    """Unit generators together with their sign data and a totally positive generating set."""

    field: object
    generators: list
    sign_matrix: list = dc_field(default_factory=list)
    tp_basis: list = dc_field(default_factory=list)

    def __post_init__(self):
        for g in self.generators:
            if abs(norm(self.field, g)) != 1:
                raise UnitError(f"{g} is not a unit")
        if not self.sign_matrix:
            self.sign_matrix = [
                [1 if s < 0 else 0 for s in embedding_signs(self.field, g)] for g in self.generators
            ]
        if not self.tp_basis:
            self.tp_basis = self._kernel_exponents()

    @classmethod
    def build(cls, field):
        return cls(field, cyclotomic_unit_generators(field))

    @property
    def rank(self):
        return len(self.field.classes) - 1

    def _kernel_exponents(self):
        # columns: generators, then -1; rows: embeddings
        ng = len(self.generators)
        d = self.field.degree
        cols = self.sign_matrix + [[1] * d]
        rows = [[cols[j][i] for j in range(ng + 1)] for i in range(d)]
        return gf2_kernel(rows, ng + 1)

    def element_from_exponents(self, vec):
        x = self.field.one
        for g, e in zip(self.generators, vec):
            if e:
                x = x * g**e
        if len(vec) > len(self.generators) and vec[len(self.generators)] % 2:
            x = -x
        return x

    def totally_positive_generators(self):
        return totally_positive_basis(self)


def totally_positive_basis(lattice):
    """Kernel-lift products followed by squares of every generator, with duplicates removed."""
    out = []
    seen = set()
    for vec in lattice.tp_basis:
        x = lattice.element_from_exponents(vec)
        if x.is_rational() or x in seen:
            continue
        seen.add(x)
        out.append(x)
    for g in lattice.generators:
        sq = g * g
        if sq not in seen:
            seen.add(sq)
            out.append(sq)
    return out


def unit_lattice(n):
    """UnitLattice of Q(zeta_n)^+."""
    if n >= MAX_CONDUCTOR:
        raise UnitError(f"conductor {n} is outside the supported range n < {MAX_CONDUCTOR}")
    return UnitLattice.build(real_cyclotomic_field(n))


__all__ = [
    "UnitError",
    "UnitLattice",
    "admissible_exponent_basis",
    "chebyshev_unit",
    "cyclotomic_unit_generators",
    "galois_apply",
    "log_embedding_rank",
    "totally_positive_basis",
    "unit_from_exponents",
    "unit_lattice",
]
