"""The unit-norm criterion at the primes above 5 and the conductor scan built on it."""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

from .cyclotomic import RamifiedPrimeError, real_cyclotomic_field, reduce, residue_norm_to_prime_field, split_prime
from .units import MAX_CONDUCTOR, UnitLattice, totally_positive_basis

WITNESS_PRIME = 5


@dataclass
class Witness:
    """A totally positive unit (or pair product) with nontrivial norm product over S."""

    indices: tuple
    value: int

    @property
    def is_pair(self):
        return len(self.indices) > 1


@dataclass
class ConductorReport:
    conductor: int
    s5_size: int
    failing_subsets: list = dc_field(default_factory=list)
    pair_witness_subsets: list = dc_field(default_factory=list)
    generator_count: int = 0

    @property
    def verdict(self):
        return "pass" if not self.failing_subsets else "fail"

    def to_dict(self):
        return {
            "conductor": self.conductor,
            "s5_size": self.s5_size,
            "verdict": self.verdict,
            "failing_subsets": [list(s) for s in self.failing_subsets],
            "pair_witness_subsets": [list(s) for s in self.pair_witness_subsets],
            "generator_count": self.generator_count,
        }


def admissible_conductor(n):
    return n > 2 and n % 4 != 2 and n % WITNESS_PRIME != 0


def proper_subsets(size):
    """Non-empty proper subsets of range(size), by size then lexicographically."""
    out = []
    for r in range(1, size):
        out.extend(itertools.combinations(range(size), r))
    return out


def norm_vector(u, primes):
    """Norm_{F_q/F_ell}(u mod q) for each prime q in ``primes``."""
    return [residue_norm_to_prime_field(reduce(u, P)) for P in primes]


def subset_product(vec, subset, modulus):
    out = 1
    for i in subset:
        out = out * vec[i] % modulus
    return out


def condition_c_witness(field, S, tp_gens, primes=None, allow_pairs=False):
    """First element of ``tp_gens`` whose norm product over S is not 1 modulo 5.

    ``S`` holds indices into ``primes`` (the primes above 5, canonical order).
    Returns a Witness, or None.  With ``allow_pairs`` pairwise products are
    tried after single generators.
    """
    if field.conductor % WITNESS_PRIME == 0:
        raise RamifiedPrimeError("5 is ramified in this field")
    if primes is None:
        primes = split_prime(field, WITNESS_PRIME)
    vectors = [norm_vector(u, primes) for u in tp_gens]
    return find_witness(vectors, S, allow_pairs)


def find_witness(vectors, S, allow_pairs, modulus=WITNESS_PRIME):
    """Index of the first norm vector (or pair) whose product over S is not 1 modulo ``modulus``."""
    vals = [subset_product(v, S, modulus) for v in vectors]
    for i, val in enumerate(vals):
        if val != 1:
            return Witness((i,), val)
    if allow_pairs:
        for i, j in itertools.combinations(range(len(vals)), 2):
            val = vals[i] * vals[j] % modulus
            if val != 1:
                return Witness((i, j), val)
    return None


def check_conductor(n, singles_only=False):
    """ConductorReport for Q(zeta_n)^+."""
    field = real_cyclotomic_field(n)
    primes = split_prime(field, WITNESS_PRIME)
    report = ConductorReport(n, len(primes))
    if len(primes) == 1:
        return report
    lattice = UnitLattice.build(field)
    tp = totally_positive_basis(lattice)
    report.generator_count = len(tp)
    vectors = [norm_vector(u, primes) for u in tp]
    for S in proper_subsets(len(primes)):
        w = find_witness(vectors, S, allow_pairs=not singles_only)
        if w is None:
            report.failing_subsets.append(S)
        elif w.is_pair:
            report.pair_witness_subsets.append(S)
    return report


def _check_star(args):
    return check_conductor(*args)


def scan_conductors(max_n=MAX_CONDUCTOR, singles_only=False, workers=None):
    """Reports for every admissible conductor n < max_n, ordered by n."""
    if max_n > MAX_CONDUCTOR:
        raise ValueError(f"max_n must be at most {MAX_CONDUCTOR}")
    ns = [n for n in range(3, max_n) if admissible_conductor(n)]
    workers = workers or default_workers()
    if workers == 1:
        return [check_conductor(n, singles_only) for n in ns]
    # largest conductors first keeps the pool busy; results are re-sorted by n
    order = sorted(ns, key=lambda n: -n)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        reports = list(pool.map(_check_star, [(n, singles_only) for n in order]))
    return sorted(reports, key=lambda r: r.conductor)


def failing_conductors(reports):
    return sorted(r.conductor for r in reports if r.verdict == "fail")


def default_workers():
    """Worker count from $GFERMAT_THREADS, else 1."""
    env = os.environ.get("GFERMAT_THREADS")
    if env:
        return max(1, int(env))
    return 1
