"""Reproduction checks run by ``gfermat verify-all``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources

from .cyclotomic import build_field, split_prime
from .eigenforms import CURVE_26B1, eigenvalues_from_curve, ingest_eigenform
from .frey import CASES, NONDIVIDING, check_conductor_shape, frey_triple, j_residue_check, theta_norms, synthetic_instance, tau_pairs
from .irreducibility import SUPPORTED_PRIMES, attained_values, bound_products, residual_pair_check
from .modularity import failing_conductors, scan_conductors
from .reports import ANCHORS
from .sieve import b_s

EXPECTED_FAILING = [29, 87, 89]
EXPECTED_BOUNDS = {5: [1], 7: [1], 11: [1, 23], 13: [1, 25, 243]}
F9_S = (3, 5, 31, 47)
F9_BOUND = 49


@dataclass
class CheckResult:
    key: str
    ok: bool
    detail: str

    @property
    def anchor(self):
        return ANCHORS[self.key]

    def line(self):
        return f"{'PASS' if self.ok else 'FAIL'}  {self.anchor}: {self.detail}"

    def to_dict(self):
        return {"key": self.key, "anchor": self.anchor, "ok": self.ok, "detail": self.detail}


def packaged_eigenform(name):
    return resources.files("gfermat") / "data" / f"{name}.json"


def check_scan(workers=None):
    got = failing_conductors(scan_conductors(workers=workers))
    return CheckResult("modularity-scan", got == EXPECTED_FAILING, f"failing {got}, expected {EXPECTED_FAILING}")


def check_bounds():
    got = {p: attained_values(bound_products(p)) for p in SUPPORTED_PRIMES}
    bad = {p: v for p, v in got.items() if v != EXPECTED_BOUNDS[p]}
    detail = ", ".join(f"p={p}: {v}" for p, v in got.items())
    if bad:
        detail += f" (expected {EXPECTED_BOUNDS})"
    return CheckResult("bounds", not bad, detail)


def check_residual():
    got = {(11, 23): residual_pair_check(11, 23), (13, 5): residual_pair_check(13, 5)}
    return CheckResult("residual", all(got.values()), ", ".join(f"{k}: {v}" for k, v in got.items()))


def check_norms():
    bad = []
    for p in SUPPORTED_PRIMES:
        for key, val in theta_norms(p).items():
            want = 1 if key[0] in ("theta", "theta+2") else p
            if val != want:
                bad.append((p, key, val))
    return CheckResult("norms", not bad, "all |N| in {1, p}" if not bad else f"mismatches {bad[:5]}")


def shape_configs(p, case):
    """(j, k, twisted) choices exercised by the shape sweep."""
    cfgs = [(1, 2, False)]
    if p % 4 == 1:
        j, k = tau_pairs(p)[0]
        if (j, k) != (1, 2):
            cfgs.append((j, k, False))
        if case == NONDIVIDING:
            cfgs.append((j, k, True))
    return cfgs


def frey_sweep(p, case, count=50, seed=0):
    """(number checked, list of failing instance descriptions)."""
    rng = random.Random(f"{seed}:{p}:{case}")
    failures = []
    checked = 0
    for i in range(count):
        ell = rng.choice((5, 7, 11))
        n = rng.choice((1, 2, 3))
        kappa = rng.choice((1, 2))
        inst = synthetic_instance(p, case, ell, n, kappa, rng)
        for j, k, tw in shape_configs(p, case):
            rep = check_conductor_shape(inst, frey_triple(inst, j, k, tw))
            checked += 1
            if not rep.ok:
                failures.append((inst.a, inst.b, ell, n, kappa, j, k, tw))
    return checked, failures


def check_frey(count=50):
    total = 0
    failures = []
    for p in SUPPORTED_PRIMES:
        for case in CASES:
            n, bad = frey_sweep(p, case, count)
            total += n
            failures += [(p, case) + b for b in bad]
    return CheckResult("frey", not failures, f"{total} curves checked, {len(failures)} failures")


def check_j_residue():
    got = j_residue_check(13)
    ok = got[(1, 5)]
    return CheckResult("j-residue", ok, f"outside F_2 for (1,5): {ok}; all pairs {got}")


def check_f9_sieve(workers=1):
    f = ingest_eigenform(packaged_eigenform("f9"), F9_S)
    rep = b_s(f, F9_S, workers=workers)
    return CheckResult("sieve", rep.b_s == F9_BOUND, f"B_S(f9) = {rep.b_s} for S = {list(F9_S)}, expected {F9_BOUND}")


def torsion_failures(max_norm=10**4):
    """Primes of K' above q != 13 with norm <= max_norm where 7 does not divide N+1-a."""
    from sympy import primerange

    F = build_field(13, subfield=True)
    bad = []
    count = 0
    for q in primerange(3, max_norm + 1):
        if q == 13:
            continue
        primes = [P for P in split_prime(F, q) if P.norm <= max_norm]
        if not primes:
            continue
        f = eigenvalues_from_curve(CURVE_26B1, 13, "Kprime", (q,))
        for P in primes:
            count += 1
            a = f.eigenvalues[(q, P.factor_index)][0]
            if (P.norm + 1 - a) % 7:
                bad.append((q, P.factor_index))
    return count, bad


def check_torsion():
    n, bad = torsion_failures()
    return CheckResult("torsion", not bad, f"{n} primes of norm <= 10^4, {len(bad)} exceptions")


def run_all(workers=None):
    return [
        check_scan(workers),
        check_bounds(),
        check_residual(),
        check_norms(),
        check_frey(),
        check_j_residue(),
        check_f9_sieve(workers or 1),
        check_torsion(),
    ]
