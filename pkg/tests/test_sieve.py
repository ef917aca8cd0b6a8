from __future__ import annotations

import math
import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from gfermat.cyclotomic import build_field, split_prime
from gfermat.eigenforms import CURVE_26B1, EigenformData, EigenformDataError, eigenvalues_from_curve
from gfermat.frey import DIVIDING, NONDIVIDING
from gfermat.ideals import Ideal, MonogenicOrder
from gfermat.sieve import (
    GOOD,
    SPLIT,
    FreyFamily,
    SieveError,
    b_q,
    b_s,
    b_value,
    default_S,
    family_for,
    format_factored,
    frey_reduction,
    heuristic_success,
    residue_pairs,
    square_classes,
)


@pytest.fixture(scope="module")
def f9():
    return eigenvalues_from_curve(CURVE_26B1, 13, "Kprime", (3, 5, 7, 11, 31, 47), label="f9")


class IdealPathForm(EigenformData):
    """Same data, but forces the lattice (HNF) code path."""

    @property
    def rational(self):
        return False


def test_residue_grid():
    assert len(residue_pairs(7)) == 48
    sc = square_classes(7)
    assert sum(sc.values()) == 48
    assert sc[(0, 1)] == 2  # (0, 1) and (0, 6)


def test_split_node_at_zero_one(f9):
    fam = family_for(f9)
    for P in split_prime(fam.field, 5):
        assert frey_reduction(fam, (0, 1), P).kind == SPLIT
    gens, _ = b_value(f9, 5, (0, 1), fam)
    assert all(g[0] % 7 == 0 for g in gens)


@pytest.mark.parametrize("case", [NONDIVIDING, DIVIDING])
def test_no_additive_reduction_p7(case):
    fam = FreyFamily.build(7, case, 1, 2)
    for P in split_prime(fam.field, 3):
        for pair in residue_pairs(3):
            red = frey_reduction(fam, pair, P)
            if red.kind == GOOD:
                assert red.trace ** 2 <= 4 * P.norm


def test_q_dividing_2p_rejected(f9):
    with pytest.raises(SieveError):
        b_q(f9, 13)
    with pytest.raises(SieveError):
        b_s(f9, [])


def test_missing_eigenvalues_rejected(f9):
    with pytest.raises(EigenformDataError):
        b_s(f9, (3, 79))


def test_dedupe_matches_full_grid(f9):
    # product over all of A_q computed pair by pair equals the deduplicated value
    fam = family_for(f9)
    for q in (3, 5, 7):
        total = q
        for pair in residue_pairs(q):
            _, I = b_value(f9, q, pair, fam)
            total *= I.norm()
        assert b_q(f9, q, fam).norm == total


def test_q_divides_bq(f9):
    for q in (3, 5, 11):
        r = b_q(f9, q)
        assert r.norm % q == 0
        assert math.prod(p**e for p, e in r.factored.items()) == r.norm


def test_f9_bound(f9):
    rep = b_s(f9, (3, 5, 31, 47))
    assert rep.b_s == 49
    assert rep.surviving_exponents == [7]
    assert format_factored(rep.b_s_factored) == "7^2"


def test_seven_divides_every_bq(f9):
    for q in (3, 5, 7, 11):
        assert b_q(f9, q).norm % 7 == 0


def test_monotone_and_single(f9):
    chain = [(3,), (3, 5), (3, 5, 11), (3, 5, 11, 31)]
    vals = [b_s(f9, S).b_s for S in chain]
    for small, big in zip(vals, vals[1:]):
        assert small % big == 0
    assert b_s(f9, (5,)).b_s == b_q(f9, 5).norm


def test_ideal_path_agrees_with_gcd(f9):
    g = IdealPathForm(**f9.__dict__)
    for S in ((3,), (5,), (3, 5), (5, 7, 11)):
        assert b_s(g, S).b_s == b_s(f9, S).b_s


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-500, 500), min_size=1, max_size=6))
def test_rational_order_hnf_equals_gcd(vals):
    O = MonogenicOrder((0, 1))
    assert Ideal.from_generators(O, [(v,) for v in vals]).norm() == math.gcd(*vals)


def test_workers_give_identical_reports(f9):
    a = b_s(f9, (3, 5, 7, 11), workers=1).to_dict()
    b = b_s(f9, (3, 5, 7, 11), workers=3).to_dict()
    assert a == b


def test_prime_order_in_S_irrelevant(f9):
    a = b_s(f9, (3, 5, 11))
    b = b_s(f9, (11, 3, 5))
    assert a.b_s == b.b_s


def test_zero_contribution():
    # a form whose a_q is N+1 at a split node contributes the zero ideal there
    K = build_field(13, subfield=True)
    f = eigenvalues_from_curve(CURVE_26B1, 13, "Kprime", (5,), label="z")
    evs = {(5, P.factor_index): (P.norm + 1,) for P in split_prime(K, 5)}
    z = replace(f, eigenvalues=evs)
    gens, I = b_value(z, 5, (0, 1))
    assert all(g == (0,) for g in gens) and I.is_zero()
    r = b_q(z, 5)
    assert r.zero
    rep = b_s(z, (5,))
    assert rep.no_bound and rep.b_s == 0


def test_quadratic_hecke_field():
    K = build_field(13, subfield=True)
    evs = {}
    rng = random.Random(0)
    for q in (3, 5):
        for P in split_prime(K, q):
            evs[(q, P.factor_index)] = (rng.randint(-2, 2), rng.choice((-1, 1)))
    f = EigenformData("quad", 13, "Kprime", "2*B", (-2, 0, 1), evs)
    rep = b_s(f, (3, 5))
    assert rep.hecke_discriminant == 8
    for r in rep.per_q:
        assert r.zero or r.norm % rep.b_s == 0


def test_family_from_curve_over_K():
    f = eigenvalues_from_curve(CURVE_26B1, 7, "K", (3,), label="t", level="2*p")
    rep = b_s(f, default_S(7, DIVIDING))
    assert rep.S == (3,) and rep.b_s > 0


def test_heuristic():
    assert heuristic_success(3, 6, 1, 0) == 1.0
    assert heuristic_success(3, 6, 1, 1) == pytest.approx((1 - 1 / 27) ** 8, rel=0, abs=0)
    vals = [heuristic_success(q, 6, 6, 1) for q in (101, 1009, 10007)]
    assert vals[0] < vals[1] < vals[2] < 1
    assert vals[2] > 0.99
    with pytest.raises(ValueError):
        heuristic_success(3, 6, 4, 1)
