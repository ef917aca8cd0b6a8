from __future__ import annotations

import random

import pytest

from gfermat.cyclotomic import build_field, norm
from gfermat.irreducibility import (
    BoundsError,
    attained_values,
    bound_products,
    bound_value,
    cyclic_galois_group,
    residual_pair_check,
    subgroups,
    tp_generators,
)


def test_subgroup_lattice_p13():
    F = build_field(13)
    g, elems = cyclic_galois_group(F)
    assert sorted(elems) == list(F.classes)
    sizes = [len(D) for D, T in subgroups(F)]
    assert sizes == [1, 2, 3, 6]
    for D, T in subgroups(F):
        assert len(D) * len(T) == F.degree


def test_trivial_subset_of_full_group_not_enumerated():
    # D = G has a single coset, so there is no non-empty proper subset
    reps = bound_products(7)
    assert all(r.subgroup_order < 3 for r in reps)


@pytest.mark.parametrize("p", [5, 7])
def test_small_primes_only_one(p):
    assert attained_values(bound_products(p)) == [1]


def test_p11_values():
    assert attained_values(bound_products(11)) == [1]
    assert attained_values(bound_products(11, basis="theta")) == [1, 23]


def test_p13_values_lattice_and_theta():
    assert attained_values(bound_products(13)) == [1, 25, 729]
    assert attained_values(bound_products(13, basis="theta")) == [1, 25, 53, 729]


def _random_tp(p, rng, k=3):
    F, tp = tp_generators(p)
    x = F.one
    for _ in range(k):
        u = rng.choice(tp)
        x = x * (u if rng.random() < 0.5 else u.inverse())
    return F, x


def test_order_three_values_divisible_by_three_to_six():
    # for |D| = 3 the product lies in Q(sqrt 13); its norm there is a multiple of
    # N(eps^2 - 1) = -9 for the fundamental unit eps, and the norm to Q is a cube
    rng = random.Random(5)
    F = build_field(13)
    (D, T) = [dt for dt in subgroups(F) if len(dt[0]) == 3][0]
    for _ in range(15):
        _, u = _random_tp(13, rng)
        v = bound_value(F, u, D, (T[0],))
        assert v % 3**6 == 0


def test_bound_value_is_norm_of_product_minus_one():
    F, tp = tp_generators(7)
    u = tp[0]
    assert bound_value(F, u, (1,), (1,)) == norm(F, u - 1)


def test_unknown_basis_and_prime():
    with pytest.raises(BoundsError):
        bound_products(17)
    with pytest.raises(BoundsError):
        tp_generators(7, basis="nope")


def test_residual_checks():
    assert residual_pair_check(11, 23)
    assert residual_pair_check(13, 5)


@pytest.mark.parametrize("p", [7, 11, 13])
def test_enumeration_count(p):
    F = build_field(p)
    want = sum(2 ** len(T) - 2 for D, T in subgroups(F))
    assert len(bound_products(p)) == want


def test_translate_invariance():
    F, tp = tp_generators(13)
    for D, T in subgroups(F):
        if len(T) < 2:
            continue
        for sigma in F.classes:
            moved = tuple(F.class_of(sigma * t) for t in T[:1])
            for u in tp[:3]:
                assert bound_value(F, u, D, moved) == bound_value(F, u, D, T[:1])


def test_gcd_divides_values():
    for r in bound_products(13):
        assert all(v % r.gcd == 0 for v in r.values)
