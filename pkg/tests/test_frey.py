from __future__ import annotations

import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from gfermat.cyclotomic import build_field, norm, theta
from gfermat.frey import (
    DIVIDING,
    NONDIVIDING,
    DescentError,
    DescentInstance,
    beta,
    beta_valuations,
    check_conductor_shape,
    check_factor_identity,
    curve_invariants,
    frey_triple,
    frey_triple_from_ab,
    gaussian_pow,
    involution_class,
    j_residue_check,
    theta_norms,
    scaled_invariants_agree,
    synthetic_instance,
    tau_pairs,
)


def test_gaussian_pow():
    assert gaussian_pow((1, 1), 2) == (0, 2)
    assert gaussian_pow((2, 1), 3) == (2, 11)


@settings(max_examples=40, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.sampled_from([5, 7, 11, 13]))
def test_factor_identity(a, b, p):
    assert check_factor_identity(p, a, b)


def test_tau_pairs():
    assert tau_pairs(13) == [(1, 5), (2, 3), (4, 6)]
    assert tau_pairs(5) == [(1, 2)]
    assert tau_pairs(7) == []
    assert involution_class(build_field(13)) == 5


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_theta_norms(p):
    for key, val in theta_norms(p).items():
        assert val == (1 if key[0] in ("theta", "theta+2") else p)


def test_instance_validation():
    with pytest.raises(DescentError):
        DescentInstance(7, 4, 6)
    with pytest.raises(DescentError):
        DescentInstance(7, 3, 5)
    with pytest.raises(DescentError):
        DescentInstance(7, 14, 3, case=NONDIVIDING)
    with pytest.raises(DescentError):
        DescentInstance(7, 4, 3, case=DIVIDING)
    with pytest.raises(DescentError):
        DescentInstance(7, 32 * 3, 5, ell=5, n=2).check_shape()
    assert DescentInstance(7, 32 * 3, 5, ell=5, n=1).check_shape()


@settings(max_examples=30, deadline=None)
@given(st.integers(-500, 500), st.integers(-500, 500), st.sampled_from([7, 11, 13]), st.sampled_from([NONDIVIDING, DIVIDING]))
def test_triple_sums_to_zero(a, b, p, case):
    assume((a, b) != (0, 0))
    t = frey_triple_from_ab(p, a, b, 1, 2, case)
    assert (t.u + t.v + t.w).is_zero()


def test_beta_valuations_by_case():
    inst = DescentInstance(13, 2**5 * 3, 7, 5, NONDIVIDING, 1)
    vals, oa = beta_valuations(inst)
    assert vals == [0] * 6 and oa == 0
    inst = DescentInstance(13, 2**5 * 13**4, 7, 5, DIVIDING, 1, 1)
    vals, oa = beta_valuations(inst)
    assert vals == [1] * 6 and oa == 4


def test_twist_needs_p_1_mod_4():
    with pytest.raises(DescentError):
        frey_triple_from_ab(7, 2, 1, 1, 2, NONDIVIDING, twisted=True)
    with pytest.raises(DescentError):
        frey_triple_from_ab(13, 2, 1, 1, 2, NONDIVIDING, twisted=True)


def test_invariants_relation():
    t = frey_triple_from_ab(11, 6, 5, 1, 3)
    inv = curve_invariants(t)
    assert inv.c4 ** 3 - inv.c6 ** 2 == inv.delta * 1728
    assert not inv.singular


@pytest.mark.parametrize("lam", [2, 3, -5])
def test_scaling(lam):
    assert scaled_invariants_agree(13, 6, 5, lam, 1, 5)
    assert scaled_invariants_agree(7, 6, 5, lam, 2, 3, DIVIDING)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
@pytest.mark.parametrize("case", [NONDIVIDING, DIVIDING])
def test_shape_small_sample(p, case):
    rng = random.Random(p)
    for _ in range(5):
        inst = synthetic_instance(p, case, 5, 1, 1, rng)
        rep = check_conductor_shape(inst, frey_triple(inst, 1, 2))
        assert rep.ok, rep.to_dict()
        assert all(v == 4 * 5 - 4 for v in rep.ord_two)


def test_twisted_shape_values():
    inst = synthetic_instance(13, NONDIVIDING, 7, 2, 1, random.Random(1))
    rep = check_conductor_shape(inst, frey_triple(inst, 1, 5, twisted=True))
    assert rep.ok
    assert rep.ord_p == 6 and rep.ord_B == 3
    inst = synthetic_instance(13, DIVIDING, 5, 1, 2, random.Random(2))
    rep = check_conductor_shape(inst, frey_triple(inst, 1, 5))
    assert rep.ok and rep.ord_p == 2 * inst.delta and rep.ord_B == inst.delta


def test_j_residue():
    res = j_residue_check(13)
    assert res[(1, 5)] is True


def test_beta_product_norm_matches_power():
    # N(beta_j) is the same for every j since the beta_j are conjugate
    F = build_field(7)
    ns = {norm(F, beta(F, j, 6, 5)) for j in (1, 2, 3)}
    assert len(ns) == 1
