from __future__ import annotations

import pytest

from watkins.arith import nu
from watkins.congruence import (
    TwistFamily,
    alternating_sum_coeff,
    claim_check,
    conductor_family_check,
    congruence_bound,
    corollary_check,
    epsilon,
    family_conductors,
    parity_check,
    telescoping_check,
    twist_curve,
    twisted_coeff_check,
    verify_theorem,
)
from watkins.curves import WeierstrassModel
from watkins.errors import ArithmeticDomainError
from watkins.hecke import gamma


@pytest.fixture(scope="module")
def family5() -> TwistFamily:
    return TwistFamily(5, 300)


@pytest.fixture(scope="module")
def family15() -> TwistFamily:
    return TwistFamily(15, 300)


def test_bound_constants():
    assert [epsilon(m) for m in (1, 2, 3, 4)] == [2, 1, 2, 1]
    assert congruence_bound(5) == 3
    assert congruence_bound(15) == 3
    assert congruence_bound(105) == 5
    assert congruence_bound(1155) == 5


def test_twist_curve():
    assert twist_curve(5, 3) == WeierstrassModel.short(-45, 0)


def test_family_rejects_bad_d():
    for d in (1, 4, 9, -5):
        with pytest.raises(ArithmeticDomainError):
            TwistFamily(d, 100)
    with pytest.raises(ArithmeticDomainError):
        TwistFamily(105, 100, max_omega=2)


def test_coefficient_beyond_bound(family5):
    with pytest.raises(ArithmeticDomainError):
        family5.coefficient(1, 301)


def test_tight_coefficient_for_five(family5):
    value = alternating_sum_coeff(family5, 13)
    assert value == -8
    assert nu(2, value) == congruence_bound(5)


def test_claim_holds_for_every_index(family5, family15):
    for family in (family5, family15):
        for n in range(1, family.B + 1):
            assert claim_check(family, n).ok, (family.d, n)


def test_claim_zero_for_even_part(family15):
    claim = claim_check(family15, 2 * 7)
    assert claim.expected == 0
    assert not claim.gamma_all_minus_one


def test_telescoping(family15):
    checked = 0
    for n in range(1, family15.B + 1):
        n2 = n
        while n2 % 3 == 0:
            n2 //= 3
        while n2 % 5 == 0:
            n2 //= 5
        if gamma(n2, 3) == -1:
            assert telescoping_check(family15, n, 3)
            checked += 1
    assert checked > 0


def test_telescoping_rejects_bad_input(family15):
    with pytest.raises(ArithmeticDomainError):
        telescoping_check(family15, 7, 7)
    with pytest.raises(ArithmeticDomainError):
        telescoping_check(family15, 1, 3)


def test_twisted_coefficients(family15):
    for D in (1, 3, 5, 15):
        assert twisted_coeff_check(family15, D) == []
    with pytest.raises(ArithmeticDomainError):
        twisted_coeff_check(family15, 7)


def test_parity_of_coefficients():
    split = parity_check(5, 11)
    assert split.symbol == 1 and split.modulus == 2 and split.ok

    inert = parity_check(5, 3)
    assert inert.symbol == -1 and inert.modulus == 4 and inert.ok
    assert inert.sum_of_squares_ok is None

    square = parity_check(5, 13)
    assert square.a_f == -4
    assert square.a_g in (6, -6)
    assert square.sum_of_squares_ok

    assert parity_check(5, 13, k=3).congruence_ok


def test_parity_sweep(rng):
    for d in (3, 5, 7, 15, 21, 105):
        for q in rng.sample([q for q in range(3, 400) if all(q % r for r in range(2, q))], 12):
            if d % q:
                assert parity_check(d, q).ok, (d, q)


def test_parity_rejects_bad_input():
    with pytest.raises(ArithmeticDomainError):
        parity_check(5, 5)
    with pytest.raises(ArithmeticDomainError):
        parity_check(5, 2)
    with pytest.raises(ArithmeticDomainError):
        parity_check(5, 3, k=2)


def test_conductors_agree_across_twists():
    conductors = family_conductors(15)
    assert set(conductors) == {1, 3, 5, 15}
    assert len(set(conductors.values())) == 1
    assert conductor_family_check(105)
    with pytest.raises(ArithmeticDomainError):
        conductor_family_check(6)


def test_verify_theorem_for_five():
    report = verify_theorem(5, 200)
    assert report.passed
    assert (report.m, report.epsilon, report.bound) == (1, 2, 3)
    assert report.min_observed_val == 3
    assert any(w.n == 13 and w.value == -8 for w in report.tight_witnesses)


def test_verify_theorem_rejects_small_bound():
    with pytest.raises(ArithmeticDomainError):
        verify_theorem(5, 50)


@pytest.mark.slow
@pytest.mark.parametrize("d", [15, 21, 35, 105])
def test_verify_theorem_sweep(d):
    report = verify_theorem(d, 600)
    assert report.passed
    assert report.min_observed_val >= congruence_bound(d)
    assert report.claim_violations == ()


def test_corollary():
    check = corollary_check(7)
    assert (check.rank_upper, check.congruence_bound) == (2, 3)
    assert check.ok
    assert check.theorem_checked is None
    assert corollary_check(13, 150).theorem_checked
    with pytest.raises(ArithmeticDomainError):
        corollary_check(9)
