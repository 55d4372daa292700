from __future__ import annotations

from fractions import Fraction

import pytest

from watkins.arith import nu
from watkins.campaigns import twist_parameters
from watkins.curves import Transformation, WeierstrassModel, quadratic_twist
from watkins.families import setzer_pair, setzer_primes
from watkins.local import (
    Kind,
    bad_primes,
    conductor,
    corollary_expectation,
    discriminant_ratio_val2,
    tate,
)


def test_conductors_of_bundled_curves(bundle):
    for record in bundle:
        assert conductor(record.model).value == record.conductor_label


def test_additive_reduction_at_two():
    data = tate(WeierstrassModel(0, 0, 0, -1, 0), 2)
    assert data.kind == Kind.ADDITIVE
    assert data.f_p == 5
    assert data.v_disc_min == 6


def test_multiplicative_reduction_at_seventeen(bundle):
    data = conductor(bundle.lookup("17.a4").model).local(17)
    assert data.kind.is_multiplicative
    assert data.f_p == 1
    assert data.kind.bad_coefficient in (1, -1)


def test_cm_curve_at_seven(bundle):
    data = conductor(bundle.lookup("49.a1").model).local(7)
    assert data.kind == Kind.ADDITIVE
    assert data.f_p == 2


def test_good_kind_has_no_bad_coefficient():
    with pytest.raises(ValueError):
        Kind.GOOD.bad_coefficient


def test_bad_primes():
    assert bad_primes(WeierstrassModel(0, 0, 0, -1, 0)) == [2]


def test_twist_conductor_picks_up_new_primes(bundle):
    E = bundle.lookup("17.a4").model
    assert conductor(quadratic_twist(E, -3)).value == 17 * 9
    assert conductor(quadratic_twist(E, 5)).value == 17 * 25


def test_discriminant_ratio_for_y2_x3_minus_x():
    E = WeierstrassModel(0, 0, 0, -1, 0)
    assert discriminant_ratio_val2(E, 2) == 1
    assert discriminant_ratio_val2(E, -1) == 0


@pytest.mark.parametrize("D", [-3, 5, -1, 3, 2, -7, 6])
def test_discriminant_ratio_of_odd_discriminant_curve(bundle, D):
    E = bundle.lookup("17.a4").model
    assert discriminant_ratio_val2(E, D) == Fraction(corollary_expectation(D))


def _reduction(model, p):
    data = tate(model, p)
    return data.kind, data.kodaira, data.f_p, data.v_disc_min


def test_tate_ignores_change_of_coordinates(bundle, rng):
    for record in bundle:
        for _ in range(10):
            change = Transformation(
                u=Fraction(rng.choice([1, -1]), rng.choice([1, 2, 3])),
                r=rng.randint(-20, 20),
                s=rng.randint(-20, 20),
                t=rng.randint(-20, 20),
            )
            moved = change.apply(record.model)
            for p in (2, 3, 5, 7, 17):
                assert _reduction(moved, p) == _reduction(record.model, p), (record.label, change, p)


def test_discriminant_ratio_piecewise_law(bundle, rng):
    models = [r.model for r in bundle if r.conductor_label in (17, 49)]
    models += [model for p in setzer_primes(300) for model in setzer_pair(p)]
    params = rng.sample(twist_parameters(400), 200)
    for model in models:
        for D in params:
            assert discriminant_ratio_val2(model, D) == corollary_expectation(D), (model, D)


def test_discriminant_ratio_lower_bound_for_two_power_conductors(bundle):
    for record in bundle:
        if record.conductor_label not in (32, 128):
            continue
        for D in twist_parameters(100):
            assert discriminant_ratio_val2(record.model, D) >= -nu(2, D), (record.label, D)
