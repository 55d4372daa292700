from __future__ import annotations

from fractions import Fraction

import pytest

from watkins.arith import INF, is_squarefree
from watkins.curves import (
    Transformation,
    WeierstrassModel,
    has_rational_two_torsion,
    invariants,
    is_minimal,
    j_invariant,
    minimal_model,
    quadratic_twist,
    signature,
    two_torsion_points,
)
from watkins.errors import ArithmeticDomainError, SingularCurveError

E32 = WeierstrassModel(0, 0, 0, -1, 0)
E17 = WeierstrassModel(1, -1, 1, -1, 0)


def test_invariants_of_y2_x3_minus_x():
    inv = invariants(E32)
    assert (inv.b2, inv.b4, inv.b6) == (0, -2, 0)
    assert (inv.c4, inv.c6, inv.disc) == (48, 0, 64)
    assert j_invariant(E32) == 1728


def test_singular_model_rejected():
    with pytest.raises(SingularCurveError):
        WeierstrassModel(0, 0, 0, 0, 0)


def test_parse_accepts_brackets_and_unicode_minus():
    assert WeierstrassModel.parse("[0, 0, 0, −1, 0]") == E32
    assert WeierstrassModel.parse("1,-1,1,-1,0") == E17
    assert str(E17) == "[1,-1,1,-1,0]"


@pytest.mark.parametrize("text", ["1,2,3", "a,b,c,d,e", "1,2,3,4,5,6"])
def test_parse_rejects_malformed(text):
    with pytest.raises(ArithmeticDomainError):
        WeierstrassModel.parse(text)


def test_from_c4c6_recovers_reduced_model():
    inv = invariants(E17)
    assert WeierstrassModel.from_c4c6(inv.c4, inv.c6) == E17


def test_minimal_model_undoes_scaling():
    scale = Transformation(u=Fraction(1, 2))
    scaled = scale.apply(E17)
    assert not is_minimal(scaled)
    reduced, T = minimal_model(scaled)
    assert reduced == E17
    assert T.apply(scaled) == E17
    assert is_minimal(E17)


def test_transformation_inverse_composes_to_identity():
    T = Transformation(u=Fraction(2), r=Fraction(3), s=Fraction(-1), t=Fraction(5))
    assert T.compose(T.inverse()).as_tuple() == Transformation.identity().as_tuple()


def test_transformation_rejects_zero_scale():
    with pytest.raises(ArithmeticDomainError):
        Transformation(u=0)


def test_twist_by_minus_one_of_cm_curve_is_itself():
    assert quadratic_twist(E32, -1) == minimal_model(E32)[0]


def test_twist_twice_returns_the_curve():
    for D in (-3, 5, 6, -15):
        assert quadratic_twist(quadratic_twist(E17, D), D) == minimal_model(E17)[0]


def test_twist_rejects_non_squarefree():
    with pytest.raises(ArithmeticDomainError):
        quadratic_twist(E17, 12)


def test_two_torsion():
    assert two_torsion_points(E32) == [Fraction(-1), Fraction(0), Fraction(1)]
    assert has_rational_two_torsion(E17)
    assert not has_rational_two_torsion(WeierstrassModel.short(0, 2))


def test_signature_of_y2_x3_minus_x():
    sig = signature(E32, 2)
    assert sig.as_tuple() == (4, INF, 6)
    assert str(sig) == "(4, inf, 6)"
    assert not sig.minimized


def test_signature_minimizes_first():
    scaled = Transformation(u=Fraction(1, 2)).apply(E32)
    sig = signature(scaled, 2)
    assert sig.minimized
    assert sig.as_tuple() == (4, INF, 6)


@pytest.mark.parametrize("p", [0, 1, 4, 15, -2])
def test_signature_needs_a_prime(p):
    with pytest.raises(ArithmeticDomainError, match="not a prime"):
        signature(E32, p)


def test_random_twist_involutions(bundle, rng):
    records = list(bundle)
    for _ in range(500):
        record = rng.choice(records)
        D = rng.choice([d for d in range(-60, 61) if is_squarefree(d)])
        minimal = minimal_model(record.model)[0]
        back = quadratic_twist(quadratic_twist(record.model, D), D)
        assert back == minimal
        assert invariants(back).disc == invariants(minimal).disc
