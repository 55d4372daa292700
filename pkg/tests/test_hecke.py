from __future__ import annotations

import math

import pytest

from watkins.arith import primes_up_to
from watkins.curves import WeierstrassModel
from watkins.errors import ArithmeticDomainError, EnumerationCeilingError
from watkins.families import setzer_pair
from watkins.hecke import (
    a_prime_power,
    a_q,
    count_points,
    expand,
    gamma,
    twist_identity_violations,
    twist_table,
)

E32 = WeierstrassModel(0, 0, 0, -1, 0)


def test_first_coefficients_of_conductor_17(bundle):
    table = expand(bundle.lookup("17.a4").model, 10)
    assert [table[n] for n in range(1, 11)] == [1, -1, 0, -1, -2, 0, 4, 3, -3, 2]
    assert table.check() == []


def test_isogenous_curves_share_coefficients(bundle):
    tables = [expand(r.model, 150).coefficients for r in bundle.with_conductor(17)]
    assert all(t == tables[0] for t in tables)


def test_count_points_small_field():
    assert count_points(E32, 5) == 8
    assert a_q(E32, 5) == -2


def test_supersingular_primes_of_cm_curve():
    for q in primes_up_to(200):
        if q % 4 == 3:
            assert a_q(E32, q) == 0


def test_bad_prime_coefficient(bundle):
    assert a_q(E32, 2) == 0
    assert a_q(bundle.lookup("17.a4").model, 17) in (1, -1)


def test_hasse_bound_holds(bundle, rng):
    primes = primes_up_to(2000)
    for record in bundle:
        for q in rng.sample(primes, 15):
            aq = a_q(record.model, q)
            assert aq * aq <= 4 * q


@pytest.mark.parametrize("q", [0, -5, 1, 9, 15])
def test_a_q_needs_a_prime(q):
    with pytest.raises(ArithmeticDomainError, match="not a prime"):
        a_q(E32, q)


def test_ceiling_is_enforced():
    with pytest.raises(EnumerationCeilingError):
        a_q(E32, 101, ceiling=100)
    with pytest.raises(EnumerationCeilingError):
        expand(E32, 200, ceiling=100)
    with pytest.raises(ArithmeticDomainError):
        expand(E32, 0)


def test_prime_powers_match_table(bundle):
    E = bundle.lookup("17.a4").model
    table = expand(E, 300)
    for q, k in ((2, 8), (3, 5), (5, 3), (17, 2), (7, 2)):
        assert a_prime_power(E, q, k) == table[q**k]
    assert a_prime_power(E, 3, 0) == 1


def test_table_independent_of_threads(bundle):
    E = bundle.lookup("128.b1").model
    assert expand(E, 400, threads=1).coefficients == expand(E, 400, threads=4).coefficients


def test_index_outside_table():
    table = expand(E32, 20)
    with pytest.raises(IndexError):
        table[21]
    with pytest.raises(IndexError):
        table[0]


def test_gamma():
    assert gamma(3, -1) == -1
    assert gamma(9, -1) == 1
    assert gamma(1, 5) == 1
    assert gamma(13 * 3, 5) == 1
    with pytest.raises(ArithmeticDomainError):
        gamma(3, 3)


def test_twisted_coefficients_follow_kronecker(bundle):
    for record in bundle:
        for D in (-1, 2, -3, 5):
            assert twist_identity_violations(record.model, D, primes_up_to(150)) == []


@pytest.mark.parametrize("p", [73, 89])
def test_setzer_twists_follow_kronecker(p):
    for model in setzer_pair(p):
        for D in (-1, 2, -3, 5, -7):
            assert twist_identity_violations(model, D, primes_up_to(200)) == []


def test_twist_table_matches_twisted_curve(bundle):
    E = bundle.lookup("17.a4").model
    table = twist_table(E, -3, 60)
    base = expand(E, 60)
    for n in (5, 7, 11, 13, 25):
        assert table[n] == gamma(n, -3) * base[n]


def test_random_table_probes(bundle, rng):
    records = list(bundle)
    tables = {r.label: expand(r.model, 1000) for r in records}
    for _ in range(1000):
        record = rng.choice(records)
        table = tables[record.label]
        m, n = rng.randint(1, 31), rng.randint(1, 31)
        if math.gcd(m, n) == 1:
            assert table[m * n] == table[m] * table[n]
        q = rng.choice(table.primes())
        assert table[q] ** 2 <= 4 * q
