from __future__ import annotations

import math
from itertools import combinations

import pytest

from watkins.arith import (
    INF,
    divisors,
    factorize,
    format_factored,
    format_valuation,
    is_squarefree,
    kronecker,
    nu,
    omega,
    parse_factored,
    primes_up_to,
    radical,
    spf_sieve,
    squarefree_part,
    valuation,
)
from watkins.errors import ArithmeticDomainError


def test_factorize_keeps_sign():
    f = factorize(-2**14)
    assert f.sign == -1
    assert f.factors == ((2, 14),)
    assert f.exponent(2) == 14
    assert f.exponent(3) == 0


def test_factorize_zero_raises():
    with pytest.raises(ArithmeticDomainError):
        factorize(0)


def test_omega_and_nu():
    assert omega(105) == 3
    assert omega(-1) == 0
    assert nu(2, 96) == 5
    assert nu(3, -18) == 2
    with pytest.raises(ArithmeticDomainError):
        nu(2, 0)
    assert valuation(2, 0) == INF


@pytest.mark.parametrize(
    "a, n, expected",
    [
        (5, 3, -1),
        (5, 13, -1),
        (5, 11, 1),
        (-1, 3, -1),
        (-1, 5, 1),
        (3, 2, -1),
        (7, 2, 1),
        (2, 2, 0),
        (-3, -1, -1),
        (3, -1, 1),
    ],
)
def test_kronecker(a, n, expected):
    assert kronecker(a, n) == expected


def test_kronecker_multiplicative_in_modulus(rng):
    for _ in range(1000):
        a = rng.randint(-200, 200)
        m, n = rng.randint(1, 60), rng.randint(1, 60)
        assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


def test_kronecker_multiplicative_in_numerator(rng):
    for _ in range(1000):
        a, b = rng.randint(-300, 300), rng.randint(-300, 300)
        n = rng.randint(1, 500)
        assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n), (a, b, n)


def test_quadratic_reciprocity():
    for p, q in combinations(primes_up_to(500)[1:], 2):
        sign = -1 if (p % 4 == 3 and q % 4 == 3) else 1
        assert kronecker(p, q) * kronecker(q, p) == sign, (p, q)


def test_omega_additive_on_coprime(rng):
    for _ in range(1000):
        m, n = rng.randint(1, 10**5), rng.randint(1, 10**5)
        if math.gcd(m, n) == 1:
            assert omega(m * n) == omega(m) + omega(n)


def test_squarefree_helpers():
    assert is_squarefree(-15)
    assert not is_squarefree(18)
    assert not is_squarefree(0)
    assert squarefree_part(-72) == -2
    assert radical(72) == 6


def test_divisors_positive_only():
    assert divisors(15) == [1, 3, 5, 15]
    with pytest.raises(ArithmeticDomainError):
        divisors(0)


def test_spf_sieve_matches_factorization():
    spf = spf_sieve(500)
    assert spf[0] == 0 and spf[1] == 0
    for n in range(2, 501):
        assert spf[n] == factorize(n).primes[0]
    assert primes_up_to(20) == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize("text, value", [("-2^14", -(2**14)), ("7^9", 7**9), ("2^6*5^2", 1600), ("17", 17)])
def test_parse_factored(text, value):
    assert parse_factored(text) == value
    assert parse_factored(format_factored(value)) == value


@pytest.mark.parametrize("text", ["", "-", "2^", "x^2", "0"])
def test_parse_factored_rejects(text):
    with pytest.raises(ArithmeticDomainError):
        parse_factored(text)


def test_format_valuation():
    assert format_valuation(INF) == "inf"
    assert format_valuation(6) == "6"
