"""
Hecke eigenform coefficients of the newform attached to a curve.

Prime coefficients come from counting points over F_q (good q) or from the
reduction type (bad q). Prime powers follow the Hecke recursion and composite
indices are assembled multiplicatively from a smallest-prime-factor sieve.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Tuple

import numpy as np
from sympy import isprime

from watkins.arith import factorize, kronecker, primes_up_to, spf_sieve
from watkins.curves import WeierstrassModel, invariants, minimal_model, quadratic_twist
from watkins.errors import ArithmeticDomainError, EnumerationCeilingError, HasseBoundError
from watkins.local import tate

__all__ = [
    "DEFAULT_AP_CEILING",
    "CoefficientTable",
    "a_q",
    "a_prime_power",
    "count_points",
    "expand",
    "gamma",
    "twist_table",
    "twist_identity_violations",
]

logger = logging.getLogger(__name__)

DEFAULT_AP_CEILING = 10**6


def count_points(model: WeierstrassModel, q: int) -> int:
    """Number of projective points of the reduction of *model* over F_q."""
    if q == 2:
        a1, a2, a3, a4, a6 = model.ainvs
        affine = sum(
            1
            for x in (0, 1)
            for y in (0, 1)
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0
        )
        return affine + 1
    inv = invariants(model)
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    xs = np.arange(q, dtype=np.int64)
    values = np.full(q, 4 % q, dtype=np.int64)
    for coeff in (inv.b2, 2 * inv.b4, inv.b6):
        values = (values * xs + coeff % q) % q
    chi = np.full(q, -1, dtype=np.int64)
    chi[(xs * xs) % q] = 1
    chi[0] = 0
    return q + 1 + int(chi[values].sum())


def _check_hasse(q: int, aq: int) -> int:
    if aq * aq > 4 * q:
        raise HasseBoundError(f"a_{q} = {aq} violates the Hasse bound")
    return aq


def a_q(model: WeierstrassModel, q: int, ceiling: int = DEFAULT_AP_CEILING) -> int:
    """Trace of Frobenius at the prime *q*; +1/-1/0 at bad primes by reduction kind."""
    if not isprime(q):
        raise ArithmeticDomainError(f"{q} is not a prime")
    if q > ceiling:
        raise EnumerationCeilingError(f"q = {q} exceeds the enumeration ceiling {ceiling}")
    minimal, _ = minimal_model(model)
    if invariants(minimal).disc % q == 0:
        return tate(minimal, q).kind.bad_coefficient
    return _check_hasse(q, q + 1 - count_points(minimal, q))


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients a(1..bound) of the newform of ``curve`` (a minimal model).

    Index with ``table[n]``; the table is immutable once built.
    """

    curve: WeierstrassModel
    bound: int
    coefficients: Tuple[int, ...]
    bad_primes: FrozenSet[int] = frozenset()

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.bound:
            raise IndexError(f"a_{n} outside table bound {self.bound}")
        return self.coefficients[n]

    def __len__(self) -> int:
        return self.bound

    def primes(self) -> List[int]:
        return primes_up_to(self.bound)

    def as_rows(self) -> List[Tuple[int, int]]:
        return [(n, self.coefficients[n]) for n in range(1, self.bound + 1)]

    def mod(self, m: int) -> Tuple[int, ...]:
        return tuple(a % m for a in self.coefficients[1:])

    def check(self) -> List[str]:
        """Invariant violations (empty when the table is sound)."""
        problems: List[str] = []
        a = self.coefficients
        if self.bound >= 1 and a[1] != 1:
            problems.append(f"a_1 = {a[1]}")
        spf = spf_sieve(self.bound)
        for n in range(2, self.bound + 1):
            p = int(spf[n])
            pk, m = 1, n
            while m % p == 0:
                m //= p
                pk *= p
            if m == 1:
                if pk == p:
                    if p in self.bad_primes and a[p] not in (-1, 0, 1):
                        problems.append(f"a_{p} = {a[p]} at a bad prime")
                    if p not in self.bad_primes and a[p] * a[p] > 4 * p:
                        problems.append(f"a_{p} = {a[p]} violates Hasse")
            elif a[n] != a[pk] * a[m]:
                problems.append(f"a_{n} != a_{pk} * a_{m}")
        return problems


def a_prime_power(model: WeierstrassModel, q: int, k: int) -> int:
    """a(q^k) from a_q through the Hecke recursion."""
    if k < 0:
        raise ArithmeticDomainError(f"Negative exponent {k}")
    minimal, _ = minimal_model(model)
    aq = a_q(minimal, q)
    bad = invariants(minimal).disc % q == 0
    prev, cur = 1, aq
    if k == 0:
        return 1
    for _ in range(k - 1):
        prev, cur = cur, (aq * cur if bad else aq * cur - q * prev)
    return cur


def _prime_power_coefficients(aq: int, q: int, bad: bool, bound: int) -> Dict[int, int]:
    out = {q: aq}
    prev, cur, power = 1, aq, q
    while power * q <= bound:
        nxt = aq * cur if bad else aq * cur - q * prev
        power *= q
        out[power] = nxt
        prev, cur = cur, nxt
    return out


@lru_cache(maxsize=256)
def _expand_minimal(
    minimal: WeierstrassModel, bound: int, ceiling: int, threads: int
) -> CoefficientTable:
    bad = frozenset(factorize(invariants(minimal).disc).primes)
    primes = primes_up_to(bound)
    logger.debug("Expanding %s to %d (%d primes)", minimal, bound, len(primes))
    if threads > 1 and len(primes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            traces = list(executor.map(lambda q: a_q(minimal, q, ceiling), primes))
    else:
        traces = [a_q(minimal, q, ceiling) for q in primes]

    a = [0] * (bound + 1)
    if bound >= 1:
        a[1] = 1
    for q, aq in zip(primes, traces):
        for n, value in _prime_power_coefficients(aq, q, q in bad, bound).items():
            a[n] = value
    spf = spf_sieve(bound)
    for n in range(2, bound + 1):
        p = int(spf[n])
        pk, m = 1, n
        while m % p == 0:
            m //= p
            pk *= p
        if m != 1:
            a[n] = a[pk] * a[m]
    return CoefficientTable(minimal, bound, tuple(a), bad)


def expand(
    model: WeierstrassModel,
    bound: int,
    *,
    ceiling: int = DEFAULT_AP_CEILING,
    threads: int = 1,
) -> CoefficientTable:
    """Coefficient table a(1..bound) for the minimal model of *model*.

    Args:
        model: Any integral model of the curve.
        bound: Largest index to compute.
        ceiling: Largest prime allowed for point counting.
        threads: Worker threads for the prime coefficients. The table does
            not depend on it.
    """
    if bound < 1:
        raise ArithmeticDomainError(f"Coefficient bound must be positive, got {bound}")
    if bound > ceiling:
        raise EnumerationCeilingError(f"Bound {bound} exceeds the enumeration ceiling {ceiling}")
    minimal, _ = minimal_model(model)
    return _expand_minimal(minimal, bound, ceiling, max(1, threads))


def gamma(n: int, D: int) -> int:
    """Product of (D/q)^k over the prime powers q^k exactly dividing *n*."""
    if n < 1:
        raise ArithmeticDomainError(f"gamma needs a positive index, got {n}")
    value = 1
    for q, e in factorize(n).factors:
        symbol = kronecker(D, q)
        if symbol == 0:
            raise ArithmeticDomainError(f"({D}/{q}) = 0 inside gamma_{n}")
        if e % 2 == 1:
            value *= symbol
    return value


def twist_table(
    model: WeierstrassModel,
    D: int,
    bound: int,
    *,
    ceiling: int = DEFAULT_AP_CEILING,
    threads: int = 1,
) -> CoefficientTable:
    """Coefficients of the twist by *D*, computed from the twisted curve itself."""
    return expand(quadratic_twist(model, D), bound, ceiling=ceiling, threads=threads)


def twist_identity_violations(
    model: WeierstrassModel, D: int, primes: Iterable[int]
) -> List[Tuple[int, int, int]]:
    """Primes q (good for both curves) where a_q(E^D) != (D/q) a_q(E).

    Returns ``(q, a_q(E), a_q(E^D))`` triples.
    """
    twisted = quadratic_twist(model, D)
    bad = set(factorize(invariants(minimal_model(model)[0]).disc).primes)
    bad |= set(factorize(invariants(twisted).disc).primes)
    out = []
    for q in primes:
        if q in bad:
            continue
        base, tw = a_q(model, q), a_q(twisted, q)
        if tw != kronecker(D, q) * base:
            out.append((q, base, tw))
    return out

