"""
Exact integer utilities shared by every other module.

Factorization, p-adic valuations, the distinct-prime count ``omega``, the full
Kronecker symbol and divisor enumeration. Heavy lifting is delegated to sympy's
number-theory routines; this module only fixes conventions (signs, zero input,
the Kronecker extension to even and negative moduli).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple, Union

import numpy as np
from sympy import divisors as _sympy_divisors
from sympy import factorint, isprime, jacobi_symbol, primerange

from watkins.errors import ArithmeticDomainError

__all__ = [
    "INF",
    "Valuation",
    "Factorization",
    "factorize",
    "omega",
    "nu",
    "valuation",
    "kronecker",
    "divisors",
    "is_squarefree",
    "squarefree_part",
    "radical",
    "primes_up_to",
    "spf_sieve",
    "parse_factored",
    "format_factored",
    "format_valuation",
]

#: Valuation of zero. Compares correctly against ints.
INF = math.inf

Valuation = Union[int, float]


@dataclass(frozen=True)
class Factorization:
    """Signed prime factorization of a nonzero integer.

    Attributes:
        value: The factored integer.
        sign: ``1`` or ``-1``.
        factors: ``(prime, exponent)`` pairs, primes strictly increasing.
    """

    value: int
    sign: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.value == 0:
            raise ArithmeticDomainError("Factorization of zero is undefined")
        if self.sign not in (1, -1):
            raise ArithmeticDomainError(f"Invalid sign {self.sign}")
        product = self.sign
        previous = 1
        for p, e in self.factors:
            if p <= previous or e < 1 or not isprime(p):
                raise ArithmeticDomainError(f"Invalid factor {p}^{e} in {self.value}")
            previous = p
            product *= p**e
        if product != self.value:
            raise ArithmeticDomainError(
                f"Factors of {self.value} multiply to {product}"
            )

    @property
    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def radical(self) -> int:
        return math.prod(self.primes)

    def exponent(self, p: int) -> int:
        """Exponent of *p* (``0`` when *p* does not divide the value)."""
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def __str__(self) -> str:
        return format_factored(self.value)


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    """Factor a nonzero integer; the sign is carried separately."""
    if n == 0:
        raise ArithmeticDomainError("Cannot factor zero")
    factors = tuple(sorted((int(p), int(e)) for p, e in factorint(abs(n)).items()))
    return Factorization(value=n, sign=1 if n > 0 else -1, factors=factors)


def omega(n: int) -> int:
    """Number of distinct primes dividing ``|n|``."""
    if n == 0:
        raise ArithmeticDomainError("omega(0) is undefined")
    return factorize(n).omega


def nu(p: int, n: int) -> int:
    """Largest ``k`` with ``p**k`` dividing *n*. Zero is rejected; see :func:`valuation`."""
    if n == 0:
        raise ArithmeticDomainError(f"nu_{p}(0) is infinite")
    if p < 2:
        raise ArithmeticDomainError(f"{p} is not a prime")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def valuation(p: int, n: int) -> Valuation:
    """Like :func:`nu` but returns :data:`INF` for zero."""
    return INF if n == 0 else nu(p, n)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol ``(a/n)`` for arbitrary integers.

    Odd positive moduli go through sympy's Jacobi symbol; factors of 2 use the
    ``a mod 8`` rule and ``(a/-1)`` is the sign of *a*.
    """
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 == 1 and a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * int(jacobi_symbol(a % n, n))


def divisors(n: int) -> List[int]:
    """Positive divisors of *n* in ascending order."""
    if n < 1:
        raise ArithmeticDomainError(f"divisors expects a positive integer, got {n}")
    return [int(d) for d in _sympy_divisors(n)]


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(n).factors)


def squarefree_part(n: int) -> int:
    """Signed squarefree representative of ``n`` modulo squares."""
    f = factorize(n)
    return f.sign * math.prod(p for p, e in f.factors if e % 2 == 1)


def radical(n: int) -> int:
    return factorize(n).radical


def primes_up_to(bound: int) -> List[int]:
    return [int(p) for p in primerange(2, bound + 1)]


@lru_cache(maxsize=8)
def spf_sieve(bound: int) -> np.ndarray:
    """Smallest-prime-factor table ``spf[n]`` for ``0 <= n <= bound`` (``spf[0] = spf[1] = 0``)."""
    spf = np.zeros(bound + 1, dtype=np.int64)
    for p in range(2, math.isqrt(bound) + 1):
        if spf[p] == 0:
            block = spf[p::p]
            block[block == 0] = p
    untouched = spf == 0
    spf[untouched] = np.arange(bound + 1)[untouched]
    spf[:2] = 0
    spf.setflags(write=False)
    return spf


_FACTOR_RE = re.compile(r"^(\d+)(?:\^(\d+))?$")


def parse_factored(text: str) -> int:
    """Parse signed factored strings such as ``-2^14``, ``7^9`` or ``2^6*5^2``."""
    s = text.strip().replace(" ", "")
    sign = 1
    if s.startswith("-"):
        sign, s = -1, s[1:]
    elif s.startswith("+"):
        s = s[1:]
    if not s:
        raise ArithmeticDomainError(f"Empty factored value {text!r}")
    value = 1
    for part in s.split("*"):
        m = _FACTOR_RE.match(part)
        if m is None:
            raise ArithmeticDomainError(f"Malformed factored value {text!r}")
        base, exp = int(m.group(1)), int(m.group(2) or 1)
        value *= base**exp
    if value == 0:
        raise ArithmeticDomainError(f"Factored value {text!r} is zero")
    return sign * value


def format_factored(n: int) -> str:
    """Inverse of :func:`parse_factored` for prime-power products."""
    f = factorize(n)
    sign = "-" if f.sign < 0 else ""
    if not f.factors:
        return f"{sign}1"
    body = "*".join(str(p) if e == 1 else f"{p}^{e}" for p, e in f.factors)
    return f"{sign}{body}"


def format_valuation(v: Valuation) -> str:
    return "inf" if v == INF else str(int(v))
