"""
Local reduction data via Tate's algorithm.

:func:`tate` runs the full algorithm at any prime, including the wildly
ramified cases at 2 and 3, and reduces non-minimal models along the way.
:func:`conductor` assembles the global conductor from the local exponents.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from sympy import isprime

from watkins.arith import Factorization, factorize, nu, valuation
from watkins.curves import WeierstrassModel, invariants, minimal_model, quadratic_twist
from watkins.errors import ArithmeticDomainError

__all__ = [
    "Kind",
    "LocalReduction",
    "Conductor",
    "tate",
    "conductor",
    "bad_primes",
    "discriminant_ratio_val2",
    "corollary_expectation",
]

logger = logging.getLogger(__name__)

AInvariants = Tuple[int, int, int, int, int]


class Kind(Enum):
    """Reduction type of a curve at a prime."""

    GOOD = "good"
    SPLIT = "split-multiplicative"
    NONSPLIT = "nonsplit-multiplicative"
    ADDITIVE = "additive"

    @property
    def is_multiplicative(self) -> bool:
        return self in (Kind.SPLIT, Kind.NONSPLIT)

    @property
    def bad_coefficient(self) -> int:
        """a_p at a bad prime of this kind."""
        if self == Kind.SPLIT:
            return 1
        if self == Kind.NONSPLIT:
            return -1
        if self == Kind.ADDITIVE:
            return 0
        raise ValueError("Good reduction has no fixed coefficient")


@dataclass(frozen=True)
class LocalReduction:
    """Reduction data of a curve at one prime.

    Attributes:
        p: The prime.
        kind: Good, split/nonsplit multiplicative or additive.
        kodaira: Kodaira symbol (diagnostic only).
        f_p: Conductor exponent.
        v_disc_min: Valuation of the minimal discriminant at p.
        model: The p-minimal model reached by the algorithm.
        was_minimal: Whether the input model was already minimal at p.
    """

    p: int
    kind: Kind
    kodaira: str
    f_p: int
    v_disc_min: int
    model: WeierstrassModel
    was_minimal: bool = True

    def __post_init__(self) -> None:
        good = self.kind == Kind.GOOD
        if good != (self.f_p == 0) or good != (self.v_disc_min == 0):
            raise ArithmeticDomainError(f"Inconsistent local data at {self.p}: {self}")
        if self.kind.is_multiplicative and self.f_p != 1:
            raise ArithmeticDomainError(f"Multiplicative reduction with f_{self.p}={self.f_p}")
        if self.kind == Kind.ADDITIVE:
            if self.f_p < 2 or (self.p >= 5 and self.f_p != 2):
                raise ArithmeticDomainError(f"Additive reduction with f_{self.p}={self.f_p}")


@dataclass(frozen=True)
class Conductor:
    value: int
    factorization: Factorization
    locals: Tuple[LocalReduction, ...]

    def local(self, p: int) -> LocalReduction:
        for data in self.locals:
            if data.p == p:
                return data
        raise KeyError(p)


# ----------------------------------------------------------------------
# Tate's algorithm
# ----------------------------------------------------------------------


def _rst(a: AInvariants, r: int = 0, s: int = 0, t: int = 0) -> AInvariants:
    """Integral change of coordinates with u = 1."""
    a1, a2, a3, a4, a6 = a
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def _quadroots(a: int, b: int, c: int, p: int) -> bool:
    """Whether a x^2 + b x + c has a root in F_p."""
    a, b, c = a % p, b % p, c % p
    if a == 0:
        return b != 0 or c == 0
    if p == 2:
        return c == 0 or (a + b + c) % 2 == 0
    disc = (b * b - 4 * a * c) % p
    return disc == 0 or pow(disc, (p - 1) // 2, p) == 1


def _b_invariants(a: AInvariants) -> Tuple[int, int, int, int]:
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


@lru_cache(maxsize=8192)
def tate(model: WeierstrassModel, p: int) -> LocalReduction:
    """Local reduction data of *model* at the prime *p*.

    Works on any integral model; non-minimal models are reduced at p first.
    """
    if not isprime(p):
        raise ArithmeticDomainError(f"{p} is not a prime")

    def pdiv(x: int) -> bool:
        return x % p == 0

    def pinv(x: int) -> int:
        return pow(x % p, -1, p)

    half = pinv(2) if p != 2 else 0
    a: AInvariants = model.ainvs
    was_minimal = True

    while True:
        inv = invariants(WeierstrassModel(*a))
        v_disc = nu(p, inv.disc)
        if v_disc == 0:
            return LocalReduction(p, Kind.GOOD, "I0", 0, 0, WeierstrassModel(*a), was_minimal)

        a1, a2, a3, a4, a6 = a
        b2, b4, b6, b8 = _b_invariants(a)
        c4, c6 = inv.c4, inv.c6

        # Move the singular point of the reduction to (0, 0).
        if p == 2:
            if pdiv(b2):
                r = a4 % 2
                t = (((r + a2) * r + a4) * r + a6) % 2
            else:
                r = a3 % 2
                t = (a4 + r * a3) % 2
        elif p == 3:
            r = (-b6) % 3 if pdiv(b2) else (-pinv(b2) * b4) % 3
            t = (a1 * r + a3) % 3
        else:
            if pdiv(c4):
                r = (-pinv(12) * b2) % p
            else:
                r = (-pinv(12 * c4) * (c6 + b2 * c4)) % p
            t = (-half * (a1 * r + a3)) % p
        a = _rst(a, r=r, t=t)
        a1, a2, a3, a4, a6 = a
        b2, b4, b6, b8 = _b_invariants(a)

        if not pdiv(b2):
            split = _quadroots(1, a1, -a2, p)
            kind = Kind.SPLIT if split else Kind.NONSPLIT
            return LocalReduction(
                p, kind, f"I{v_disc}", 1, v_disc, WeierstrassModel(*a), was_minimal
            )
        if valuation(p, a6) < 2:
            return _additive(p, "II", v_disc, v_disc, a, was_minimal)
        if valuation(p, b8) < 3:
            return _additive(p, "III", v_disc - 1, v_disc, a, was_minimal)
        if valuation(p, b6) < 3:
            return _additive(p, "IV", v_disc - 2, v_disc, a, was_minimal)

        # Now arrange p | a1, a2 and p^2 | a3, a4 and p^3 | a6.
        if p == 2:
            s = a2 % 2
            t = 2 * ((a6 // 4) % 2)
        elif p == 3:
            s, t = a1, a3
        else:
            s, t = -a1 * half, -a3 * half
        a = _rst(a, s=s, t=t)
        a1, a2, a3, a4, a6 = a

        b, c, d = a2 // p, a4 // p**2, a6 // p**3
        w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
        x = 3 * c - b * b
        if pdiv(w):
            sw = 3 if pdiv(x) else 2
        else:
            sw = 1

        if sw == 1:
            return _additive(p, "I0*", v_disc - 4, v_disc, a, was_minimal)

        if sw == 2:
            # Double root of the cubic: move it to 0 and peel off I*_m.
            if p == 2:
                r = c % 2
            elif p == 3:
                r = (c * pinv(b)) % 3
            else:
                r = ((b * c - 9 * d) * pinv(2 * x)) % p
            a = _rst(a, r=p * r)
            ix, iy = 3, 3
            mx, my = p * p, p * p
            while True:
                a1, a2, a3, a4, a6 = a
                a2t, a3t, a4t, a6t = a2 // p, a3 // my, a4 // (p * mx), a6 // (mx * my)
                if not pdiv(a3t * a3t + 4 * a6t):
                    break
                t = my * (a6t % 2) if p == 2 else my * ((-a3t * half) % p)
                a = _rst(a, t=t)
                my *= p
                iy += 1
                a1, a2, a3, a4, a6 = a
                a2t, a3t, a4t, a6t = a2 // p, a3 // my, a4 // (p * mx), a6 // (mx * my)
                if not pdiv(a4t * a4t - 4 * a6t * a2t):
                    break
                if p == 2:
                    r = mx * ((a6t * pinv(a2t)) % 2)
                else:
                    r = mx * ((-a4t * pinv(2 * a2t)) % p)
                a = _rst(a, r=r)
                mx *= p
                ix += 1
            m = ix + iy - 5
            return _additive(p, f"I{m}*", v_disc - ix - iy + 1, v_disc, a, was_minimal)

        # Triple root: move it to 0.
        if p == 2:
            r = b % 2
        elif p == 3:
            r = (-d) % 3
        else:
            r = (-b * pinv(3)) % p
        a = _rst(a, r=p * r)
        a1, a2, a3, a4, a6 = a
        a3t, a6t = a3 // p**2, a6 // p**4
        if not pdiv(a3t * a3t + 4 * a6t):
            return _additive(p, "IV*", v_disc - 6, v_disc, a, was_minimal)
        t = -(p**2) * (a6t % 2) if p == 2 else p**2 * ((-a3t * half) % p)
        a = _rst(a, t=t)
        a1, a2, a3, a4, a6 = a
        if valuation(p, a4) < 4:
            return _additive(p, "III*", v_disc - 7, v_disc, a, was_minimal)
        if valuation(p, a6) < 6:
            return _additive(p, "II*", v_disc - 8, v_disc, a, was_minimal)

        logger.debug("Model %s is not minimal at %d; scaling down", model, p)
        was_minimal = False
        a = (a1 // p, a2 // p**2, a3 // p**3, a4 // p**4, a6 // p**6)


def _additive(
    p: int, kodaira: str, f_p: int, v_disc: int, a: AInvariants, was_minimal: bool
) -> LocalReduction:
    return LocalReduction(
        p, Kind.ADDITIVE, kodaira, f_p, v_disc, WeierstrassModel(*a), was_minimal
    )


# ----------------------------------------------------------------------
# Global data
# ----------------------------------------------------------------------


def bad_primes(model: WeierstrassModel) -> List[int]:
    minimal, _ = minimal_model(model)
    return factorize(invariants(minimal).disc).primes


@lru_cache(maxsize=4096)
def conductor(model: WeierstrassModel) -> Conductor:
    """Global conductor as the product of p^f_p over the bad primes."""
    minimal, _ = minimal_model(model)
    data = tuple(tate(minimal, p) for p in bad_primes(minimal))
    value = 1
    for d in data:
        value *= d.p**d.f_p
    return Conductor(value=value, factorization=factorize(value), locals=data)


def discriminant_ratio_val2(E: WeierstrassModel, D: int) -> Fraction:
    """(1/6) * v_2(disc(E^D) / disc(E)) on minimal discriminants."""
    base = invariants(minimal_model(E)[0]).disc
    twisted = invariants(quadratic_twist(E, D)).disc
    return Fraction(nu(2, twisted) - nu(2, base), 6)


def corollary_expectation(D: int) -> int:
    """Closed form of the discriminant term for odd-discriminant curves with 2-torsion."""
    if D % 2 == 0:
        return 3
    return 0 if D % 4 == 1 else 2
