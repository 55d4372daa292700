"""
Congruence-number lower bounds for y^2 = x^3 - d D^2 x.

For an odd squarefree d with m = omega(d) prime factors, the alternating sum
S = sum over D | d of (-1)^omega(D) f^(D) of the newforms of the twists has
every coefficient divisible by 2^(m + eps), eps = 1 for even m and 2 for odd m.
Since all the twists share one conductor, this bounds nu_2 of the congruence
number of each of them from below.

Provides:
- `TwistFamily` : the coefficient tables of all 2^m twists, built once.
- `alternating_sum_coeff`, `claim_check`, `telescoping_check` : the
  coefficientwise statements behind the bound.
- `twisted_coeff_check`, `parity_check` : twisted coefficients and their parity.
- `conductor_family_check`, `verify_theorem`, `corollary_check`.

Example:
    from watkins.congruence import verify_theorem

    report = verify_theorem(5, 2000)
    print(report.bound, report.min_observed_val)    # 3 3
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from sympy import isprime

from watkins.arith import INF, divisors, factorize, is_squarefree, kronecker, nu, omega
from watkins.bounds import rank_upper_AB
from watkins.curves import WeierstrassModel
from watkins.errors import ArithmeticDomainError
from watkins.hecke import DEFAULT_AP_CEILING, CoefficientTable, a_prime_power, a_q, expand, gamma
from watkins.local import conductor
from watkins.reports import ClaimCheck, CongruenceReport, CorollaryCheck, ParityCheck, Witness

__all__ = [
    "TwistFamily",
    "epsilon",
    "congruence_bound",
    "alternating_sum_coeff",
    "claim_check",
    "telescoping_check",
    "twisted_coeff_check",
    "parity_check",
    "family_conductors",
    "conductor_family_check",
    "verify_theorem",
    "corollary_check",
]

logger = logging.getLogger(__name__)

DEFAULT_MAX_OMEGA = 4
MIN_THEOREM_BOUND = 100
TIGHT_WITNESS_LIMIT = 20

#: y^2 = x^3 - x; every curve of the family is a quartic twist of it.
QUARTIC_BASE = WeierstrassModel.short(-1, 0)


def twist_curve(d: int, D: int = 1) -> WeierstrassModel:
    """y^2 = x^3 - d D^2 x."""
    return WeierstrassModel.short(-d * D * D, 0)


def _check_d(d: int) -> None:
    if d < 3 or d % 2 == 0 or not is_squarefree(d):
        raise ArithmeticDomainError(f"d must be an odd squarefree integer >= 3, got {d}")


def epsilon(m: int) -> int:
    return 1 if m % 2 == 0 else 2


def congruence_bound(d: int) -> int:
    """m + eps, equal to 2 * floor((omega(d) + 1) / 2) + 1."""
    m = omega(d)
    return m + epsilon(m)


# ----------------------------------------------------------------------
# Twist family
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TwistFamily:
    """Coefficient tables of y^2 = x^3 - d D^2 x for every D | d, up to B."""

    d: int
    B: int
    max_omega: int = DEFAULT_MAX_OMEGA
    ceiling: int = DEFAULT_AP_CEILING
    threads: int = 1
    tables: Dict[int, CoefficientTable] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        _check_d(self.d)
        if omega(self.d) > self.max_omega:
            raise ArithmeticDomainError(
                f"omega({self.d}) = {omega(self.d)} exceeds the cap {self.max_omega}"
            )
        logger.debug("Building %d twist tables for d=%d to B=%d",
                     len(divisors(self.d)), self.d, self.B)
        tables = {
            D: expand(twist_curve(self.d, D), self.B, ceiling=self.ceiling, threads=self.threads)
            for D in divisors(self.d)
        }
        object.__setattr__(self, "tables", tables)

    @property
    def m(self) -> int:
        return omega(self.d)

    @property
    def primes(self) -> List[int]:
        return factorize(self.d).primes

    @property
    def base(self) -> CoefficientTable:
        return self.tables[1]

    def coefficient(self, D: int, n: int) -> int:
        if n > self.B:
            raise ArithmeticDomainError(f"n = {n} exceeds the table bound {self.B}")
        return self.tables[D][n]


def alternating_sum_coeff(family: TwistFamily, n: int) -> int:
    """a_n of sum over D | d of (-1)^omega(D) f^(D)."""
    return sum((-1) ** omega(D) * family.coefficient(D, n) for D in family.tables)


def _split(d: int, n: int) -> Tuple[int, int]:
    """(n1, n2): n1 collects the primes of d, n2 = n / n1."""
    n1 = 1
    for p in factorize(d).primes:
        n1 *= p ** nu(p, n)
    return n1, n // n1


def claim_check(family: TwistFamily, n: int) -> ClaimCheck:
    """a_n(S) is 2^m a_n(f) when gamma_{n2}(p) = -1 for every p | d, and 0 otherwise.

    For even n2 every coefficient vanishes (a_2 = 0 across the family), so the
    expected value is 0 and gamma is not evaluated at 2.
    """
    value = alternating_sum_coeff(family, n)
    _, n2 = _split(family.d, n)
    if n2 % 2 == 0:
        all_minus = False
    else:
        all_minus = all(gamma(n2, p) == -1 for p in family.primes)
    expected = 2**family.m * family.base[n] if all_minus else 0
    return ClaimCheck(
        d=family.d,
        n=n,
        value=value,
        expected=expected,
        gamma_all_minus_one=all_minus,
        ok=value == expected,
    )


def telescoping_check(family: TwistFamily, n: int, p: int) -> bool:
    """Peel the prime p off the alternating sum.

    When gamma_{n2}(p) = -1,
    a_n(S_d) = 2 a_{n1}(f) * sum over D | d/p of (-1)^omega(D) a_{n2}(f^(D)).
    """
    if p not in family.primes:
        raise ArithmeticDomainError(f"{p} is not a prime factor of {family.d}")
    n1, n2 = _split(family.d, n)
    if gamma(n2, p) != -1:
        raise ArithmeticDomainError(f"gamma_{n2}({p}) != -1")
    inner = sum(
        (-1) ** omega(D) * family.coefficient(D, n2) for D in divisors(family.d // p)
    )
    return alternating_sum_coeff(family, n) == 2 * family.base[n1] * inner


# ----------------------------------------------------------------------
# Twisted coefficients and parity
# ----------------------------------------------------------------------


def twisted_coeff_check(family: TwistFamily, D: int) -> List[int]:
    """Indices n coprime to d where a_n(f^(D)) != gamma_n(D) a_n(f)."""
    if D not in family.tables:
        raise ArithmeticDomainError(f"{D} does not divide {family.d}")
    bad = []
    for n in range(1, family.B + 1):
        if any(n % p == 0 for p in family.primes):
            continue
        if family.coefficient(D, n) != gamma(n, D) * family.base[n]:
            bad.append(n)
    return bad


def parity_check(d: int, q: int, k: int = 1) -> ParityCheck:
    """a_{q^k}(f) is 0 mod 2 when (d/q) = 1 and 0 mod 4 when (d/q) = -1.

    When (d/q) = -1 and q = 1 mod 4 the identity
    (a_q(f)/2)^2 + (a_q(g)/2)^2 = q with g the form of y^2 = x^3 - x is checked too.
    """
    if q == 2 or d % q == 0:
        raise ArithmeticDomainError(f"q = {q} divides 2d")
    if k < 1 or k % 2 == 0:
        raise ArithmeticDomainError(f"k must be odd and positive, got {k}")
    E = twist_curve(d)
    symbol = kronecker(d, q)
    a_f = a_prime_power(E, q, k)
    modulus = 2 if symbol == 1 else 4
    a_g: Optional[int] = None
    squares_ok: Optional[bool] = None
    if symbol == -1 and q % 4 == 1:
        aq_f = a_q(E, q)
        a_g = a_q(QUARTIC_BASE, q)
        squares_ok = aq_f % 2 == 0 and a_g % 2 == 0 and (aq_f // 2) ** 2 + (a_g // 2) ** 2 == q
    return ParityCheck(
        d=d,
        q=q,
        k=k,
        symbol=symbol,
        a_f=a_f,
        modulus=modulus,
        congruence_ok=a_f % modulus == 0,
        a_g=a_g,
        sum_of_squares_ok=squares_ok,
    )


# ----------------------------------------------------------------------
# Conductors and the theorem
# ----------------------------------------------------------------------


def family_conductors(d: int) -> Dict[int, int]:
    """Conductor of y^2 = x^3 - d D^2 x for each D | d."""
    return {D: conductor(twist_curve(d, D)).value for D in divisors(d)}


def conductor_family_check(d: int) -> bool:
    """All twists y^2 = x^3 - d D^2 x, D | d, share one conductor."""
    if d < 1 or d % 2 == 0 or not is_squarefree(d):
        raise ArithmeticDomainError(f"d must be odd, positive and squarefree, got {d}")
    return len(set(family_conductors(d).values())) == 1


def verify_theorem(
    d: int,
    B: int,
    *,
    max_omega: int = DEFAULT_MAX_OMEGA,
    ceiling: int = DEFAULT_AP_CEILING,
    threads: int = 1,
) -> CongruenceReport:
    """Check nu_2(a_n(S)) >= m + eps and the claim dichotomy for every n <= B.

    Args:
        d: Odd squarefree integer >= 3.
        B: Coefficient bound, at least 100.
        max_omega: Largest omega(d) accepted (2^omega(d) tables are held in memory).
        ceiling: Point-counting ceiling.
        threads: Worker threads per coefficient table.

    Returns:
        A :class:`CongruenceReport`; zero coefficients count as valuation inf.
    """
    _check_d(d)
    if B < MIN_THEOREM_BOUND:
        raise ArithmeticDomainError(f"B must be at least {MIN_THEOREM_BOUND}, got {B}")
    family = TwistFamily(d, B, max_omega=max_omega, ceiling=ceiling, threads=threads)
    m = family.m
    eps = epsilon(m)
    bound = m + eps

    lowest = INF
    witnesses: List[Witness] = []
    violations: List[ClaimCheck] = []
    for n in range(1, B + 1):
        claim = claim_check(family, n)
        if not claim.ok:
            violations.append(claim)
        if claim.value == 0:
            continue
        v = nu(2, claim.value)
        lowest = min(lowest, v)
        if v == bound and len(witnesses) < TIGHT_WITNESS_LIMIT:
            witnesses.append(Witness(n=n, value=claim.value, val2=v))

    conductors = family_conductors(d)
    family_ok = len(set(conductors.values())) == 1
    passed = lowest >= bound and not violations and family_ok
    if passed:
        conclusion = (
            f"nu_2(delta_E) >= {bound} for every E: y^2 = x^3 - {d}D^2 x with D | {d}"
        )
    else:
        conclusion = f"lower bound {bound} not confirmed up to n = {B}"
    logger.info("d=%d B=%d: bound %d, min valuation %s, %d claim violations",
                d, B, bound, lowest, len(violations))
    return CongruenceReport(
        d=d,
        m=m,
        epsilon=eps,
        bound=bound,
        B=B,
        min_observed_val=lowest,
        tight_witnesses=tuple(witnesses),
        claim_violations=tuple(violations),
        claim_ok=not violations,
        conductor_family_ok=family_ok,
        conductor=conductors[1],
        conclusion=conclusion,
    )


def corollary_check(
    p: int,
    B: Optional[int] = None,
    *,
    ceiling: int = DEFAULT_AP_CEILING,
    threads: int = 1,
) -> CorollaryCheck:
    """Rank of y^2 = x^3 - p x and y^2 = x^3 - p^3 x is below nu_2 of their congruence number.

    With *B* the congruence bound is also confirmed by :func:`verify_theorem`.
    """
    if p == 2 or not isprime(p):
        raise ArithmeticDomainError(f"p must be an odd prime, got {p}")
    rank = max(rank_upper_AB(0, -p), rank_upper_AB(0, -(p**3)))
    checked = None
    if B is not None:
        checked = verify_theorem(p, B, ceiling=ceiling, threads=threads).passed
    return CorollaryCheck(
        p=p, rank_upper=rank, congruence_bound=congruence_bound(p), theorem_checked=checked
    )
