"""
Valuation bounds for the modular degree of quadratic twists.

The 2-adic valuation of the modular degree of E^(D) is bounded below by three
terms: nu_2(m_E / c_E^2), the valuation of the Petersson-norm ratio, and a sixth
of the valuation of the discriminant ratio. The rank of E^(D) is bounded above
by 2-descent. :func:`watkins_verdict` compares the two.

Provides:
- `V`, `U`, `U2` : the local factors of the Petersson-norm ratio.
- `ClassifiedCurve` / `classify` : curves the bounds apply to.
- `petersson_val_lower` : closed-form (cased) or term-by-term (refined) bound.
- `rank_upper_*` : rank bounds from the conductor, from the (A, B) model, for
  prime-power conductors, and for y^2 = x^3 - d x.
- `watkins_verdict` : the full report for one (E, D).

Example:
    from watkins.bounds import classify, watkins_verdict
    from watkins.families import resolve

    report = watkins_verdict(classify(resolve("32.a3")), 6)
    print(report.verdict, report.mdeg_val_lower, report.rank_upper)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from watkins.arith import factorize, is_squarefree, nu, omega, primes_up_to
from watkins.curves import WeierstrassModel, has_rational_two_torsion, quadratic_twist
from watkins.errors import ArithmeticDomainError, HasseBoundError, OutsideClassificationError
from watkins.families import CurveBundle, CurveRecord, load_bundle, setzer_record
from watkins.hecke import a_q
from watkins.local import conductor, discriminant_ratio_val2
from watkins.reports import (
    SMALL_CONDUCTOR_NOTE,
    UNDECIDED_NOTE,
    CaseTag,
    Verdict,
    WatkinsReport,
    WatkinsTerms,
)

__all__ = [
    "Mode",
    "V",
    "U",
    "U2",
    "ClassifiedCurve",
    "classify",
    "classify_setzer",
    "petersson_val_lower",
    "rank_upper_general",
    "rank_upper_AB",
    "rank_upper_lemma",
    "rank_upper_twist",
    "rank_upper_dx",
    "mdeg_val_lower",
    "watkins_verdict",
    "sweep_claimed_territory",
    "proof_inequality",
    "v_parity_violations",
]

logger = logging.getLogger(__name__)

SMALL_CONDUCTOR = 10_000


class Mode(str, Enum):
    CASED = "cased"
    REFINED = "refined"
    AUTO = "auto"


# ----------------------------------------------------------------------
# Local factors
# ----------------------------------------------------------------------


def _hasse(q: int, aq: int) -> None:
    if aq * aq > 4 * q:
        raise HasseBoundError(f"a_{q} = {aq} violates the Hasse bound")


def V(q: int, aq: int) -> int:
    """(q - 1)(q + 1 - a_q)(q + 1 + a_q)."""
    _hasse(q, aq)
    return (q - 1) * (q + 1 - aq) * (q + 1 + aq)


def U(q: int) -> int:
    return (q - 1) * (q + 1)


def U2(a2: int) -> int:
    """2(3 - a_2)(3 + a_2)."""
    _hasse(2, a2)
    return 2 * (3 - a2) * (3 + a2)


# ----------------------------------------------------------------------
# Classified curves
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ClassifiedCurve:
    """A curve of prime-power conductor p^alpha with rational 2-torsion.

    ``special`` tags the two curves with larger torsion, whose bounds are
    sharper: ``"17.a4"`` (a point of order 4) and ``"32.a3"`` (full 2-torsion).
    """

    record: CurveRecord
    p: int
    alpha: int
    special: Optional[str] = None

    @property
    def label(self) -> str:
        return self.record.label

    @property
    def model(self) -> WeierstrassModel:
        return self.record.model

    @property
    def conductor(self) -> int:
        return self.p**self.alpha

    @property
    def odd(self) -> bool:
        return self.p != 2

    @property
    def v2_m_over_c2(self) -> int:
        return self.record.v2_m_over_c2


_SPECIAL = ("17.a4", "32.a3")
_TABLE_CONDUCTORS = (17, 49, 32, 128)


def classify(record: CurveRecord) -> ClassifiedCurve:
    """Place *record* in one of the families the bounds cover.

    Raises:
        OutsideClassificationError: for any other curve.
    """
    N = record.conductor_label
    f = factorize(N)
    allowed = N in _TABLE_CONDUCTORS or (record.source == "setzer" and f.omega == 1 and N > 17)
    if not allowed or f.omega != 1:
        raise OutsideClassificationError(
            f"{record.label} is not a classified curve of prime-power conductor"
        )
    if not has_rational_two_torsion(record.model):
        raise OutsideClassificationError(f"{record.label} has no rational 2-torsion")
    p, alpha = f.factors[0]
    special = record.label if record.label in _SPECIAL else None
    return ClassifiedCurve(record=record, p=p, alpha=alpha, special=special)


def classify_setzer(p: int, index: int) -> ClassifiedCurve:
    return classify(setzer_record(p, index))


# ----------------------------------------------------------------------
# Petersson-norm ratio
# ----------------------------------------------------------------------


def _check_twist(E: ClassifiedCurve, D: int) -> None:
    if not is_squarefree(D):
        raise ArithmeticDomainError(f"Twist parameter {D} is not squarefree")
    if E.odd and E.alpha == 2 and D % E.p == 0:
        raise ArithmeticDomainError(
            f"{E.label} has conductor {E.p}^2; twists by multiples of {E.p} must be "
            f"rewritten through {p_star(E.p)} first"
        )


def p_star(p: int) -> int:
    """The sign of +-p that is 1 mod 4."""
    return p if p % 4 == 1 else -p


def _cased(E: ClassifiedCurve, D: int) -> Tuple[CaseTag, int]:
    w = omega(D)
    v2 = nu(2, D)
    if E.odd:
        q = abs(D)
        if w == 1 and q % 4 == 1 and q % E.p != 0:
            return CaseTag.REMARK, 5 if E.special == "17.a4" else 4
        if E.special == "17.a4":
            return CaseTag.II, 4 * w
        return CaseTag.I, 3 * w
    if E.special == "32.a3":
        return CaseTag.IV, 4 * w - 3 * v2
    return CaseTag.III, 3 * w - 2 * v2


def _refined(E: ClassifiedCurve, D: int) -> int:
    total = 0
    for q in factorize(D).primes:
        if E.odd and q == E.p:
            total += nu(2, U(q))
        elif q == 2:
            total += nu(2, U2(a_q(E.model, 2))) if E.odd else 1
        else:
            total += nu(2, V(q, a_q(E.model, q)))
    return total


def petersson_val_lower(
    E: ClassifiedCurve, D: int, mode: Union[Mode, str] = Mode.CASED
) -> int:
    """Lower bound on nu_2 of the Petersson-norm ratio of E^(D) to E.

    ``cased`` uses the closed forms for the four families (and the sharper
    value for a single prime |D| = 1 mod 4); ``refined`` sums the local
    factors with the actual coefficients and is never smaller.
    """
    mode = Mode(mode)
    _check_twist(E, D)
    if mode == Mode.REFINED:
        return _refined(E, D)
    return _cased(E, D)[1]


# ----------------------------------------------------------------------
# Rank bounds
# ----------------------------------------------------------------------


def rank_upper_general(N: int) -> int:
    """2 omega(N) - 1 for a curve of conductor N with rational 2-torsion."""
    if N < 1:
        raise ArithmeticDomainError(f"Conductor must be positive, got {N}")
    return 2 * omega(N) - 1


def rank_upper_AB(A: int, B: int) -> int:
    """omega(A^2 - 4B) + omega(B) - 1 for y^2 = x^3 + A x^2 + B x."""
    if B == 0 or A * A - 4 * B == 0:
        raise ArithmeticDomainError(f"y^2 = x^3 + {A}x^2 + {B}x is singular")
    return omega(A * A - 4 * B) + omega(B) - 1


def rank_upper_lemma(E: ClassifiedCurve, D: int) -> int:
    """2 omega(D) + 1 - 2 nu_p(D), the closed form for prime-power conductor p^alpha."""
    w = omega(D)
    return 2 * w + 1 - 2 * nu(E.p, D)


def rank_upper_twist(E: ClassifiedCurve, D: int) -> int:
    """2 omega(N^(D)) - 1 with the twist conductor computed by Tate's algorithm.

    Unlike :func:`rank_upper_lemma` this counts the prime 2 when the twist by
    an odd D = 3 mod 4 ramifies there.
    """
    return rank_upper_general(conductor(quadratic_twist(E.model, D)).value)


def rank_upper_dx(d: int) -> int:
    """2 omega(d) - nu_2(d) for y^2 = x^3 - d x."""
    if d == 0:
        raise ArithmeticDomainError("y^2 = x^3 is singular")
    return 2 * omega(d) - nu(2, d)


# ----------------------------------------------------------------------
# Assembly
# ----------------------------------------------------------------------


def mdeg_val_lower(
    E: ClassifiedCurve, D: int, petersson: int, v2_m_over_c2: Optional[int] = None
) -> Fraction:
    """nu_2(m_E/c_E^2) + petersson + (1/6) nu_2(disc(E^(D)) / disc(E))."""
    v2 = E.v2_m_over_c2 if v2_m_over_c2 is None else v2_m_over_c2
    return v2 + petersson + discriminant_ratio_val2(E.model, D)


def _fallback(twist_conductor: int) -> Tuple[Verdict, Tuple[str, ...]]:
    if factorize(twist_conductor).omega == 1:
        return Verdict.KNOWN_PRIME_POWER, ()
    if twist_conductor < SMALL_CONDUCTOR:
        return Verdict.KNOWN_SMALL_CONDUCTOR, (SMALL_CONDUCTOR_NOTE,)
    return Verdict.UNDECIDED_BY_BOUNDS, (UNDECIDED_NOTE,)


def _reduce_through_p_star(
    E: ClassifiedCurve, D: int, bundle: CurveBundle
) -> Tuple[ClassifiedCurve, int, str]:
    ps = p_star(E.p)
    twisted = quadratic_twist(E.model, ps)
    record = bundle.find(twisted)
    if record is None:
        raise OutsideClassificationError(
            f"twist of {E.label} by {ps} is not in the bundle"
        )
    logger.debug("Rewriting %s^(%d) as %s^(%d)", E.label, D, record.label, D // ps)
    return classify(record), D // ps, f"{E.label}^({ps}) = {record.label}"


def watkins_verdict(
    E: ClassifiedCurve,
    D: int,
    mode: Union[Mode, str] = Mode.AUTO,
    *,
    bundle: Optional[CurveBundle] = None,
) -> WatkinsReport:
    """Compare the modular-degree valuation bound of E^(D) with its rank bound.

    In ``auto`` mode the closed-form bound is tried first and the refined one
    only when it falls short. When neither settles the inequality the verdict
    falls back to the known results for prime-power and small conductors.

    Args:
        E: A classified curve.
        D: Squarefree twist parameter.
        mode: ``cased``, ``refined`` or ``auto``.
        bundle: Curve bundle used to locate E^(p*) for conductor p^2.
    """
    mode = Mode(mode)
    if not is_squarefree(D):
        raise ArithmeticDomainError(f"Twist parameter {D} is not squarefree")
    if E.odd and E.alpha == 2 and D % E.p == 0:
        bundle = bundle if bundle is not None else load_bundle()
        base, rest, via = _reduce_through_p_star(E, D, bundle)
        report = watkins_verdict(base, rest, mode, bundle=bundle)
        return report.model_copy(update={"curve": E.label, "D": D, "reduced_via": via})

    twisted = quadratic_twist(E.model, D)
    N_tw = conductor(twisted).value
    rank = rank_upper_general(N_tw)
    if E.special == "32.a3":
        rank = min(rank, rank_upper_AB(0, -D * D))
    rank_lemma = rank_upper_lemma(E, D)
    disc = discriminant_ratio_val2(E.model, D)
    v2 = E.v2_m_over_c2

    case, petersson = _cased(E, D)
    if mode == Mode.REFINED or (
        mode == Mode.AUTO and v2 + petersson + disc < rank
    ):
        case, petersson = CaseTag.REFINED, _refined(E, D)
    lower = mdeg_val_lower(E, D, petersson)

    notes: Tuple[str, ...] = ()
    if rank <= lower:
        verdict = Verdict.HOLDS_BY_BOUNDS
    else:
        verdict, notes = _fallback(N_tw)
    logger.debug("%s D=%d: mdeg >= %s, rank <= %d -> %s", E.label, D, lower, rank, verdict.value)
    return WatkinsReport(
        curve=E.label,
        D=D,
        rank_upper=rank,
        terms=WatkinsTerms(v2_m_over_c2=v2, petersson=petersson, disc=disc),
        mdeg_val_lower=lower,
        verdict=verdict,
        case=case,
        v2_source=E.record.v2_source,
        twist_conductor=N_tw,
        rank_lemma=rank_lemma,
        lemma_underestimates=rank_lemma < rank,
        notes=notes,
    )


# ----------------------------------------------------------------------
# Territory covered by the closed-form argument
# ----------------------------------------------------------------------


def sweep_claimed_territory(E: ClassifiedCurve, D: int) -> bool:
    """Whether (E, D) lies where the closed-form bounds alone prove the inequality."""
    if E.odd:
        if E.alpha == 2 and D % E.p == 0:
            D //= p_star(E.p)
        return omega(D) >= 2
    w = omega(D)
    v2 = nu(2, D)
    if E.special == "32.a3":
        return 2 * w >= 1 + 3 * v2
    return w >= 1 + v2


def proof_inequality(E: ClassifiedCurve, D: int) -> Tuple[int, int]:
    """(lower bound on nu_2(m), upper bound on the rank) from the closed forms alone.

    These use the worst-case discriminant term of each family, so they are
    weaker than :func:`watkins_verdict`; the inequality holds exactly on
    :func:`sweep_claimed_territory` away from the prime-D refinements.
    """
    w = omega(D)
    v2 = nu(2, D)
    if E.odd:
        if E.special == "17.a4":
            return -2 + 4 * w, 2 * w + 1
        return -1 + 3 * w, 2 * w + 1
    if E.special == "32.a3":
        return -1 + 4 * w - 4 * v2, 2 * w - v2
    return 3 * w - 3 * v2, 2 * w + 1 - 2 * v2


def v_parity_violations(E: ClassifiedCurve, q_max: int = 1000) -> List[Tuple[int, int]]:
    """Good primes q <= q_max where nu_2(V(q)) is below the torsion-forced minimum.

    The minimum is 4 for the special curves and 3 otherwise. Returns
    ``(q, nu_2(V(q)))`` pairs.
    """
    need = 4 if E.special else 3
    out = []
    for q in primes_up_to(q_max):
        if q in (2, E.p):
            continue
        v = nu(2, V(q, a_q(E.model, q)))
        if v < need:
            out.append((q, v))
    return out
