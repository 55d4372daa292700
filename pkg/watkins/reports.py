"""
Report records and their persistence.

Every verification routine returns one of the pydantic models below. JSON is
produced with ``model_dump_json`` and read back with ``model_validate_json``;
exact rationals travel as ``"p/q"`` strings and infinite valuations as
``"inf"``, so a parse of a serialized report compares equal to the original.

Result files are written atomically (temp file + ``os.replace``) so an
interrupted campaign never leaves a truncated report behind.
"""

from __future__ import annotations

import csv
import io
import logging
import os
import tempfile
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Iterable, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator

from watkins.arith import INF

__all__ = [
    "ExactRational",
    "ExtendedNat",
    "Verdict",
    "CaseTag",
    "WatkinsTerms",
    "WatkinsReport",
    "Witness",
    "CongruenceReport",
    "ClaimCheck",
    "ParityCheck",
    "CorollaryCheck",
    "CurveCheck",
    "SignatureCheck",
    "SetzerCheck",
    "TablesReport",
    "CampaignSummary",
    "write_atomic",
    "coefficients_csv",
    "dump_many",
]

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Field types
# ----------------------------------------------------------------------


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise ValueError(f"cannot read {value!r} as an exact rational")


def _fraction_str(value: Fraction) -> Union[int, str]:
    return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _to_extended(value: Any) -> Union[int, float]:
    if value == "inf" or value == INF:
        return INF
    if isinstance(value, bool):
        raise ValueError("booleans are not valuations")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and value.lstrip("-").isdigit():
        return int(value)
    raise ValueError(f"cannot read {value!r} as a valuation")


def _extended_out(value: Union[int, float]) -> Union[int, str]:
    return "inf" if value == INF else int(value)


ExactRational = Annotated[
    Fraction,
    PlainValidator(_to_fraction),
    PlainSerializer(_fraction_str, when_used="always"),
]

ExtendedNat = Annotated[
    Union[int, float],
    PlainValidator(_to_extended),
    PlainSerializer(_extended_out, when_used="always"),
]


class _Report(BaseModel):
    model_config = ConfigDict(frozen=True)


# ----------------------------------------------------------------------
# Watkins bound reports
# ----------------------------------------------------------------------


class Verdict(str, Enum):
    HOLDS_BY_BOUNDS = "HOLDS_BY_BOUNDS"
    KNOWN_SMALL_CONDUCTOR = "KNOWN_SMALL_CONDUCTOR"
    KNOWN_PRIME_POWER = "KNOWN_PRIME_POWER"
    UNDECIDED_BY_BOUNDS = "UNDECIDED_BY_BOUNDS"


class CaseTag(str, Enum):
    I = "I"  # noqa: E741
    II = "II"
    III = "III"
    IV = "IV"
    REMARK = "remark"
    REFINED = "refined"


UNDECIDED_NOTE = (
    "UNDECIDED_BY_BOUNDS only means these bounds do not settle the inequality; "
    "it is not evidence against the conjecture."
)
SMALL_CONDUCTOR_NOTE = (
    "Conductor below 10000: relies on the published verification for small "
    "conductors, which is not recomputed here."
)


class WatkinsTerms(_Report):
    v2_m_over_c2: int
    petersson: int
    disc: ExactRational


class WatkinsReport(_Report):
    """Modular-degree valuation lower bound against a rank upper bound."""

    curve: str
    D: int
    rank_upper: int
    terms: WatkinsTerms
    mdeg_val_lower: ExactRational
    verdict: Verdict
    case: CaseTag
    v2_source: str = "table"
    twist_conductor: int
    rank_lemma: int
    lemma_underestimates: bool = False
    reduced_via: Optional[str] = None
    notes: Tuple[str, ...] = ()

    def assembly_ok(self) -> bool:
        t = self.terms
        return self.mdeg_val_lower == t.v2_m_over_c2 + t.petersson + t.disc

    def holds_consistent(self) -> bool:
        if self.verdict == Verdict.HOLDS_BY_BOUNDS:
            return self.rank_upper <= self.mdeg_val_lower
        return True


# ----------------------------------------------------------------------
# Congruence-number reports
# ----------------------------------------------------------------------


class Witness(_Report):
    n: int
    value: int
    val2: int


class ClaimCheck(_Report):
    d: int
    n: int
    value: int
    expected: int
    gamma_all_minus_one: bool
    ok: bool


class CongruenceReport(_Report):
    """Lower bound 2*floor((omega(d)+1)/2)+1 <= v_2(delta_E), checked to a coefficient bound."""

    d: int
    m: int
    epsilon: int
    bound: int
    B: int
    min_observed_val: ExtendedNat
    tight_witnesses: Tuple[Witness, ...] = Field(default=())
    claim_violations: Tuple[ClaimCheck, ...] = Field(default=())
    claim_ok: bool
    conductor_family_ok: bool
    conductor: int
    conclusion: str

    @property
    def passed(self) -> bool:
        return self.min_observed_val >= self.bound and self.claim_ok and self.conductor_family_ok


class ParityCheck(_Report):
    d: int
    q: int
    k: int
    symbol: int
    a_f: int
    modulus: int
    congruence_ok: bool
    a_g: Optional[int] = None
    sum_of_squares_ok: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return self.congruence_ok and self.sum_of_squares_ok is not False


class CorollaryCheck(_Report):
    """Rank bound against the congruence-number bound for y^2 = x^3 - p x and y^2 = x^3 - p^3 x."""

    p: int
    rank_upper: int
    congruence_bound: int
    theorem_checked: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return self.rank_upper < self.congruence_bound and self.theorem_checked is not False


# ----------------------------------------------------------------------
# Table reproduction
# ----------------------------------------------------------------------


class CurveCheck(_Report):
    label: str
    model: str
    disc: str
    disc_ok: bool
    conductor: int
    conductor_ok: bool
    two_torsion: bool
    signature: Optional[Tuple[ExtendedNat, ExtendedNat, int]] = None


class SignatureCheck(_Report):
    label: str
    c4: int
    c6: int
    signature: Tuple[ExtendedNat, ExtendedNat, int]
    printed_c4: int
    printed_c6: int
    printed_signature: Tuple[ExtendedNat, ExtendedNat, int]

    @property
    def matches_print(self) -> bool:
        return (
            self.c4 == self.printed_c4
            and self.c6 == self.printed_c6
            and tuple(self.signature) == tuple(self.printed_signature)
        )


class SetzerCheck(_Report):
    p: int
    u: int
    disc_ok: bool
    two_torsion_ok: bool
    conductor_ok: bool
    parity_ok: bool

    @property
    def ok(self) -> bool:
        return self.disc_ok and self.two_torsion_ok and self.conductor_ok and self.parity_ok


class TablesReport(_Report):
    curves: Tuple[CurveCheck, ...]
    signatures: Tuple[SignatureCheck, ...]
    setzer: Tuple[SetzerCheck, ...]
    twists_by_two: Tuple[Tuple[str, str, int], ...] = ()
    mismatches: Tuple[str, ...] = ()
    errata: Tuple[str, ...] = ()
    unchecked: Tuple[str, ...] = ("m_E", "c_E")

    @property
    def passed(self) -> bool:
        return not self.mismatches


class CampaignSummary(_Report):
    mode: str
    jobs: int
    failures: int
    undecided: int = 0
    details: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.failures == 0


# ----------------------------------------------------------------------
# Persistence
# ----------------------------------------------------------------------


def write_atomic(path: Path, text: str) -> None:
    """Write *text* to *path* atomically."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path: Optional[str] = None
    try:
        fd, tmp_path = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, path)
        logger.info("Wrote %s", path)
    except OSError:
        if tmp_path is not None:
            try:
                os.unlink(tmp_path)
            except OSError:
                pass
        raise


def coefficients_csv(rows: Iterable[Sequence[int]]) -> str:
    """CSV text with header ``n,a_n``."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["n", "a_n"])
    writer.writerows(rows)
    return buffer.getvalue()


def dump_many(reports: Iterable[BaseModel]) -> str:
    """JSON array of several reports, in the given order."""
    return "[" + ",".join(r.model_dump_json() for r in reports) + "]"
