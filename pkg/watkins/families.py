"""
Curve families and the bundled ground-truth tables.

Provides:
- `CurveRecord` / `CurveBundle` : the curves of conductor 17, 49, 32 and 128
  with their modular degree and Manin constant, loaded from ``data/curves.csv``.
- `setzer_pair` / `setzer_primes` : the prime-conductor curves with rational
  2-torsion, one isogenous pair for every prime p = u^2 + 64.
- `resolve` : label lookup across the bundle and the Setzer family.
- `verify_tables` : recompute everything recomputable and compare.

Example:
    from watkins.families import load_bundle, setzer_pair

    bundle = load_bundle()
    print(bundle.lookup("32.a3").model)     # [0,0,0,-1,0]
    E1, E2 = setzer_pair(89)                # [1,1,0,-1,0], [1,1,0,4,5]
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

from sympy import isprime

from watkins.arith import (
    INF,
    Valuation,
    format_factored,
    format_valuation,
    nu,
    parse_factored,
)
from watkins.curves import (
    WeierstrassModel,
    has_rational_two_torsion,
    invariants,
    minimal_model,
    quadratic_twist,
    signature,
)
from watkins.errors import ArithmeticDomainError, BundleError, UnknownLabelError
from watkins.hecke import expand
from watkins.local import conductor
from watkins.reports import CurveCheck, SetzerCheck, SignatureCheck, TablesReport

logger = logging.getLogger(__name__)

DATA_ENV_VAR = "WATKINS_DATA"
SETZER_SCAN_LIMIT = 10**4
SETZER_PARITY_BOUND = 200

_SETZER_LABEL_RE = re.compile(r"^(\d+)\.a([12])$")
_REQUIRED_COLUMNS = ("label", "a1", "a2", "a3", "a4", "a6", "mE", "cE", "disc")


# ----------------------------------------------------------------------
# Records
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class CurveRecord:
    """One curve with the data needed by the modular-degree bound.

    Attributes:
        label: Label of the form ``N.xk``.
        model: The minimal model.
        m_E: Modular degree (``None`` for Setzer curves, where only a bound is used).
        c_E: Manin constant (``None`` for Setzer curves).
        disc: Minimal discriminant.
        printed_disc: Discriminant as printed in the source tables, when it
            differs from ``disc``.
        source: ``"table"`` or ``"setzer"``.
    """

    label: str
    model: WeierstrassModel
    m_E: Optional[int]
    c_E: Optional[int]
    disc: int
    printed_disc: Optional[int] = None
    source: str = "table"

    @property
    def conductor_label(self) -> int:
        """The numeric prefix of the label."""
        return int(self.label.split(".", 1)[0])

    @property
    def v2_m_over_c2(self) -> int:
        """nu_2(m_E / c_E^2), or the lower bound -1 for Setzer curves."""
        if self.m_E is None or self.c_E is None:
            return -1
        return nu(2, self.m_E) - 2 * nu(2, self.c_E)

    @property
    def v2_source(self) -> str:
        return "table" if self.m_E is not None else "setzer-bound"

    def validate(self) -> None:
        """Raise :class:`ArithmeticDomainError` when the record contradicts its model."""
        computed = invariants(self.model).disc
        if computed != self.disc:
            raise ArithmeticDomainError(
                f"discriminant {format_factored(computed)} != {format_factored(self.disc)}"
            )
        N = conductor(self.model).value
        if N != self.conductor_label:
            raise ArithmeticDomainError(f"conductor {N} does not match the label")


@dataclass(frozen=True)
class CurveBundle:
    """Immutable label -> record mapping, in file order."""

    records: Tuple[CurveRecord, ...]
    origin: str = "<bundled>"

    def __iter__(self) -> Iterator[CurveRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __contains__(self, label: object) -> bool:
        return any(r.label == label for r in self.records)

    @property
    def labels(self) -> List[str]:
        return [r.label for r in self.records]

    def lookup(self, label: str) -> CurveRecord:
        for record in self.records:
            if record.label == label:
                return record
        raise UnknownLabelError(f"Unknown curve label {label!r}")

    def with_conductor(self, N: int) -> List[CurveRecord]:
        return [r for r in self.records if r.conductor_label == N]

    def find(self, model: WeierstrassModel) -> Optional[CurveRecord]:
        """Record whose curve is isomorphic to *model*, if any."""
        target, _ = minimal_model(model)
        for record in self.records:
            if record.model == target:
                return record
        return None


# ----------------------------------------------------------------------
# Loading
# ----------------------------------------------------------------------


def _parse_row(row: Dict[str, str], line: int) -> CurveRecord:
    label = (row.get("label") or "").strip()
    try:
        model = WeierstrassModel(*(int(row[k]) for k in ("a1", "a2", "a3", "a4", "a6")))
        m_E, c_E = int(row["mE"]), int(row["cE"])
        if m_E < 1 or c_E < 1:
            raise ArithmeticDomainError("mE and cE must be positive")
        printed = (row.get("printed_disc") or "").strip()
        record = CurveRecord(
            label=label,
            model=model,
            m_E=m_E,
            c_E=c_E,
            disc=parse_factored(row["disc"]),
            printed_disc=parse_factored(printed) if printed else None,
        )
        record.validate()
    except (ValueError, TypeError) as exc:
        raise BundleError(str(exc), line=line, label=label or None) from exc
    return record


def ingest(text: str, origin: str = "<memory>") -> CurveBundle:
    """Parse and validate bundle CSV text.

    Raises:
        BundleError: on a missing column, a malformed value, a duplicate label
            or a record whose discriminant or conductor disagrees with its model.
    """
    reader = csv.DictReader(io.StringIO(text))
    missing = [c for c in _REQUIRED_COLUMNS if c not in (reader.fieldnames or [])]
    if missing:
        raise BundleError(f"{origin}: missing columns {', '.join(missing)}", line=1)
    records: List[CurveRecord] = []
    seen = set()
    for line, row in enumerate(reader, start=2):
        record = _parse_row(row, line)
        if record.label in seen:
            raise BundleError("duplicate label", line=line, label=record.label)
        seen.add(record.label)
        records.append(record)
    logger.info("Loaded %d curves from %s", len(records), origin)
    return CurveBundle(tuple(records), origin)


@lru_cache(maxsize=8)
def _load_cached(location: str) -> CurveBundle:
    if location == "<bundled>":
        text = (resources.files("watkins") / "data" / "curves.csv").read_text(encoding="utf-8")
    else:
        try:
            text = Path(location).read_text(encoding="utf-8")
        except OSError as exc:
            raise BundleError(f"cannot read {location}: {exc}") from exc
    return ingest(text, location)


def load_bundle(path: Optional[os.PathLike] = None) -> CurveBundle:
    """Load the curve bundle from *path*, ``$WATKINS_DATA`` or the packaged CSV."""
    if path is None:
        path = os.environ.get(DATA_ENV_VAR) or None
    location = str(Path(path).resolve()) if path else "<bundled>"
    return _load_cached(location)


@dataclass(frozen=True)
class PrintedSignature:
    """One row of the printed 2-adic signature table."""

    label: str
    c4: int
    c6: int
    signature: Tuple[Valuation, Valuation, int]


def _valuation_cell(text: str) -> Valuation:
    text = text.strip()
    return INF if text == "inf" else int(text)


@lru_cache(maxsize=1)
def load_signatures() -> Tuple[PrintedSignature, ...]:
    text = (resources.files("watkins") / "data" / "signatures.csv").read_text(encoding="utf-8")
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        rows.append(
            PrintedSignature(
                label=row["label"],
                c4=int(row["c4"]),
                c6=int(row["c6"]),
                signature=(
                    _valuation_cell(row["v_c4"]),
                    _valuation_cell(row["v_c6"]),
                    int(row["v_disc"]),
                ),
            )
        )
    return tuple(rows)


# ----------------------------------------------------------------------
# Setzer curves
# ----------------------------------------------------------------------


def setzer_u(p: int) -> int:
    """The u = 1 (mod 4) with p = u^2 + 64."""
    if not isprime(p):
        raise ArithmeticDomainError(f"{p} is not a prime")
    if p == 17:
        raise ArithmeticDomainError(
            "p = 17 is the exceptional conductor; use the 17.a records instead"
        )
    square = p - 64
    root = math.isqrt(square) if square > 0 else 0
    if square <= 0 or root * root != square:
        raise ArithmeticDomainError(f"{p} is not of the form u^2 + 64")
    return root if root % 4 == 1 else -root


def setzer_pair(p: int) -> Tuple[WeierstrassModel, WeierstrassModel]:
    """The 2-isogenous pair of conductor *p*, discriminants p and -p^2."""
    u = setzer_u(p)
    a2 = (u - 1) // 4
    return WeierstrassModel(1, a2, 0, -1, 0), WeierstrassModel(1, a2, 0, 4, u)


def setzer_primes(limit: int = SETZER_SCAN_LIMIT) -> List[int]:
    """Primes p = u^2 + 64 below *limit*, ascending."""
    out = []
    u = 1
    while u * u + 64 < limit:
        p = u * u + 64
        if isprime(p):
            out.append(p)
        u += 2
    return out


def setzer_record(p: int, index: int) -> CurveRecord:
    if index not in (1, 2):
        raise ArithmeticDomainError(f"Setzer index must be 1 or 2, got {index}")
    model = setzer_pair(p)[index - 1]
    return CurveRecord(
        label=f"{p}.a{index}",
        model=model,
        m_E=None,
        c_E=None,
        disc=p if index == 1 else -(p * p),
        source="setzer",
    )


def resolve(label: str, bundle: Optional[CurveBundle] = None) -> CurveRecord:
    """Bundle record for *label*, or the Setzer curve ``p.a1`` / ``p.a2``."""
    bundle = bundle if bundle is not None else load_bundle()
    if label in bundle:
        return bundle.lookup(label)
    m = _SETZER_LABEL_RE.match(label.strip())
    if m is not None:
        p, index = int(m.group(1)), int(m.group(2))
        try:
            return setzer_record(p, index)
        except ArithmeticDomainError as exc:
            raise UnknownLabelError(f"Unknown curve label {label!r}: {exc}") from exc
    raise UnknownLabelError(f"Unknown curve label {label!r}")


def twist_by_two_family(bundle: Optional[CurveBundle] = None) -> List[Tuple[str, str, int]]:
    """Twists by 2 of the 2-power conductor curves.

    Returns ``(label, twist, conductor)`` where *twist* is a bundle label when
    the twist is itself bundled, otherwise its minimal model.
    """
    bundle = bundle if bundle is not None else load_bundle()
    out = []
    for record in bundle:
        if record.conductor_label not in (32, 128):
            continue
        twisted = quadratic_twist(record.model, 2)
        known = bundle.find(twisted)
        name = known.label if known is not None else str(twisted)
        out.append((record.label, name, conductor(twisted).value))
    return out


# ----------------------------------------------------------------------
# Table verification
# ----------------------------------------------------------------------


def _check_record(record: CurveRecord) -> Tuple[CurveCheck, List[str], List[str]]:
    mismatches: List[str] = []
    errata: List[str] = []
    disc = invariants(record.model).disc
    N = conductor(record.model).value
    two_torsion = has_rational_two_torsion(record.model)
    sig = None
    if record.conductor_label & (record.conductor_label - 1) == 0:
        sig = signature(record.model, 2).as_tuple()
    if disc != record.disc:
        mismatches.append(
            f"{record.label}: discriminant {format_factored(disc)}, "
            f"bundle says {format_factored(record.disc)}"
        )
    if N != record.conductor_label:
        mismatches.append(f"{record.label}: conductor {N}")
    if not two_torsion:
        mismatches.append(f"{record.label}: no rational 2-torsion")
    if record.printed_disc is not None and record.printed_disc != disc:
        errata.append(
            f"{record.label}: printed discriminant {format_factored(record.printed_disc)}, "
            f"the model gives {format_factored(disc)}"
        )
    check = CurveCheck(
        label=record.label,
        model=str(record.model),
        disc=format_factored(disc),
        disc_ok=disc == record.disc,
        conductor=N,
        conductor_ok=N == record.conductor_label,
        two_torsion=two_torsion,
        signature=sig,
    )
    return check, mismatches, errata


def _check_signature(row: PrintedSignature, bundle: CurveBundle) -> SignatureCheck:
    record = bundle.lookup(row.label)
    minimal, _ = minimal_model(record.model)
    inv = invariants(minimal)
    return SignatureCheck(
        label=row.label,
        c4=inv.c4,
        c6=inv.c6,
        signature=signature(minimal, 2).as_tuple(),
        printed_c4=row.c4,
        printed_c6=row.c6,
        printed_signature=row.signature,
    )


def check_setzer(p: int, parity_bound: int = SETZER_PARITY_BOUND) -> Tuple[SetzerCheck, bool]:
    """Validate one Setzer pair; the flag says whether the two tables agree exactly."""
    E1, E2 = setzer_pair(p)
    disc_ok = invariants(E1).disc == p and invariants(E2).disc == -(p * p)
    torsion_ok = has_rational_two_torsion(E1) and has_rational_two_torsion(E2)
    conductor_ok = conductor(E1).value == p and conductor(E2).value == p
    t1, t2 = expand(E1, parity_bound), expand(E2, parity_bound)
    check = SetzerCheck(
        p=p,
        u=setzer_u(p),
        disc_ok=disc_ok,
        two_torsion_ok=torsion_ok,
        conductor_ok=conductor_ok,
        parity_ok=t1.mod(2) == t2.mod(2),
    )
    return check, t1.coefficients == t2.coefficients


def verify_tables(
    bundle: Optional[CurveBundle] = None,
    *,
    setzer_limit: int = SETZER_SCAN_LIMIT,
    parity_bound: int = SETZER_PARITY_BOUND,
) -> TablesReport:
    """Recompute the bundled tables and the Setzer family.

    ``mismatches`` lists disagreements between recomputation and the bundle;
    ``errata`` lists printed values that the recomputation corrects. m_E and
    c_E cannot be recomputed and are listed as unchecked.
    """
    bundle = bundle if bundle is not None else load_bundle()
    mismatches: List[str] = []
    errata: List[str] = []

    curves = []
    for record in bundle:
        check, bad, notes = _check_record(record)
        curves.append(check)
        mismatches.extend(bad)
        errata.extend(notes)

    signatures = []
    for row in load_signatures():
        if row.label not in bundle:
            mismatches.append(f"{row.label}: signature row without a bundled curve")
            continue
        sig = _check_signature(row, bundle)
        signatures.append(sig)
        if not sig.matches_print:
            errata.append(
                f"{row.label}: printed (c4, c6) = ({row.c4}, {row.c6}) with signature "
                f"{_fmt_sig(row.signature)}, computed ({sig.c4}, {sig.c6}) with "
                f"{_fmt_sig(sig.signature)}"
            )

    setzer = []
    for p in setzer_primes(setzer_limit):
        check, identical = check_setzer(p, parity_bound)
        setzer.append(check)
        if not check.ok:
            mismatches.append(f"{p}.a: Setzer pair failed validation")
        elif not identical:
            mismatches.append(f"{p}.a: isogenous coefficient tables differ")
    logger.info(
        "Checked %d curves, %d signatures, %d Setzer pairs: %d mismatches, %d errata",
        len(curves), len(signatures), len(setzer), len(mismatches), len(errata),
    )
    return TablesReport(
        curves=tuple(curves),
        signatures=tuple(signatures),
        setzer=tuple(setzer),
        twists_by_two=tuple(twist_by_two_family(bundle)),
        mismatches=tuple(mismatches),
        errata=tuple(errata),
    )


def _fmt_sig(sig: Tuple[Valuation, Valuation, int]) -> str:
    return "(" + ", ".join(format_valuation(v) for v in sig) + ")"
