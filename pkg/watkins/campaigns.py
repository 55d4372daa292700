"""
Batch verification campaigns.

Each mode sweeps one family of checks and returns the individual reports
together with a :class:`CampaignSummary`. Jobs run on a thread pool through
``executor.map``, so results come back in input order whatever the thread
count.
"""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple, TypeVar

from pydantic import BaseModel
from sympy import primerange

from watkins.arith import divisors, format_valuation, is_squarefree, omega, primes_up_to
from watkins.bounds import classify, sweep_claimed_territory, v_parity_violations, watkins_verdict
from watkins.congruence import (
    TwistFamily,
    corollary_check,
    parity_check,
    twisted_coeff_check,
    verify_theorem,
)
from watkins.errors import ConfigError
from watkins.families import (
    check_setzer,
    load_bundle,
    resolve,
    setzer_primes,
    setzer_record,
    verify_tables,
)
from watkins.hecke import twist_identity_violations
from watkins.reports import (
    CampaignSummary,
    CongruenceReport,
    Verdict,
    WatkinsReport,
    dump_many,
)
from watkins.settings import CampaignConfig, CampaignMode, OutputFormat, Settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

COROLLARY_PRIME_LIMIT = 100


@dataclass(frozen=True)
class CampaignResult:
    summary: CampaignSummary
    reports: Tuple[BaseModel, ...] = ()

    @property
    def passed(self) -> bool:
        return self.summary.passed


def map_ordered(fn: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    """``[fn(x) for x in items]``, on a thread pool when *threads* > 1."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(fn, items))


def twist_parameters(D_max: int) -> List[int]:
    """Squarefree D != 0, 1 with |D| <= D_max, ordered by |D| then sign."""
    out = []
    for a in range(1, D_max + 1):
        for D in (-a, a):
            if D != 1 and is_squarefree(D):
                out.append(D)
    return out


def odd_squarefree(d_min: int, d_max: int, max_omega: int) -> List[int]:
    return [
        d
        for d in range(max(3, d_min), d_max + 1)
        if d % 2 == 1 and is_squarefree(d) and omega(d) <= max_omega
    ]


# ----------------------------------------------------------------------
# Modes
# ----------------------------------------------------------------------


def _tables(config: CampaignConfig, settings: Settings) -> CampaignResult:
    report = verify_tables(load_bundle(config.data_path), setzer_limit=config.setzer_limit)
    summary = CampaignSummary(
        mode=config.mode.value,
        jobs=len(report.curves) + len(report.signatures) + len(report.setzer),
        failures=len(report.mismatches),
        details=report.mismatches + report.errata,
    )
    return CampaignResult(summary, (report,))


def _watkins_sweep(config: CampaignConfig, settings: Settings) -> CampaignResult:
    bundle = load_bundle(config.data_path)
    labels = config.labels or tuple(bundle.labels)
    curves = [classify(resolve(label, bundle)) for label in labels]
    jobs = [(E, D) for E in curves for D in twist_parameters(config.D_max)]
    logger.info("Watkins sweep: %d curves x |D| <= %d (%d jobs)", len(curves), config.D_max, len(jobs))

    def one(job) -> WatkinsReport:
        E, D = job
        return watkins_verdict(E, D, config.verdict_mode, bundle=bundle)

    reports = map_ordered(one, jobs, settings.threads)
    failures: List[str] = []
    undecided = 0
    for (E, D), report in zip(jobs, reports):
        if report.verdict == Verdict.UNDECIDED_BY_BOUNDS:
            undecided += 1
        if not report.assembly_ok() or not report.holds_consistent():
            failures.append(f"{E.label} D={D}: inconsistent report")
        elif sweep_claimed_territory(E, D) and report.verdict != Verdict.HOLDS_BY_BOUNDS:
            failures.append(
                f"{E.label} D={D}: {report.verdict.value} inside the covered range "
                f"(mdeg >= {report.mdeg_val_lower}, rank <= {report.rank_upper})"
            )
    summary = CampaignSummary(
        mode=config.mode.value,
        jobs=len(jobs),
        failures=len(failures),
        undecided=undecided,
        details=tuple(failures),
    )
    return CampaignResult(summary, tuple(reports))


def _congruence_sweep(config: CampaignConfig, settings: Settings) -> CampaignResult:
    ds = odd_squarefree(config.d_min, config.d_max, config.max_omega)
    logger.info("Congruence sweep over %d values of d, B=%d", len(ds), config.B)

    def one(d: int) -> CongruenceReport:
        return verify_theorem(
            d, config.B, max_omega=config.max_omega, ceiling=config.ap_ceiling
        )

    reports = map_ordered(one, ds, settings.threads)
    failures = [
        f"d={r.d}: min valuation {r.min_observed_val} < {r.bound}"
        if r.min_observed_val < r.bound
        else f"d={r.d}: claim_ok={r.claim_ok} conductor_family_ok={r.conductor_family_ok}"
        for r in reports
        if not r.passed
    ]
    summary = CampaignSummary(
        mode=config.mode.value, jobs=len(ds), failures=len(failures), details=tuple(failures)
    )
    return CampaignResult(summary, tuple(reports))


def _lemmas(config: CampaignConfig, settings: Settings) -> CampaignResult:
    bundle = load_bundle(config.data_path)
    records = list(bundle) + [
        setzer_record(p, index) for p in setzer_primes(config.setzer_limit) for index in (1, 2)
    ]
    primes = primes_up_to(config.q_max)
    failures: List[str] = []
    jobs = 0

    # Twisted coefficients are the Kronecker symbol times the original ones.
    twist_jobs = [(r, D) for r in records for D in twist_parameters(config.D_max)]
    results = map_ordered(
        lambda job: twist_identity_violations(job[0].model, job[1], primes),
        twist_jobs,
        settings.threads,
    )
    for (record, D), bad in zip(twist_jobs, results):
        jobs += 1
        for q, a, a_tw in bad:
            failures.append(f"{record.label} D={D}: a_{q} = {a}, twisted {a_tw}")

    # Torsion forces 2-power factors into V(q).
    for record in records:
        jobs += 1
        for q, v in v_parity_violations(classify(record), config.q_max):
            failures.append(f"{record.label}: nu_2(V({q})) = {v}")

    ds = odd_squarefree(config.d_min, config.d_max, config.max_omega)
    for d in ds:
        for q in primes:
            if q == 2 or d % q == 0:
                continue
            jobs += 1
            check = parity_check(d, q)
            if not check.ok:
                failures.append(f"d={d} q={q}: a_q = {check.a_f} (symbol {check.symbol})")
        family = TwistFamily(d, config.B, max_omega=config.max_omega, ceiling=config.ap_ceiling)
        for D in divisors(d):
            jobs += 1
            bad = twisted_coeff_check(family, D)
            if bad:
                failures.append(f"d={d} D={D}: twisted coefficients differ at n={bad[0]}")

    for p in primerange(3, COROLLARY_PRIME_LIMIT):
        jobs += 1
        check = corollary_check(int(p))
        if not check.ok:
            failures.append(f"p={p}: rank <= {check.rank_upper}, bound {check.congruence_bound}")

    summary = CampaignSummary(
        mode=config.mode.value, jobs=jobs, failures=len(failures), details=tuple(failures)
    )
    return CampaignResult(summary)


def _setzer_scan(config: CampaignConfig, settings: Settings) -> CampaignResult:
    primes = setzer_primes(config.setzer_limit)
    results = map_ordered(check_setzer, primes, settings.threads)
    failures = [
        f"{check.p}: disc={check.disc_ok} torsion={check.two_torsion_ok} "
        f"conductor={check.conductor_ok} parity={check.parity_ok} identical={identical}"
        for check, identical in results
        if not (check.ok and identical)
    ]
    summary = CampaignSummary(
        mode=config.mode.value, jobs=len(primes), failures=len(failures), details=tuple(failures)
    )
    return CampaignResult(summary, tuple(check for check, _ in results))


_MODES = {
    CampaignMode.TABLES: _tables,
    CampaignMode.WATKINS_SWEEP: _watkins_sweep,
    CampaignMode.CONGRUENCE_SWEEP: _congruence_sweep,
    CampaignMode.LEMMAS: _lemmas,
    CampaignMode.SETZER_SCAN: _setzer_scan,
}

_CSV_MODES = (CampaignMode.WATKINS_SWEEP, CampaignMode.CONGRUENCE_SWEEP)


def run_campaign(config: CampaignConfig, settings: Settings) -> CampaignResult:
    if config.output == OutputFormat.CSV and config.mode not in _CSV_MODES:
        raise ConfigError(f"CSV output is not available for {config.mode.value}")
    logger.info("Running campaign %s with %d thread(s)", config.mode.value, settings.threads)
    result = _MODES[config.mode](config, settings)
    logger.info(
        "Campaign %s: %d jobs, %d failures",
        config.mode.value, result.summary.jobs, result.summary.failures,
    )
    return result


# ----------------------------------------------------------------------
# Rendering
# ----------------------------------------------------------------------


def to_json(result: CampaignResult) -> str:
    return (
        '{"summary":' + result.summary.model_dump_json()
        + ',"reports":' + dump_many(result.reports) + "}"
    )


def to_csv(result: CampaignResult) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    reports = result.reports
    if reports and isinstance(reports[0], WatkinsReport):
        writer.writerow(
            ["curve", "D", "rank_upper", "mdeg_val_lower", "verdict", "case", "twist_conductor"]
        )
        for r in reports:
            writer.writerow(
                [r.curve, r.D, r.rank_upper, str(r.mdeg_val_lower), r.verdict.value,
                 r.case.value, r.twist_conductor]
            )
    else:
        writer.writerow(["d", "m", "epsilon", "bound", "B", "min_observed_val", "passed"])
        for r in reports:
            writer.writerow(
                [r.d, r.m, r.epsilon, r.bound, r.B, format_valuation(r.min_observed_val), r.passed]
            )
    return buffer.getvalue()
