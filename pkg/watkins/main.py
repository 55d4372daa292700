"""
Command-line entry point.

``run(argv)`` parses the arguments, executes one subcommand and returns the
exit code: 0 when every check passed, 1 when a verification failed, 2 on a
usage or input error. ``main()`` wraps it for the console script.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from watkins.arith import format_factored, format_valuation, primes_up_to
from watkins.bounds import (
    ClassifiedCurve,
    Mode,
    classify,
    petersson_val_lower,
    rank_upper_AB,
    rank_upper_dx,
    rank_upper_lemma,
    rank_upper_twist,
    watkins_verdict,
)
from watkins.campaigns import CampaignResult, run_campaign, to_csv, to_json
from watkins.congruence import (
    TwistFamily,
    corollary_check,
    family_conductors,
    parity_check,
    twisted_coeff_check,
    verify_theorem,
)
from watkins.console import make_console, setup_logging, status, table, verdict_markup
from watkins.curves import WeierstrassModel, invariants, j_invariant, minimal_model, quadratic_twist, signature
from watkins.errors import ArithmeticDomainError, OutsideClassificationError, WatkinsError
from watkins.families import check_setzer, load_bundle, resolve, setzer_pair, setzer_primes, verify_tables
from watkins.hecke import a_q, expand
from watkins.local import conductor, tate
from watkins.reports import (
    CongruenceReport,
    TablesReport,
    WatkinsReport,
    coefficients_csv,
    write_atomic,
)
from watkins.settings import CampaignConfig, CampaignMode, OutputFormat, Settings, load_settings

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Output plumbing
# ----------------------------------------------------------------------


@dataclass
class Context:
    """Parsed arguments, resolved settings and the output sink of one invocation."""

    args: argparse.Namespace
    settings: Settings
    console: Console
    buffer: Optional[io.StringIO] = None

    @classmethod
    def create(cls, args: argparse.Namespace, settings: Settings) -> "Context":
        buffer = io.StringIO() if args.out else None
        console = make_console(color=settings.color and buffer is None, file=buffer)
        return cls(args, settings, console, buffer)

    @property
    def as_json(self) -> bool:
        return bool(self.args.json)

    def raw(self, text: str) -> None:
        """Plain text (JSON, CSV) that must not pass through rich."""
        if not text.endswith("\n"):
            text += "\n"
        if self.buffer is not None:
            self.buffer.write(text)
        else:
            sys.stdout.write(text)

    def dump(self, data: Any) -> None:
        self.raw(json.dumps(data))

    def pairs(self, rows: Sequence[Tuple[str, object]]) -> None:
        grid = Table.grid(padding=(0, 2))
        grid.add_column(style="muted")
        grid.add_column()
        for key, value in rows:
            grid.add_row(key, value if isinstance(value, str) else str(value))
        self.console.print(grid)

    def close(self) -> None:
        if self.buffer is not None:
            write_atomic(Path(self.args.out), self.buffer.getvalue())

    def bundle(self):
        return load_bundle(self.settings.data_path)


def _curve(ctx: Context) -> Tuple[str, WeierstrassModel]:
    if ctx.args.label:
        record = resolve(ctx.args.label, ctx.bundle())
        return record.label, record.model
    model = WeierstrassModel.parse(ctx.args.curve)
    return str(model), model


def _classified(ctx: Context) -> ClassifiedCurve:
    if ctx.args.label:
        return classify(resolve(ctx.args.label, ctx.bundle()))
    model = WeierstrassModel.parse(ctx.args.curve)
    record = ctx.bundle().find(model)
    if record is None:
        raise OutsideClassificationError(f"{model} is not one of the classified curves")
    return classify(record)


# ----------------------------------------------------------------------
# Curve commands
# ----------------------------------------------------------------------


def cmd_invariants(ctx: Context) -> bool:
    name, model = _curve(ctx)
    inv = invariants(model)
    minimal, _ = minimal_model(model)
    data: Dict[str, Any] = {
        "curve": name,
        "model": str(model),
        "b2": inv.b2, "b4": inv.b4, "b6": inv.b6, "b8": inv.b8,
        "c4": inv.c4, "c6": inv.c6,
        "disc": format_factored(inv.disc),
        "j": str(j_invariant(model)),
        "minimal_model": str(minimal),
        "minimal_disc": format_factored(invariants(minimal).disc),
    }
    if ctx.as_json:
        ctx.dump(data)
    else:
        ctx.pairs([(k, escape(str(v))) for k, v in data.items()])
    return True


def cmd_signature(ctx: Context) -> bool:
    _, model = _curve(ctx)
    sig = signature(model, ctx.args.prime)
    if ctx.as_json:
        ctx.dump({"p": sig.p, "signature": [format_valuation(v) for v in sig.as_tuple()],
                  "minimized": sig.minimized})
    else:
        ctx.console.print(str(sig), markup=False)
    return True


def cmd_twist(ctx: Context) -> bool:
    name, model = _curve(ctx)
    twisted = quadratic_twist(model, ctx.args.D)
    N = conductor(twisted).value
    known = ctx.bundle().find(twisted)
    data = {
        "curve": name,
        "D": ctx.args.D,
        "twist": str(twisted),
        "disc": format_factored(invariants(twisted).disc),
        "conductor": N,
        "label": known.label if known else None,
    }
    if ctx.as_json:
        ctx.dump(data)
    else:
        ctx.pairs([(k, escape(str(v))) for k, v in data.items() if v is not None])
    return True


def cmd_local(ctx: Context) -> bool:
    _, model = _curve(ctx)
    minimal, _ = minimal_model(model)
    data = tate(minimal, ctx.args.prime)
    row = {
        "p": data.p,
        "kind": data.kind.value,
        "kodaira": data.kodaira,
        "f_p": data.f_p,
        "v_disc_min": data.v_disc_min,
    }
    if ctx.as_json:
        ctx.dump(row)
    else:
        ctx.pairs(list(row.items()))
    return True


def cmd_conductor(ctx: Context) -> bool:
    _, model = _curve(ctx)
    N = conductor(model)
    if ctx.as_json:
        ctx.dump({
            "conductor": N.value,
            "factored": format_factored(N.value),
            "locals": [
                {"p": d.p, "kind": d.kind.value, "kodaira": d.kodaira, "f_p": d.f_p}
                for d in N.locals
            ],
        })
        return True
    ctx.console.print(f"conductor {N.value} = {format_factored(N.value)}", markup=False)
    ctx.console.print(table(
        "Local data",
        ["p", "kind", "Kodaira", "f_p", "v(disc)"],
        [(d.p, d.kind.value, d.kodaira, d.f_p, d.v_disc_min) for d in N.locals],
    ))
    return True


def cmd_ap(ctx: Context) -> bool:
    _, model = _curve(ctx)
    value = a_q(model, ctx.args.q, ctx.settings.ap_ceiling)
    if ctx.as_json:
        ctx.dump({"q": ctx.args.q, "a_q": value})
    else:
        ctx.console.print(str(value))
    return True


def cmd_coeffs(ctx: Context) -> bool:
    _, model = _curve(ctx)
    coefficients = expand(
        model, ctx.args.B, ceiling=ctx.settings.ap_ceiling, threads=ctx.settings.threads
    )
    problems = coefficients.check()
    if ctx.args.csv:
        ctx.raw(coefficients_csv(coefficients.as_rows()))
    elif ctx.as_json:
        ctx.dump({"curve": str(coefficients.curve), "B": coefficients.bound,
                  "a": list(coefficients.coefficients[1:]), "problems": problems})
    else:
        ctx.console.print(" ".join(str(a) for a in coefficients.coefficients[1:]))
        for problem in problems:
            ctx.console.print(f"[verdict.fail]{escape(problem)}[/]")
    return not problems


# ----------------------------------------------------------------------
# Bounds
# ----------------------------------------------------------------------


def _render_watkins(ctx: Context, report: WatkinsReport) -> None:
    t = report.terms
    rows: List[Tuple[str, object]] = [
        ("curve", report.curve),
        ("D", report.D),
        ("twist conductor", report.twist_conductor),
        ("rank <=", f"{report.rank_upper} (closed form {report.rank_lemma})"),
        ("v2(m/c^2)", f"{t.v2_m_over_c2} ({report.v2_source})"),
        ("petersson", f"{t.petersson} (case {report.case.value})"),
        ("disc", str(t.disc)),
        ("mdeg >=", str(report.mdeg_val_lower)),
        ("verdict", verdict_markup(report.verdict)),
    ]
    if report.reduced_via:
        rows.insert(2, ("via", report.reduced_via))
    ctx.pairs(rows)
    for note in report.notes:
        ctx.console.print(f"[muted]{escape(note)}[/]")


def cmd_bound_watkins(ctx: Context) -> bool:
    report = watkins_verdict(_classified(ctx), ctx.args.D, ctx.args.mode, bundle=ctx.bundle())
    if ctx.as_json:
        ctx.raw(report.model_dump_json())
    else:
        _render_watkins(ctx, report)
    return report.assembly_ok() and report.holds_consistent()


def cmd_bound_rank(ctx: Context) -> bool:
    if ctx.args.dx is not None:
        data: Dict[str, Any] = {"d": ctx.args.dx, "rank_upper": rank_upper_dx(ctx.args.dx)}
    else:
        E = _classified(ctx)
        D = ctx.args.D
        data = {
            "curve": E.label,
            "D": D,
            "closed_form": rank_upper_lemma(E, D),
            "conductor_bound": rank_upper_twist(E, D),
        }
        if E.special == "32.a3":
            data["ab_bound"] = rank_upper_AB(0, -D * D)
    if ctx.as_json:
        ctx.dump(data)
    else:
        ctx.pairs(list(data.items()))
    return True


def cmd_bound_petersson(ctx: Context) -> bool:
    E = _classified(ctx)
    value = petersson_val_lower(E, ctx.args.D, ctx.args.mode)
    if ctx.as_json:
        ctx.dump({"curve": E.label, "D": ctx.args.D, "mode": ctx.args.mode, "petersson": value})
    else:
        ctx.console.print(str(value))
    return True


# ----------------------------------------------------------------------
# Verification
# ----------------------------------------------------------------------


def _render_tables(ctx: Context, report: TablesReport) -> None:
    ctx.console.print(table(
        "Curves",
        ["label", "model", "disc", "conductor", "2-torsion", "signature"],
        [
            (c.label, escape(c.model), c.disc, f"{c.conductor} {status(c.conductor_ok)}",
             status(c.two_torsion, "yes", "no"),
             "" if c.signature is None
             else "(" + ", ".join(format_valuation(v) for v in c.signature) + ")")
            for c in report.curves
        ],
    ))
    ctx.console.print(table(
        "2-adic signatures",
        ["label", "c4", "c6", "signature", "printed"],
        [
            (s.label, s.c4, s.c6,
             "(" + ", ".join(format_valuation(v) for v in s.signature) + ")",
             status(s.matches_print, "matches", "differs"))
            for s in report.signatures
        ],
    ))
    ok_pairs = sum(1 for s in report.setzer if s.ok)
    ctx.console.print(f"Setzer pairs: {ok_pairs}/{len(report.setzer)} validated")
    for label, twist, N in report.twists_by_two:
        ctx.console.print(f"[muted]{label} twisted by 2: {escape(twist)} (conductor {N})[/]")
    for note in report.errata:
        ctx.console.print(f"[verdict.known]erratum[/] {escape(note)}")
    for problem in report.mismatches:
        ctx.console.print(f"[verdict.fail]mismatch[/] {escape(problem)}")
    ctx.console.print(f"[muted]unchecked: {', '.join(report.unchecked)}[/]")


def cmd_verify_tables(ctx: Context) -> bool:
    report = verify_tables(ctx.bundle())
    if ctx.as_json:
        ctx.raw(report.model_dump_json())
    else:
        _render_tables(ctx, report)
    return report.passed


def _render_congruence(ctx: Context, report: CongruenceReport) -> None:
    ctx.pairs([
        ("d", report.d),
        ("m, epsilon", f"{report.m}, {report.epsilon}"),
        ("bound", report.bound),
        ("B", report.B),
        ("min nu_2", format_valuation(report.min_observed_val)),
        ("claim", status(report.claim_ok)),
        ("conductors", f"{report.conductor} {status(report.conductor_family_ok, 'equal', 'differ')}"),
        ("result", status(report.passed, "pass", "FAIL")),
    ])
    if report.tight_witnesses:
        ctx.console.print(table(
            "Tight witnesses", ["n", "a_n(S)", "nu_2"],
            [(w.n, w.value, w.val2) for w in report.tight_witnesses],
        ))
    for claim in report.claim_violations:
        ctx.console.print(
            f"[verdict.fail]claim[/] n={claim.n}: {claim.value} != {claim.expected}"
        )
    ctx.console.print(escape(report.conclusion))


def cmd_verify_congruence(ctx: Context) -> bool:
    report = verify_theorem(
        ctx.args.d, ctx.args.B, ceiling=ctx.settings.ap_ceiling, threads=ctx.settings.threads
    )
    if ctx.as_json:
        ctx.raw(report.model_dump_json())
    else:
        _render_congruence(ctx, report)
    return report.passed


def cmd_verify_lemmas(ctx: Context) -> bool:
    d = ctx.args.d
    checks = [parity_check(d, q) for q in primes_up_to(ctx.args.q_max) if q != 2 and d % q]
    family = TwistFamily(d, ctx.args.B, ceiling=ctx.settings.ap_ceiling, threads=ctx.settings.threads)
    twisted = {D: twisted_coeff_check(family, D) for D in family.tables}
    ok = all(c.ok for c in checks) and not any(twisted.values())
    if ctx.as_json:
        ctx.raw(
            '{"parity":[' + ",".join(c.model_dump_json() for c in checks) + '],'
            + '"twisted":' + json.dumps({str(D): bad for D, bad in twisted.items()})
            + ',"ok":' + json.dumps(ok) + "}"
        )
        return ok
    failed = [c for c in checks if not c.ok]
    squares = [c for c in checks if c.sum_of_squares_ok is not None]
    ctx.pairs([
        ("d", d),
        ("primes checked", len(checks)),
        ("congruences", status(not failed)),
        ("sums of squares", f"{len(squares)} {status(all(c.sum_of_squares_ok for c in squares))}"),
        ("twisted tables", status(not any(twisted.values()))),
    ])
    for c in failed:
        ctx.console.print(f"[verdict.fail]q={c.q}[/]: a = {c.a_f}, (d/q) = {c.symbol}")
    return ok


def cmd_verify_conductor_family(ctx: Context) -> bool:
    conductors = family_conductors(ctx.args.d)
    ok = len(set(conductors.values())) == 1
    if ctx.as_json:
        ctx.dump({"d": ctx.args.d, "conductors": {str(D): N for D, N in conductors.items()},
                  "ok": ok})
    else:
        ctx.console.print(table("Conductors", ["D", "N"], conductors.items()))
        ctx.console.print(status(ok, "all equal", "differ"))
    return ok


def cmd_verify_corollary(ctx: Context) -> bool:
    check = corollary_check(
        ctx.args.prime, ctx.args.B, ceiling=ctx.settings.ap_ceiling, threads=ctx.settings.threads
    )
    if ctx.as_json:
        ctx.raw(check.model_dump_json())
    else:
        ctx.console.print(
            f"p={check.p}: rank <= {check.rank_upper} < {check.congruence_bound} "
            f"<= nu_2(delta) {status(check.ok)}"
        )
    return check.ok


def cmd_verify_watkins_sweep(ctx: Context) -> bool:
    config = CampaignConfig(
        mode=CampaignMode.WATKINS_SWEEP,
        D_max=ctx.args.D_max,
        labels=tuple(ctx.args.labels or ()),
        verdict_mode=ctx.args.mode,
        output=OutputFormat.JSON if ctx.as_json else OutputFormat.TEXT,
        data_path=ctx.settings.data_path,
        ap_ceiling=ctx.settings.ap_ceiling,
    )
    return _emit_campaign(ctx, config, run_campaign(config, ctx.settings))


# ----------------------------------------------------------------------
# Setzer and campaigns
# ----------------------------------------------------------------------


def cmd_setzer(ctx: Context) -> bool:
    if ctx.args.prime is not None:
        E1, E2 = setzer_pair(ctx.args.prime)
        p = ctx.args.prime
        data = {
            f"{p}.a1": str(E1), "disc1": format_factored(invariants(E1).disc),
            f"{p}.a2": str(E2), "disc2": format_factored(invariants(E2).disc),
        }
        if ctx.as_json:
            ctx.dump(data)
        else:
            ctx.pairs([(k, escape(v)) for k, v in data.items()])
        return True
    results = [check_setzer(p) for p in setzer_primes(ctx.args.limit)]
    ok = all(c.ok and same for c, same in results)
    if ctx.as_json:
        ctx.raw("[" + ",".join(c.model_dump_json() for c, _ in results) + "]")
    else:
        ctx.console.print(table(
            "Setzer pairs", ["p", "u", "disc", "2-torsion", "conductor", "parity"],
            [(c.p, c.u, status(c.disc_ok), status(c.two_torsion_ok),
              status(c.conductor_ok), status(c.parity_ok)) for c, _ in results],
        ))
    return ok


def _emit_campaign(ctx: Context, config: CampaignConfig, result: CampaignResult) -> bool:
    if config.output == OutputFormat.JSON:
        ctx.raw(to_json(result))
    elif config.output == OutputFormat.CSV:
        ctx.raw(to_csv(result))
    else:
        s = result.summary
        ctx.pairs([
            ("mode", s.mode),
            ("jobs", s.jobs),
            ("failures", status(s.failures == 0, "0", str(s.failures))),
            ("undecided", s.undecided),
        ])
        for line in s.details:
            ctx.console.print(f"[muted]{escape(line)}[/]")
    return result.passed


def cmd_campaign(ctx: Context) -> bool:
    config = CampaignConfig.from_yaml(Path(ctx.args.file))
    if ctx.args.data is not None or config.data_path is None:
        config = replace(config, data_path=ctx.settings.data_path)
    if ctx.as_json:
        config = replace(config, output=OutputFormat.JSON)
    if ctx.args.save and not ctx.args.out:
        suffix = {"text": "txt"}.get(config.output.value, config.output.value)
        ctx.args.out = str(ctx.settings.results_dir / f"{config.mode.value}.{suffix}")
        ctx.buffer = io.StringIO()
        ctx.console = make_console(color=False, file=ctx.buffer)
    elif config.out is not None and not ctx.args.out:
        ctx.args.out = str(config.out)
        ctx.buffer = io.StringIO()
        ctx.console = make_console(color=False, file=ctx.buffer)
    return _emit_campaign(ctx, config, run_campaign(config, ctx.settings))


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print machine-readable JSON.")
    common.add_argument("--out", default=None, help="Write the output to this file atomically.")
    common.add_argument("--data", default=None, help="Curve bundle CSV (overrides WATKINS_DATA).")
    common.add_argument("--threads", type=int, default=None, help="Worker threads.")
    common.add_argument("--config", type=Path, default=None, help="YAML settings file.")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug.")
    common.add_argument("--no-color", action="store_true", help="Disable styled output.")
    return common


def _curve_args(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--curve", help="a1,a2,a3,a4,a6")
    group.add_argument("--label", help="Bundle label such as 32.a3, or p.a1 / p.a2 for Setzer curves.")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="watkins",
        description="Modular-degree and congruence-number bounds for quadratic twists.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help: str, owner=sub) -> argparse.ArgumentParser:
        p = owner.add_parser(name, parents=[common], help=help)
        p.set_defaults(handler=handler)
        return p

    _curve_args(add("invariants", cmd_invariants, "b- and c-invariants, discriminant, minimal model"))
    p = add("signature", cmd_signature, "p-adic signature of the minimal model")
    _curve_args(p)
    p.add_argument("-p", "--prime", type=int, default=2)
    p = add("twist", cmd_twist, "minimal model of a quadratic twist")
    _curve_args(p)
    p.add_argument("-D", type=int, required=True)
    p = add("local", cmd_local, "Tate's algorithm at one prime")
    _curve_args(p)
    p.add_argument("-p", "--prime", type=int, required=True)
    _curve_args(add("conductor", cmd_conductor, "global conductor"))
    p = add("ap", cmd_ap, "trace of Frobenius a_q")
    _curve_args(p)
    p.add_argument("-q", type=int, required=True)
    p = add("coeffs", cmd_coeffs, "newform coefficients a_1..a_B")
    _curve_args(p)
    p.add_argument("-B", type=int, required=True)
    p.add_argument("--csv", action="store_true", help="CSV with header n,a_n.")

    bound = sub.add_parser("bound", help="valuation and rank bounds").add_subparsers(
        dest="bound", required=True
    )
    modes = [m.value for m in Mode]
    p = add("watkins", cmd_bound_watkins, "modular-degree bound against the rank bound", bound)
    _curve_args(p)
    p.add_argument("-D", type=int, required=True)
    p.add_argument("--mode", choices=modes, default=Mode.AUTO.value)
    p = add("rank", cmd_bound_rank, "rank upper bounds", bound)
    _curve_args(p, required=False)
    p.add_argument("-D", type=int, default=1)
    p.add_argument("--dx", type=int, default=None, help="Bound for y^2 = x^3 - d x instead.")
    p = add("petersson", cmd_bound_petersson, "Petersson-norm ratio valuation", bound)
    _curve_args(p)
    p.add_argument("-D", type=int, required=True)
    p.add_argument("--mode", choices=[Mode.CASED.value, Mode.REFINED.value],
                   default=Mode.CASED.value)

    verify = sub.add_parser("verify", help="verification routines").add_subparsers(
        dest="verify", required=True
    )
    add("tables", cmd_verify_tables, "recompute the bundled tables", verify)
    p = add("congruence", cmd_verify_congruence, "congruence-number bound for one d", verify)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-B", type=int, default=2000)
    p = add("lemmas", cmd_verify_lemmas, "twisted coefficients and their parity", verify)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-B", type=int, default=500)
    p.add_argument("--q-max", type=int, default=500)
    p = add("conductor-family", cmd_verify_conductor_family, "equal conductors across D | d", verify)
    p.add_argument("-d", type=int, required=True)
    p = add("watkins-sweep", cmd_verify_watkins_sweep, "verdicts over |D| <= D-max", verify)
    p.add_argument("--label", dest="labels", action="append", default=None)
    p.add_argument("--D-max", type=int, default=50)
    p.add_argument("--mode", choices=modes, default=Mode.AUTO.value)
    p = add("corollary", cmd_verify_corollary, "rank below nu_2(delta) for y^2 = x^3 - p x", verify)
    p.add_argument("-p", "--prime", type=int, required=True)
    p.add_argument("-B", type=int, default=None)

    p = add("setzer", cmd_setzer, "prime-conductor curves with rational 2-torsion")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("-p", "--prime", type=int)
    group.add_argument("--limit", type=int)

    p = add("campaign", cmd_campaign, "run a YAML campaign")
    p.add_argument("file", help="YAML file with a campaign section")
    p.add_argument("--save", action="store_true", help="Write to the results directory.")
    return parser


# ----------------------------------------------------------------------
# Entry points
# ----------------------------------------------------------------------


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    setup_logging(args.verbose, color=not args.no_color)
    err = make_console(color=not args.no_color, stderr=True)
    try:
        if args.threads is not None and args.threads < 1:
            raise ArithmeticDomainError(f"--threads must be positive, got {args.threads}")
        settings = load_settings(
            args.config,
            data_path=args.data,
            threads=args.threads,
            color=False if args.no_color else None,
        )
        ctx = Context.create(args, settings)
        ok = args.handler(ctx)
        ctx.close()
    except WatkinsError as exc:
        logger.debug("Input error", exc_info=True)
        err.print(f"[verdict.fail]error:[/] {escape(str(exc))}")
        return 2
    except OSError as exc:
        err.print(f"[verdict.fail]error:[/] {escape(str(exc))}")
        return 2
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
