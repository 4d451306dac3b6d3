"""Command-line front end.

Six subcommands wrap the library pipelines with reproducible text and JSON
output: identical inputs give byte-identical JSON except for elapsed_ms
fields.  Exit codes: 0 success, 1 when undecided results are present,
2 for usage or data errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import curvedb, localobs, qrsolver
from .curvedb import CurveDatabase, load_overrides
from .freypipe import (
    EquationReport,
    IncompatibleCandidateError,
    ScenarioFormatError,
    UnknownEquationError,
    run_equation,
)
from .qrsolver import ParseError
from .symplectic import CriterionError

_DOMAIN_ERRORS = (
    curvedb.UnknownLabelError,
    curvedb.UnknownLevelError,
    curvedb.OverrideFormatError,
    localobs.PreconditionError,
    UnknownEquationError,
    ScenarioFormatError,
    IncompatibleCandidateError,
    CriterionError,
    OSError,
)

OVERRIDES_ENV = "FERMATSYM_OVERRIDES"

EXIT_OK = 0
EXIT_UNDECIDED = 1
EXIT_ERROR = 2


class CliError(Exception):
    pass


def _parse_equation(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise CliError(f"bad equation {text!r}: expected three comma-separated integers")
    if len(parts) != 3 or 0 in parts:
        raise CliError(f"bad equation {text!r}: expected three nonzero coefficients")
    return parts


def _database(args) -> CurveDatabase:
    path = getattr(args, "overrides", None) or os.environ.get(OVERRIDES_ENV)
    overrides = load_overrides(path) if path else None
    return CurveDatabase(overrides)


def _emit(args, document: dict, text: str) -> None:
    if args.json:
        print(json.dumps(document, sort_keys=True, ensure_ascii=False, indent=2))
    else:
        print(text)


def _classes_json(classes: qrsolver.CongruenceClassSet) -> dict:
    dens = qrsolver.density(classes)
    return {
        "modulus": classes.modulus,
        "residues": classes.sorted_residues(),
        "density_num": dens.numerator,
        "density_den": dens.denominator,
    }


def _equation_report_json(report: EquationReport) -> dict:
    cases = []
    for scen_report in report.scenarios:
        scen = scen_report.scenario
        conditions = []
        for case in scen_report.cases:
            subcases = []
            for sub in case.subcases:
                steps = []
                for step in sub.steps:
                    steps.append(
                        {
                            "primes": list(step.primes),
                            "kernel": str(step.kernel) if step.kernel else None,
                            "reduced": str(step.reduced) if step.reduced else None,
                            "status": step.status,
                        }
                    )
                subcases.append(
                    {
                        "legendre_2_p": sub.legendre_2_p,
                        "symplectic": sub.symplectic.value,
                        "eliminated": sub.eliminated,
                        "steps": steps,
                    }
                )
            conditions.append(
                {
                    "candidate": case.candidate,
                    "route": case.route,
                    "elimination": qrsolver.pretty(case.elimination),
                    "subcases": subcases,
                }
            )
        cases.append(
            {
                "parity": scen.parity_case,
                "level": scen.lowered_level,
                "profile": {
                    str(ell): {"residue": e.residue, "exact": e.exact}
                    for ell, e in sorted(scen.profile.items())
                },
                "candidates": list(scen.candidates),
                "conditions": conditions,
            }
        )
    dens = report.density
    return {
        "command": "analyze",
        "equation": list(report.equation),
        "exponent_floor": str(report.exponent_floor),
        "cases": cases,
        "classes": _classes_json(report.classes),
        "congruences": report.congruence_text(),
        "density": f"{dens.numerator}/{dens.denominator}",
    }


def _equation_report_text(report: EquationReport) -> str:
    a, b, c = report.equation
    dens = report.density
    lines = [
        f"equation {a}*x^p + {b}*y^p + {c}*z^p = 0",
        f"no nontrivial solutions for {report.congruence_text()}",
        f"density {dens.numerator}/{dens.denominator}; valid for {report.exponent_floor}",
    ]
    for scen_report in report.scenarios:
        scen = scen_report.scenario
        lines.append(f"  case {scen.parity_case}: level {scen.lowered_level}")
        for case in scen_report.cases:
            lines.append(
                f"    vs {case.candidate} [{case.route}]: eliminated when "
                f"{qrsolver.pretty(case.elimination)}"
            )
            for sub in case.subcases:
                if sub.legendre_2_p is not None:
                    branch = f"(2/p)={'+1' if sub.legendre_2_p == 1 else '-1'}"
                    detail = ", ".join(
                        f"{s.status}{f' {s.kernel}' if s.kernel else ''} at {s.primes[0]}"
                        for s in sub.steps
                    )
                    lines.append(f"      {branch}: {sub.symplectic.value}; {detail}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    a, b, c = _parse_equation(args.eq)
    report = run_equation(a, b, c, _database(args), args.scenarios)
    _emit(args, _equation_report_json(report), _equation_report_text(report))
    return EXIT_OK


def cmd_local(args) -> int:
    a, b, c = _parse_equation(args.eq)
    res = localobs.solvable_over_Ql(a, b, c, args.p, args.ell, args.max_level)
    witness = None
    if res.witness is not None:
        witness = {
            "triple": list(res.witness.triple),
            "level": res.witness.level,
            "coordinate": res.witness.coordinate,
            "derivative_valuation": res.witness.derivative_valuation,
        }
    doc = {
        "command": "local",
        "equation": [a, b, c],
        "p": args.p,
        "ell": args.ell,
        "status": res.status,
        "witness": witness,
        "method": "hensel_descent",
    }
    text = f"{a}*x^{args.p} + {b}*y^{args.p} + {c}*z^{args.p} = 0 over Q_{args.ell}: {res.status}"
    if witness:
        text += f" (witness {res.witness.triple} mod {args.ell}^{res.witness.level})"
    _emit(args, doc, text)
    return EXIT_UNDECIDED if res.status == "undecided" else EXIT_OK


def cmd_obstruct(args) -> int:
    a, b, c = _parse_equation(args.eq)
    started = time.monotonic_ns()
    res = localobs.has_local_obstruction(a, b, c, args.p, args.kmax)
    elapsed_ms = (time.monotonic_ns() - started) // 1_000_000
    doc = {
        "command": "obstruct",
        "equation": [a, b, c],
        "p": args.p,
        "obstruction": res.obstruction,
        "method": res.method,
        "k": res.k,
        "certified": res.certified,
        "cutoff": res.cutoff,
        "undecided": list(res.undecided),
        "elapsed_ms": elapsed_ms,
    }
    if res.obstruction is not None:
        text = f"p={args.p}: local obstruction at {res.obstruction} ({res.method})"
    elif res.certified:
        text = f"p={args.p}: no local obstruction (certified; cutoff {res.cutoff})"
    else:
        text = f"p={args.p}: none found up to k_max={args.kmax} (not certified)"
        if res.undecided:
            text += f"; undecided at {list(res.undecided)}"
    _emit(args, doc, text)
    if res.obstruction is None and not res.certified:
        return EXIT_UNDECIDED
    return EXIT_OK


def cmd_sweep(args) -> int:
    a, b, c = _parse_equation(args.eq)
    entries = localobs.sweep(a, b, c, args.pmin, args.pmax, args.kmax, args.jobs)
    doc = {
        "command": "sweep",
        "equation": [a, b, c],
        "p_min": args.pmin,
        "p_max": args.pmax,
        "k_max": args.kmax,
        "entries": [
            {
                "p": e.p,
                "obstruction": e.obstruction,
                "k": e.k,
                "method": "fast_subgroup" if e.obstruction is not None else None,
                "elapsed_ms": e.elapsed_ms,
            }
            for e in entries
        ],
    }
    lines = [f"{'p':>8} {'q':>10} {'k':>5}"]
    for e in entries:
        q = e.obstruction if e.obstruction is not None else "-"
        k = e.k if e.k is not None else "-"
        lines.append(f"{e.p:>8} {q:>10} {k:>5}")
    misses = [e.p for e in entries if e.obstruction is None]
    lines.append(
        f"# {len(entries)} primes, {len(entries) - len(misses)} with obstructions"
        + (f", none found for {misses}" if misses else "")
    )
    _emit(args, doc, "\n".join(lines))
    return EXIT_UNDECIDED if misses else EXIT_OK


def cmd_density(args) -> int:
    try:
        expr = qrsolver.parse(args.expression)
    except ParseError as e:
        raise CliError(f"bad expression: {e}")
    classes = qrsolver.to_classes(expr)
    dens = qrsolver.density(classes)
    doc = {
        "command": "density",
        "expression": args.expression,
        "normalized": qrsolver.pretty(expr),
        "classes": _classes_json(classes),
        "congruences": str(classes),
        "density": f"{dens.numerator}/{dens.denominator}",
    }
    _emit(args, doc, f"{classes}; density {dens.numerator}/{dens.denominator}")
    return EXIT_OK


def cmd_curve(args) -> int:
    record = _database(args).get(args.label)
    report = curvedb.verify(record)
    doc = {
        "command": "curve",
        "label": record.label,
        "conductor": record.conductor,
        "disc_sign": record.disc_sign,
        "disc_valuations": {str(k): v for k, v in sorted(record.disc_valuations.items())},
        "reduction": {
            str(ell): {"kind": red.kind.value, "potentially_good": red.potentially_good}
            for ell, red in sorted(record.reduction_at.items())
        },
        "inertia_sl2f3_at_2": record.inertia_sl2f3_at_2,
        "model": list(record.model.coefficients()) if record.model else None,
        "verification": {"status": report.status, "mismatches": list(report.mismatches)},
    }
    disc = " * ".join(
        f"{ell}^{v}" if v > 1 else str(ell) for ell, v in sorted(record.disc_valuations.items())
    )
    sign = "-" if record.disc_sign < 0 else ""
    text = (
        f"{record.label}: conductor {record.conductor}, minimal discriminant {sign}{disc}, "
        f"model {record.model if record.model else '(none)'}; verification: {report.status}"
    )
    if report.mismatches:
        text += "\n  " + "\n  ".join(report.mismatches)
    _emit(args, doc, text)
    return EXIT_OK if report.status != "mismatch" else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fermatsym",
        description=(
            "Non-solvability analysis for Fermat equations with coefficients: "
            "symplectic-criterion eliminations and local obstructions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, scenarios=False):
        p.add_argument("--json", action="store_true", help="emit a JSON document")
        p.add_argument(
            "--overrides",
            metavar="PATH",
            help=f"curve override file (default from ${OVERRIDES_ENV})",
        )
        if scenarios:
            p.add_argument("--scenarios", metavar="PATH", help="scenario file for other equations")

    p = sub.add_parser("analyze", help="congruence classes of eliminated exponents")
    p.add_argument("--eq", required=True, metavar="A,B,C", help="equation coefficients")
    add_common(p, scenarios=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("local", help="solvability over one Q_ell")
    p.add_argument("--eq", required=True, metavar="A,B,C")
    p.add_argument("--p", required=True, type=int, help="exponent prime")
    p.add_argument("--ell", required=True, type=int, help="place to test")
    p.add_argument("--max-level", type=int, default=None, help="depth cap override")
    add_common(p)
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("obstruct", help="first local obstruction for one exponent")
    p.add_argument("--eq", required=True, metavar="A,B,C")
    p.add_argument("--p", required=True, type=int)
    p.add_argument("--kmax", type=int, default=200, help="largest k in q = k*p + 1 (default 200)")
    add_common(p)
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("sweep", help="obstruction primes over a range of exponents")
    p.add_argument("--eq", required=True, metavar="A,B,C")
    p.add_argument("--pmin", required=True, type=int)
    p.add_argument("--pmax", required=True, type=int)
    p.add_argument("--kmax", type=int, default=200)
    p.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")
    add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("density", help="congruence classes of a constraint expression")
    p.add_argument("expression", help="e.g. '(-2)=-1 & (2)=-1'")
    add_common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("curve", help="show and verify a curve record")
    p.add_argument("label", help="e.g. 168a1")
    add_common(p)
    p.set_defaults(func=cmd_curve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except _DOMAIN_ERRORS as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {message}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
