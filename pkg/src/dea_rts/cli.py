"""Command-line front end.

    dea-rts efficiency --model bcc --input data.csv
    dea-rts rts --input data.csv --with-mpss --format json
    dea-rts grs --input data.csv --dmu E
    dea-rts mpss --input data.csv --dmu A
    dea-rts demo

Exit status: 0 on success, 1 for bad usage or bad data, 2 when the solver or
the classification reports a diagnostic.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Optional, Sequence

from . import report
from .errors import DataError, DeaError
from .models import Tolerances, solve_maximal_element
from .rts import RtsClass, classify_all, classify_dmu, efficient_set
from .tables import parse_csv, table1

EXIT_OK, EXIT_DATA, EXIT_DIAGNOSTIC = 0, 1, 2
TOLERANCE_ENV = "DEA_TOLERANCE"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}\n")


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be strictly positive: {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=report.FORMATS, default="table")
    common.add_argument("--tol-feasibility", type=_positive)
    common.add_argument("--tol-classification", type=_positive)
    common.add_argument("--tol-support", type=_positive)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="dea-rts", description="Returns-to-scale measurement in DEA.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("efficiency", parents=[common], help="CCR or BCC scores, slacks, projections")
    p.add_argument("--input", required=True)
    p.add_argument("--model", choices=("ccr", "bcc"), default="bcc")

    p = sub.add_parser("rts", parents=[common], help="classify every DMU")
    p.add_argument("--input", required=True)
    p.add_argument("--with-mpss", action="store_true")
    p.add_argument("--dmu", action="append", help="only report these units (repeatable)")

    p = sub.add_parser("grs", parents=[common], help="global reference set of one DMU")
    p.add_argument("--input", required=True)
    p.add_argument("--dmu", required=True)

    p = sub.add_parser("mpss", parents=[common], help="nearest MPSS pattern of one DMU")
    p.add_argument("--input", required=True)
    p.add_argument("--dmu", required=True)

    sub.add_parser("demo", parents=[common], help="run the built-in six-unit example")
    return parser


def _tolerances(args, environ) -> Tolerances:
    classification = args.tol_classification
    if classification is None and environ.get(TOLERANCE_ENV):
        try:
            classification = _positive(environ[TOLERANCE_ENV])
        except argparse.ArgumentTypeError as exc:
            raise DataError(f"{TOLERANCE_ENV}: {exc}") from None
    defaults = Tolerances()
    return Tolerances(args.tol_feasibility or defaults.feasibility,
                      classification or defaults.classification,
                      args.tol_support or defaults.support)


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise DataError(f"{path} is not UTF-8 text") from None
    return parse_csv(text)


def _grs_report(dataset, name, tol, fmt) -> str:
    o = dataset.index(name)
    eff = efficient_set(dataset, tol)
    out = eff.outcomes[o]
    me = solve_maximal_element(dataset, eff.indices, dataset.point(o), out.theta, out.slack_sum, tol)
    pairs = [(dataset.names[me.efficient[k]], float(me.mu_max[k])) for k in me.support]
    if fmt == "json":
        return json.dumps({"dmu": name, "grs": [{n: w} for n, w in pairs]}, indent=2) + "\n"
    if fmt == "csv":
        return "dmu,grs\n" + f"{name},{';'.join(f'{n}:{w!r}' for n, w in pairs)}\n"
    return (f"{name}: {{{', '.join(n for n, _ in pairs)}}}\n"
            f"weights: {', '.join(f'{n}={w:.4f}' for n, w in pairs)}\n")


def _mpss_report(dataset, name, tol, fmt) -> tuple:
    result = classify_dmu(dataset, dataset.index(name), with_mpss=True, tol=tol)
    if fmt != "table":
        return report.render_report([result], fmt), result
    mpss = result.nearest_mpss
    labels = list(dataset.input_labels) + list(dataset.output_labels)
    values = list(mpss.inputs) + list(mpss.outputs)
    note = " (already at MPSS)" if result.rts is RtsClass.CONSTANT else ""
    text = f"{name}: rts={result.rts}{note}\n" + "".join(
        f"  {l} = {v:.4f}\n" for l, v in zip(labels, values))
    return text, result


def _demo(tol, fmt) -> tuple:
    dataset = table1()
    results = classify_all(dataset, with_mpss=True, tol=tol)
    if fmt != "table":
        return report.render_report(results, fmt), results
    parts = ["Input-output data", report.dataset_table(dataset),
             "BCC model", report.render_report(report.efficiency_rows(dataset, "bcc", tol)),
             "Returns to scale", report.render_report(results)]
    return "\n".join(parts), results


def run_command(argv: Sequence[str], environ: Optional[dict] = None) -> tuple:
    """Run one command; returns ``(exit_code, stdout_text, stderr_text)``."""
    environ = os.environ if environ is None else environ
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except UsageError as exc:
        return EXIT_DATA, "", str(exc)
    except SystemExit as exc:  # --help
        return (EXIT_OK if not exc.code else EXIT_DATA), "", ""
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG)

    try:
        tol = _tolerances(args, environ)
        fmt = args.format
        if args.command == "demo":
            text, results = _demo(tol, fmt)
            return (EXIT_DIAGNOSTIC if any(r.failed for r in results) else EXIT_OK), text, ""
        dataset = _load(args.input)
        if args.command == "efficiency":
            rows = report.efficiency_rows(dataset, args.model, tol)
            return EXIT_OK, report.render_report(rows, fmt), ""
        if args.command == "rts":
            if args.dmu:
                for name in args.dmu:
                    dataset.index(name)
            results = classify_all(dataset, with_mpss=args.with_mpss, tol=tol)
            if args.dmu:
                results = [r for r in results if r.dmu in args.dmu]
            code = EXIT_DIAGNOSTIC if any(r.failed for r in results) else EXIT_OK
            return code, report.render_report(results, fmt), ""
        if args.command == "grs":
            return EXIT_OK, _grs_report(dataset, args.dmu, tol, fmt), ""
        if args.command == "mpss":
            text, _ = _mpss_report(dataset, args.dmu, tol, fmt)
            return EXIT_OK, text, ""
    except DataError as exc:
        return EXIT_DATA, "", f"error: {exc}\n"
    except DeaError as exc:
        return EXIT_DIAGNOSTIC, "", f"diagnostic: {type(exc).__name__}: {exc}\n"
    raise AssertionError(f"unhandled command {args.command}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, out, err = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
