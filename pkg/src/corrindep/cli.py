"""Command-line front end.

Three subcommands:

  corrindep test DATA.csv      run the four tests on a data matrix
  corrindep simulate ...       Monte Carlo size/power estimation
  corrindep validate ...       check the analytic moment identities by MC

Exit codes: 0 ran to completion (including accept/reject either way and
simulation cells reported with inline errors), 1 usage error, 2 data error
(unreadable/malformed input, impossible parameters), 3 validation failure
(a moment identity exceeded its tolerance).

Input CSV: UTF-8, comma-separated, decimal point, columns = variables and
rows = observations; a single header row is auto-detected (any non-numeric
cell in the first row).  Text output rounds to 4 decimals; csv and json
carry full float precision, and reruns with identical flags and seed are
byte-identical at any --threads value.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from .correlation import correlation_summary
from .decision import TEST_NAMES, decide_all
from .errors import (CorrIndepError, DataFormatError, DegenerateColumnError,
                     DomainError)
from .oracle import run_identity_suite
from .simulation import (SimulationSpec, parse_rows_csv, row_cell_key,
                         rows_to_csv, rows_to_json, run_table, table1_grid,
                         table2_grid)
from .statistics import statistic_report

TEST_CSV_HEADER = ("test", "statistic", "threshold", "alpha", "p_value",
                   "reject", "error")
VALIDATE_CSV_HEADER = ("identity", "n", "replications", "seed", "analytic",
                       "empirical", "mc_se", "mode", "error", "tolerance",
                       "passed")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the exit-code contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def _alpha_arg(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("%r is not a number" % text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError("alpha must lie strictly between 0 and 1")
    return value


def _tests_arg(text):
    names = tuple(part.strip() for part in text.split(",") if part.strip())
    if not names:
        raise argparse.ArgumentTypeError("no test names given")
    for name in names:
        if name not in TEST_NAMES:
            raise argparse.ArgumentTypeError(
                "unknown test %r (choose from %s)" % (name, ", ".join(TEST_NAMES)))
    return names


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("%r is not an integer" % text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser():
    parser = _Parser(
        prog="corrindep",
        description="Tests of complete independence for high-dimensional "
                    "normal data, with Monte Carlo and analytic validation.")
    sub = parser.add_subparsers(dest="subcommand", required=True,
                                metavar="{test,simulate,validate}")

    def add_common(sp, with_alpha=True):
        if with_alpha:
            sp.add_argument("--alpha", type=_alpha_arg, default=0.05,
                            help="significance level (default 0.05)")
            sp.add_argument("--tests", type=_tests_arg, default=TEST_NAMES,
                            metavar="LIST",
                            help="comma-separated subset of %s (default all)"
                                 % ",".join(TEST_NAMES))
        sp.add_argument("--format", choices=("text", "csv", "json"),
                        default="text", help="output format (default text)")
        sp.add_argument("--output", metavar="PATH",
                        help="write the report to PATH instead of stdout")

    sp_test = sub.add_parser("test", help="run the tests on a CSV data matrix")
    sp_test.add_argument("data", help="CSV file: rows = observations, "
                                      "columns = variables")
    add_common(sp_test)
    sp_test.set_defaults(func=cmd_test)

    sp_sim = sub.add_parser("simulate", help="Monte Carlo size/power estimation")
    sp_sim.add_argument("--preset", choices=("table1", "table2"),
                        help="builtin 30-cell grid: table1 (rho=0 size) or "
                             "table2 (rho=0.02 power)")
    sp_sim.add_argument("--n", type=_positive_int, help="sample size of one cell")
    sp_sim.add_argument("--p", type=_positive_int, help="dimension of one cell")
    sp_sim.add_argument("--rho", type=float,
                        help="common correlation of one cell (default 0)")
    add_common(sp_sim)
    sp_sim.add_argument("--seed", type=int, default=0,
                        help="master seed (default 0)")
    sp_sim.add_argument("--reps", type=_positive_int, default=10_000,
                        help="replications per cell (default 10000)")
    sp_sim.add_argument("--threads", type=_positive_int,
                        help="cap the number of worker threads")
    sp_sim.add_argument("--resume", action="store_true",
                        help="with --format csv --output PATH: keep finished "
                             "cells already in PATH and run only the rest")
    sp_sim.set_defaults(func=cmd_simulate)

    sp_val = sub.add_parser("validate",
                            help="verify the analytic moment identities by MC")
    sp_val.add_argument("--n", type=_positive_int, default=20,
                        help="sample size the identities are checked at "
                             "(default 20)")
    add_common(sp_val, with_alpha=False)
    sp_val.add_argument("--seed", type=int, default=0,
                        help="master seed (default 0)")
    sp_val.add_argument("--reps", type=_positive_int, default=None,
                        help="draws per identity (default: each identity's "
                             "documented count)")
    sp_val.add_argument("--threads", type=_positive_int,
                        help="accepted for flag symmetry; validation is "
                             "single-threaded")
    sp_val.set_defaults(func=cmd_validate)
    return parser


def _check_usage(parser, args):
    if args.subcommand == "simulate":
        inline = [name for name in ("n", "p", "rho")
                  if getattr(args, name) is not None]
        if args.preset and inline:
            parser.error("--preset cannot be combined with --%s" % inline[0])
        if not args.preset:
            if args.n is None or args.p is None:
                parser.error("simulate needs --preset or both --n and --p")
        if args.resume:
            if args.format != "csv" or not args.output:
                parser.error("--resume requires --format csv and --output")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_usage(parser, args)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 1
    try:
        return args.func(args)
    except (CorrIndepError, OSError) as exc:
        print("corrindep: error: %s" % exc, file=sys.stderr)
        return 2


def _emit(text, output):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# --- test ----------------------------------------------------------------

def _all_numeric(record):
    for cell in record:
        try:
            float(cell)
        except ValueError:
            return False
    return True


def read_data_matrix(path):
    """Parse a CSV data matrix; returns (column names or None, (n, p) array)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        records = [(i + 1, rec) for i, rec in enumerate(csv.reader(fh))]
    records = [(ln, rec) for ln, rec in records
               if any(cell.strip() for cell in rec)]
    if not records:
        raise DataFormatError("%s contains no data" % path)
    names = None
    if not _all_numeric(records[0][1]):
        names = [cell.strip() for cell in records[0][1]]
        records = records[1:]
        if not records:
            raise DataFormatError("%s has a header but no data rows" % path)
    width = len(names) if names is not None else len(records[0][1])
    data = np.empty((len(records), width))
    for i, (ln, rec) in enumerate(records):
        if len(rec) != width:
            raise DataFormatError("row %d has %d fields, expected %d"
                                  % (ln, len(rec), width))
        for j, cell in enumerate(rec):
            try:
                data[i, j] = float(cell)
            except ValueError:
                raise DataFormatError("row %d, column %d: %r is not a number"
                                      % (ln, j + 1, cell))
    return names, data


def _fmt4(value):
    return "" if value is None else "%.4f" % value


def _render_test_text(report, decisions, errors, alpha, tests):
    lines = ["n = %d observations, p = %d variables (%d correlation pairs)"
             % (report.n, report.p, report.p * (report.p - 1) // 2), ""]
    stat_rows = [("t", report.t), ("T", report.T), ("Q", report.Q),
                 ("t_star", report.t_star), ("T_star", report.T_star),
                 ("t_c", report.t_c), ("T_c", report.T_c),
                 ("tau_sq", report.tau_sq), ("sigma_sq", report.sigma_sq)]
    lines.append("%-10s %12s" % ("statistic", "value"))
    for name, value in stat_rows:
        shown = _fmt4(value) if value is not None else \
            "error: " + report.errors.get(name, "unavailable")
        lines.append("%-10s %12s" % (name, shown))
    lines.append("")
    lines.append("%-8s %12s %12s %10s %8s  %s"
                 % ("test", "statistic", "threshold", "p_value", "alpha",
                    "decision"))
    for name in tests:
        if name in decisions:
            d = decisions[name]
            lines.append("%-8s %12s %12s %10s %8s  %s"
                         % (name, _fmt4(d.statistic), _fmt4(d.threshold),
                            _fmt4(d.p_value), _fmt4(d.alpha),
                            "reject" if d.reject else "accept"))
        else:
            lines.append("%-8s error: %s" % (name, errors[name]))
    return "\n".join(lines) + "\n"


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _full(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def cmd_test(args):
    names, data = read_data_matrix(args.data)
    try:
        corr = correlation_summary(data)
    except DegenerateColumnError as exc:
        label = ("%r (column %d)" % (names[exc.column], exc.column + 1)
                 if names is not None else "column %d" % (exc.column + 1))
        raise DegenerateColumnError(
            exc.column, "%s has zero sample variance" % label)
    report = statistic_report(corr)
    decisions, errors = decide_all(report, args.alpha, tests=args.tests)

    if args.format == "text":
        text = _render_test_text(report, decisions, errors, args.alpha,
                                 args.tests)
    elif args.format == "json":
        text = json.dumps({
            "n": report.n, "p": report.p, "alpha": args.alpha,
            "statistics": report.to_dict(),
            "decisions": {name: decisions[name].to_dict()
                          for name in args.tests if name in decisions},
            "errors": {name: errors[name]
                       for name in args.tests if name in errors},
        }, indent=2) + "\n"
    else:
        rows = []
        for name in args.tests:
            if name in decisions:
                d = decisions[name]
                rows.append([name, _full(d.statistic), _full(d.threshold),
                             _full(d.alpha), _full(d.p_value),
                             _full(d.reject), ""])
            else:
                rows.append([name, "", "", _full(float(args.alpha)), "", "",
                             errors[name]])
        text = _csv_text(TEST_CSV_HEADER, rows)
    _emit(text, args.output)
    return 0


# --- simulate --------------------------------------------------------------

def _render_sim_text(rows):
    lines = ["%-8s %5s %5s %8s %7s %7s %10s %8s"
             % ("test", "n", "p", "rho", "alpha", "reps", "rate", "mc_se")]
    for row in rows:
        if row.get("error"):
            lines.append("%-8s %5d %5d %8g %7g %7d  error: %s"
                         % (row["test"], row["n"], row["p"], row["rho"],
                            row["alpha"], row["replications"], row["error"]))
        else:
            lines.append("%-8s %5d %5d %8g %7g %7d %10.4f %8.4f"
                         % (row["test"], row["n"], row["p"], row["rho"],
                            row["alpha"], row["replications"],
                            row["reject_rate"], row["mc_se"]))
    return "\n".join(lines) + "\n"


def cmd_simulate(args):
    if args.preset == "table1":
        grid = table1_grid(replications=args.reps, seed=args.seed,
                           alpha=args.alpha, tests=args.tests)
    elif args.preset == "table2":
        grid = table2_grid(replications=args.reps, seed=args.seed,
                           alpha=args.alpha, tests=args.tests)
    else:
        grid = [SimulationSpec(n=args.n, p=args.p,
                               rho=args.rho if args.rho is not None else 0.0,
                               alpha=args.alpha, replications=args.reps,
                               seed=args.seed, tests=args.tests)]

    old_by_key = {}
    skip = frozenset()
    if args.resume:
        try:
            with open(args.output, "r", encoding="utf-8") as fh:
                for row in parse_rows_csv(fh.read()):
                    old_by_key.setdefault(row_cell_key(row), []).append(row)
        except FileNotFoundError:
            pass
        # resume only complete cells; error rows (blank rates) are retried
        skip = frozenset(key for key, rows in old_by_key.items()
                         if all(r["reject_rate"] is not None for r in rows))

    def progress(line):
        print(line, file=sys.stderr)

    new_rows = run_table(grid, threads=args.threads, progress=progress,
                         skip_keys=skip)
    if skip:
        new_by_key = {}
        for row in new_rows:
            new_by_key.setdefault(row_cell_key(row), []).append(row)
        rows = []
        for spec in grid:
            key = spec.cell_key()
            source = old_by_key if key in skip else new_by_key
            rows.extend(source.get(key, ()))
    else:
        rows = new_rows

    if args.format == "csv":
        text = rows_to_csv(rows)
    elif args.format == "json":
        text = rows_to_json(rows)
    else:
        text = _render_sim_text(rows)
    _emit(text, args.output)
    return 0


# --- validate ---------------------------------------------------------------

def _render_validate_text(checks):
    lines = ["%-22s %4s %10s %13s %13s %10s %10s %-8s %s"
             % ("identity", "n", "reps", "analytic", "empirical", "error",
                "tolerance", "mode", "status")]
    for c in checks:
        lines.append("%-22s %4d %10d %13.6g %13.6g %10.4g %10.4g %-8s %s"
                     % (c.identity, c.n, c.replications, c.analytic,
                        c.empirical, c.error, c.tolerance, c.mode,
                        "PASS" if c.passed else "FAIL"))
    failed = [c.identity for c in checks if not c.passed]
    lines.append("")
    if failed:
        lines.append("FAIL: %d of %d identities out of tolerance (%s)"
                     % (len(failed), len(checks), ", ".join(failed)))
    else:
        lines.append("PASS: all %d identities within tolerance" % len(checks))
    return "\n".join(lines) + "\n"


def cmd_validate(args):
    checks = run_identity_suite(n=args.n, reps=args.reps, seed=args.seed)
    if args.format == "json":
        text = json.dumps([c.to_dict() for c in checks], indent=2) + "\n"
    elif args.format == "csv":
        rows = [[c.identity, c.n, c.replications, c.seed, _full(c.analytic),
                 _full(c.empirical), _full(c.mc_se), c.mode, _full(c.error),
                 _full(c.tolerance), _full(c.passed)] for c in checks]
        text = _csv_text(VALIDATE_CSV_HEADER, rows)
    else:
        text = _render_validate_text(checks)
    _emit(text, args.output)
    return 0 if all(c.passed for c in checks) else 3


if __name__ == "__main__":
    sys.exit(main())
