"""Command-line entry point: solve, sweep, figure, verify.

Exit status: 0 success, 1 solver error, 2 verification failure,
3 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import checks
from .crra_solver import FixedPointConfig, solve_equity, solve_token
from .errors import DomainError, ModelError, ParseError
from .io import fmt, format_record, parse_config, rows_to_csv, solution_record
from .model_core import DEFAULT_PARAMS, PARAM_NAMES, ModelParams, validate_params
from .svg import payoff_figure
from .sweep import SWEEPABLE, GridSpec, figure1_data, sweep_1d

EXIT_OK, EXIT_SOLVER, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("model parameters (override the config file)")
    for name in PARAM_NAMES:
        g.add_argument(f"--{name}", type=float, default=None, metavar="X")
    common.add_argument("--config", type=Path, help="flat key = value parameter file")
    common.add_argument("-o", "--output", type=Path, help="write to this file instead of stdout")
    common.add_argument("--format", choices=("csv", "text"), default=None)
    common.add_argument("-v", "--verbose", action="store_true",
                        help="full precision and solver diagnostics")

    parser = _Parser(prog="tokenequity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="equity and token equilibrium at one point")
    sp = sub.add_parser("sweep", parents=[common], help="one-parameter comparative statics to CSV")
    sp.add_argument("--param", required=True, choices=SWEEPABLE)
    sp.add_argument("--lo", type=float, required=True)
    sp.add_argument("--hi", type=float, required=True)
    sp.add_argument("--steps", type=int, default=21)
    sp.add_argument("--workers", type=int, default=1)
    fp = sub.add_parser("figure", parents=[common],
                        help="payoff vs sigma at lambda = 0.1: writes PREFIX.csv and PREFIX.svg")
    fp.add_argument("--sigma-max", type=float, default=5.0)
    fp.add_argument("--sigma-steps", type=int, default=21)
    sub.add_parser("verify", parents=[common], help="run the oracle and property checks")
    return parser


def resolve_params(args) -> ModelParams:
    values = DEFAULT_PARAMS.as_dict()
    if args.config is not None:
        values.update(parse_config(args.config))
    for name in PARAM_NAMES:
        v = getattr(args, name)
        if v is not None:
            values[name] = v
    return validate_params(ModelParams.from_dict(values))


def _emit(text: str, output: Path | None, out) -> None:
    if output is None:
        out.write(text)
    else:
        output.write_text(text)


def cmd_solve(args, params, out, err) -> int:
    cfg = FixedPointConfig()
    records, status = [], EXIT_OK
    for leg, solve in (("equity", solve_equity), ("token", solve_token)):
        try:
            records.append(solution_record(solve(params, cfg), verbose=args.verbose))
        except ModelError as exc:
            err.write(f"{leg}: {type(exc).__name__}: {exc}\n")
            status = EXIT_SOLVER
    if (args.format or "text") == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("asset", "field", "value"))
        for rec in records:
            for k, v in rec.items():
                if k != "asset":
                    w.writerow((rec["asset"], k, fmt(v, args.verbose)))
        text = buf.getvalue()
    else:
        blocks = [f"# sigma = {params.sigma:g}"] + [format_record(r, args.verbose) for r in records]
        text = "\n\n".join(blocks) + "\n"
    _emit(text, args.output, out)
    return status


def _rows_table(rows, full):
    lines = []
    for r in rows:
        cells = [r.grid_value, r.equity_price, r.token_price, r.equity_payoff, r.token_payoff, r.payoff_diff]
        lines.append("  ".join(f"{'-':>12}" if c is None else (f"{c!r:>12}" if full else f"{c:12.6f}")
                               for c in cells) + ("  " + ";".join(r.flags) if r.flags else ""))
    head = "  ".join(f"{h:>12}" for h in ("value", "q", "p0", "equity", "token", "diff"))
    return head + "\n" + "\n".join(lines) + "\n"


def cmd_sweep(args, params, out, err) -> int:
    grid = GridSpec(args.param, args.lo, args.hi, args.steps)
    rows = sweep_1d(params, grid, workers=args.workers)
    text = _rows_table(rows, args.verbose) if args.format == "text" else rows_to_csv(rows, args.verbose)
    _emit(text, args.output, out)
    return EXIT_OK


def cmd_figure(args, params, out, err) -> int:
    rows = figure1_data(params, GridSpec("sigma", 0.0, args.sigma_max, args.sigma_steps))
    prefix = args.output or Path("payoff_vs_sigma")
    csv_path, svg_path = prefix.with_suffix(".csv"), prefix.with_suffix(".svg")
    csv_path.write_text(rows_to_csv(rows, args.verbose))
    svg_path.write_text(payoff_figure(rows))
    out.write(f"wrote {csv_path} ({len(rows)} rows) and {svg_path}\n")
    return EXIT_OK


def cmd_verify(args, params, out, err) -> int:
    results = checks.run_all(params)
    text = checks.format_table(results) + "\n"
    _emit(text, args.output, out)
    if args.output is not None:
        out.write(text)
    failed = [r.name for r in results if not r.passed]
    if failed:
        err.write(f"verification failed: {', '.join(failed)}\n")
        return EXIT_VERIFY
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "sweep": cmd_sweep, "figure": cmd_figure, "verify": cmd_verify}


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        params = resolve_params(args)
        if args.command == "sweep":
            GridSpec(args.param, args.lo, args.hi, args.steps)
    except (UsageError, ParseError, DomainError) as exc:
        err.write(f"tokenequity: {exc}\n")
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, params, out, err)
    except DomainError as exc:
        err.write(f"tokenequity: {exc}\n")
        return EXIT_USAGE
    except ModelError as exc:
        err.write(f"tokenequity: {type(exc).__name__}: {exc}\n")
        return EXIT_SOLVER


def main() -> None:
    sys.exit(run())
