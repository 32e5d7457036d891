"""Command-line entry point: ``reciprocity verify`` and ``reciprocity convergence``."""

from __future__ import annotations

import argparse
import io
import sys
from pathlib import Path

from .bordered import write_reports_csv
from .errors import ReciprocityError
from .scenario import (
    EXIT_FAIL,
    EXIT_INPUT,
    EXIT_PASS,
    convergence_csv,
    convergence_study,
    dump_report,
    load_scenario,
    report_dict,
    run,
)


def _grid(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid sample grid {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty sample grid")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reciprocity",
        description="Verify reciprocity laws for rational functions described in a JSON scenario.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run every check in a scenario")
    verify.add_argument("scenario", type=Path)
    verify.add_argument("--samples", type=int, default=None, help="samples per circle (power of two)")
    verify.add_argument("--tol", type=float, default=None, help="numeric tolerance")
    verify.add_argument("--seed", type=int, default=None, help="seed for property suites")
    verify.add_argument("--report", type=Path, default=None, help="write a JSON report here")
    verify.add_argument("--csv", type=Path, default=None, help="write per-circle T values here")

    conv = sub.add_parser("convergence", help="defect versus sample count")
    conv.add_argument("scenario", type=Path)
    conv.add_argument("--grid", type=_grid, default=[256, 1024, 4096])
    conv.add_argument("--csv", type=Path, default=None, help="write the table here instead of stdout")
    conv.add_argument("--seed", type=int, default=None)
    return parser


def _verify(args, out) -> int:
    sc = load_scenario(args.scenario)
    if args.samples is not None and (args.samples < 16 or args.samples & (args.samples - 1)):
        raise ReciprocityError(f"--samples must be a power of two >= 16, got {args.samples}")
    code, results = run(sc, args.samples, args.tol, args.seed)
    samples = args.samples or sc.samples
    tol = sc.tol if args.tol is None else args.tol
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] #{r.index} {r.kind}: {r.summary}", file=out)
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed", file=out)
    if args.report:
        args.report.write_text(dump_report(report_dict(sc, results, samples, tol)) + "\n", encoding="utf-8")
    if args.csv:
        buf = io.StringIO()
        write_reports_csv([rep for r in results for rep in r.reports], buf)
        args.csv.write_text(buf.getvalue(), encoding="utf-8")
    return code


def _convergence(args, out) -> int:
    sc = load_scenario(args.scenario)
    if args.seed is not None:
        sc.seed = args.seed
    rows, monotone = convergence_study(sc, args.grid)
    table = convergence_csv(rows, monotone)
    if args.csv:
        args.csv.write_text(table, encoding="utf-8")
    else:
        out.write(table)
    for k, ok in monotone.items():
        print(f"check #{k}: {'monotone' if ok else 'NOT monotone'} refinement", file=out)
    return EXIT_PASS if all(monotone.values()) else EXIT_FAIL


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args, out)
        return _convergence(args, out)
    except (ReciprocityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
