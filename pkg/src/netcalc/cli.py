"""Command line entry point: ``netcalc run | list-suites | validate-space``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from netcalc.errors import ConfigError, MalformedInputError, UsageError
from netcalc.harness import FORMATS, SUITES, ExperimentConfig, emit_report, run_suite
from netcalc.report import FAIL, INCONCLUSIVE, PASS
from netcalc.space import FiniteTopology, is_hausdorff, space_from_json

EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2, which means inconclusive here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="netcalc", description="Executable net calculus checks.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a suite and write its report")
    run.add_argument("suite")
    run.add_argument("--tolerance", type=float)
    run.add_argument("--budget", type=int, default=8)
    run.add_argument("--depth", type=int, default=64)
    run.add_argument("--grid", type=int, default=257, help="grid resolution")
    run.add_argument("--seed", type=int, default=42)
    run.add_argument("--out", help="report path (default: $NETCALC_OUT/<suite>.<format>)")
    run.add_argument("--format", choices=FORMATS, default="json")

    sub.add_parser("list-suites", help="print registered suite names")

    validate = sub.add_parser("validate-space", help="check a JSON space description")
    validate.add_argument("file")
    return parser


def _default_out(suite: str, fmt: str) -> Path:
    return Path(os.environ.get("NETCALC_OUT", ".")) / f"{suite}.{fmt}"


def _run(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; try one of {', '.join(SUITES)}")
    cfg = ExperimentConfig(args.suite, args.tolerance, args.budget, args.depth, args.grid,
                           args.seed, args.out, args.format)
    report = run_suite(args.suite, cfg)
    path = emit_report(report, args.out or _default_out(args.suite, args.format), args.format)
    counts: dict = {}
    for r in report.records:
        counts[r.verdict] = counts.get(r.verdict, 0) + 1
    summary = ", ".join(f"{v} {k}" for k, v in sorted(counts.items()))
    print(f"{args.suite}: {report.aggregate} ({summary}) -> {path}")
    return EXIT_CODES[report.aggregate]


def _validate_space(args) -> int:
    try:
        obj = json.loads(Path(args.file).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{args.file}: not valid JSON ({exc})") from exc
    space = space_from_json(obj)
    if isinstance(space, FiniteTopology):
        sep = is_hausdorff(space)
        print(f"finite topology: {len(space.points)} points, {len(space.opens)} open sets, "
              f"hausdorff={sep.hausdorff}")
    else:
        print(f"metric space {space.name} (scale {space.scale})")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "list-suites":
            print("\n".join(SUITES))
            return 0
        return _validate_space(args)
    except (UsageError, ConfigError, MalformedInputError) as exc:
        print(f"netcalc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"netcalc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
