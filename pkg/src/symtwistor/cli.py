"""Command-line runner: ``symtwistor --suite siegel --dim 2``.

Exit status 0 when every check passes, 1 on any failure or indeterminate
check, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import UnknownSuiteError
from .serialization import to_jsonable
from .suites import SuiteConfig, list_suites, run_suite


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symtwistor", description=__doc__.splitlines()[0])
    p.add_argument("--suite", help="suite name (see --list)")
    p.add_argument("--list", action="store_true", help="list suites and exit")
    p.add_argument("--dim", type=int, default=2, help="half-dimension n (default 2)")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")
    return p


def render(report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(to_jsonable(report.to_json()), indent=2, sort_keys=True) + "\n"
    return report.to_text() + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list:
        for name, desc in list_suites():
            print(f"{name:<16} {desc}")
        return 0
    if not args.suite:
        parser.print_usage(sys.stderr)
        print("symtwistor: error: --suite is required", file=sys.stderr)
        return 2
    try:
        config = SuiteConfig(args.suite, args.dim, args.samples, args.seed, args.tol, args.format)
    except (UnknownSuiteError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"symtwistor: error: {exc}", file=sys.stderr)
        return 2
    report = run_suite(config)
    text = render(report, args.format)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report.status == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
