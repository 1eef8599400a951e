"""``picheck [--json] [--fuel N] [-I DIR]... FILE...``"""
from __future__ import annotations

import argparse
import json
import sys

from .driver import CheckReport, FileReport, check_files
from .reduction import DEFAULT_FUEL, ReductionFlags


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="picheck",
        description="Check .pv proof files. Files on one command line share one session.",
    )
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("--json", action="store_true", help="one JSON report per file, one per line")
    p.add_argument("--fuel", type=_positive, default=DEFAULT_FUEL,
                   help="reduction step budget per reduction job (default: %(default)s)")
    p.add_argument("-I", dest="include", action="append", default=[], metavar="DIR",
                   help="directory searched by Require (after the requiring file's own)")
    return p


def render(report: FileReport) -> str:
    lines = [f"{report.file}:"]
    if report.error is not None:
        err = report.error
        where = ""
        if "span" in err:
            where = f"{err['span']['line']}:{err['span']['col']}: "
        lines.append(f"  {err['kind']}: {where}{err['message']}")
    for c in report.commands:
        label = f"{c.kind} {c.name}" if c.name else c.kind
        where = f" ({c.span})" if c.span is not None else ""
        if c.status == "error":
            lines.append(f"  error   {label}{where}")
            lines.append(f"          {c.error['kind']}: {c.error['message']}")
            for edge in c.error.get("core", []):
                sites = ", ".join(edge["sites"]) or "kernel"
                lines.append(f"            {edge['lo']} {edge['rel']} {edge['hi']}  [from {sites}]")
        else:
            lines.append(f"  {c.status:<7} {label}")
        if c.output is not None:
            lines.append(f"          = {c.output}")
    verdict = "satisfiable" if report.satisfiable else "UNSATISFIABLE"
    lines.append(f"  {len(report.commands)} commands, {report.levels} levels, "
                 f"{report.constraints} constraints, {verdict}, {report.ms:.1f} ms")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    report: CheckReport = check_files(args.files, args.include, ReductionFlags(fuel=args.fuel))
    for f in report.files:
        if args.json:
            print(json.dumps(f.to_json()))
        else:
            print(render(f))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
