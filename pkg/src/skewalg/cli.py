"""Command line front end: parse a workspace file and run verification suites.

Exit status is 0 when every check passes, 1 when a check fails (or an
Inconclusive outcome occurs under ``--strict``), 2 on input errors.
"""
from __future__ import annotations

import argparse
import sys

from .errors import ParseError, SkewAlgError, UnknownSuite, ValidationError
from .repcat import DEFAULT_BUDGET
from .suites import SUITES, format_text, run_suite, write_reports
from .workspace import parse_workspace


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skewalg", description="Verify skew group algebra identities on a fixture file.")
    ap.add_argument("workspace", help="fixture file with [kind name] stanzas")
    ap.add_argument("--suite", action="append", required=True,
                    help=f"suite to run (repeatable, or 'all'): {', '.join(SUITES)}")
    ap.add_argument("--field-p", type=int, default=None, help="override the prime of the field stanza")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomised searches (default 0)")
    ap.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="trials per randomised search")
    ap.add_argument("--strict", action="store_true", help="treat Inconclusive outcomes as failures")
    ap.add_argument("--out", default=None, help="directory for <suite>.txt and <suite>.csv reports")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    suites = []
    for s in args.suite:
        suites += list(SUITES) if s == "all" else [x for x in s.split(",") if x]
    if args.seed < 0 or args.seed >= 2 ** 64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 2
    if args.budget < 1:
        print("error: --budget must be positive", file=sys.stderr)
        return 2
    try:
        for s in suites:
            if s not in SUITES:
                raise UnknownSuite(f"unknown suite '{s}'; choose from {', '.join(SUITES)}")
        ws = parse_workspace(args.workspace, p=args.field_p)
    except (OSError, ParseError, ValidationError, UnknownSuite) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SkewAlgError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    ok = True
    for s in suites:
        res = run_suite(ws, s, seed=args.seed, budget=args.budget)
        if args.out:
            write_reports(res, args.out, strict=args.strict)
        else:
            sys.stdout.write(format_text(res, strict=args.strict))
        print(f"{s}: {len(res.rows)} checks, {res.n_failed} failed, {len(res.inconclusive)} inconclusive",
              file=sys.stderr)
        ok = ok and res.ok(args.strict)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
