"""Command-line entry point.

Exit status: 0 completed (whatever the verdict), 1 input error, 2 resource
budget exhausted, 3 differential mismatch.  ``prime`` exits 1 on composite.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import conway, field_core
from .errors import FFAError, ResourceError
from .interop import (
    DEFAULT_TIMEOUT,
    ExternalSolverConfig,
    FuzzParams,
    corpus_cases,
    detect_solvers,
    run_diff,
    seed_cases,
)
from .normalizer import print_literal
from .parser import make_sort, parse, parse_literal
from .solver import DEFAULT_BUDGET, Session

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_MISMATCH = 0, 1, 2, 3

ENV_BUDGET = "SMTFFA_BUDGET"
ENV_MR_ROUNDS = "SMTFFA_MR_ROUNDS"
ENV_CONWAY_BUDGET = "SMTFFA_CONWAY_BUDGET"
DEFAULT_CACHE_NAME = "smtffa-conway.txt"


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _seconds(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _seed_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi) if sep else int(lo) + 1
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if b <= a:
        raise argparse.ArgumentTypeError(f"empty seed range {text!r}")
    return a, b


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if not raw:
        return default
    try:
        v = int(raw)
    except ValueError:
        raise FFAError(f"{name} must be an integer, got {raw!r}") from None
    if v < 1:
        raise FFAError(f"{name} must be positive, got {v}")
    return v


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1); argparse would use 2
    def error(self, message):
        self.print_usage(sys.stderr)
        _error(message)
        raise SystemExit(EXIT_INPUT)


def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--budget", type=_positive, default=d(None), help="enumeration budget (assignments)")
    p.add_argument("--mr-rounds", type=_positive, default=d(None), help="Miller-Rabin rounds")
    p.add_argument("--cache", default=d(None), help="Conway cache file")
    p.add_argument("--timeout", type=_seconds, default=d(DEFAULT_TIMEOUT), help="external solver timeout (s)")
    p.add_argument("--seed", type=int, default=d(0), help="first fuzz seed for diff")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="smtffa", description="SMT-LIB finite field arithmetic tools")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="run a QF_FFA script")
    p.add_argument("file", help="SMT-LIB file, or - for standard input")
    _global_options(p, suppress=True)

    p = sub.add_parser("conway", help="compute a Conway polynomial")
    p.add_argument("p")
    p.add_argument("n")
    _global_options(p, suppress=True)

    p = sub.add_parser("normalize", help="normalize a finite field literal")
    p.add_argument("sort", help="p for F_p, p:n for F_{p^n}")
    p.add_argument("literal", help="e.g. ff10 or ff2.1")
    _global_options(p, suppress=True)

    p = sub.add_parser("prime", help="Miller-Rabin primality test")
    p.add_argument("p")
    _global_options(p, suppress=True)

    p = sub.add_parser("diff", help="differential test against external solvers")
    p.add_argument("--seeds", type=_seed_range, help="fuzz seed range A..B (exclusive end)")
    p.add_argument("--count", type=_positive, default=100, help="fuzz scripts when --seeds is absent")
    p.add_argument("--corpus", help="directory of .smt2 files")
    p.add_argument("--solver", action="append", default=[], metavar="LABEL=CMD")
    p.add_argument("--internal-only", action="store_true", help="compare against the naive oracle")
    p.add_argument("--jsonl", action="store_true", help="line-delimited JSON records")
    p.add_argument("--jobs", type=_positive, default=4, help="parallel external runs")
    p.add_argument("--sorts", default="3,5", help="fuzz sort pool, e.g. 3,5,3:2")
    _global_options(p, suppress=True)
    return parser


def _error(msg: str) -> None:
    print('(error "' + msg.replace('"', '""') + '")', file=sys.stderr)


def _int_arg(text: str, what: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise FFAError(f"{what} must be a numeral, got {text!r}") from None


def _sort_spec(text: str):
    p, sep, n = text.partition(":")
    p = _int_arg(p, "characteristic")
    if not sep or _int_arg(n, "degree") == 1:
        return make_sort(p, None)
    return make_sort(p, _int_arg(n, "degree"))


def cmd_solve(args, out) -> int:
    if args.file == "-":
        text = sys.stdin.read()
    else:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    script = parse(text)
    session = Session(budget=args.budget)
    status = EXIT_OK
    for c in script.commands:
        try:
            res = session.execute(c)
        except ResourceError:
            raise
        except FFAError as exc:
            _error(str(exc))
            status = EXIT_INPUT
            continue
        if res is not None:
            print(res, file=out)
    return status


def cmd_conway(args, out) -> int:
    p = _int_arg(args.p, "p")
    n = _int_arg(args.n, "n")
    if n < 1:
        raise FFAError(f"degree must be positive, got {n}")
    field_core.check_prime(p)
    f = conway.conway_polynomial(p, n)
    print(conway.format_entry(p, n, f), file=out)
    return EXIT_OK


def cmd_normalize(args, out) -> int:
    sort = _sort_spec(args.sort)
    print(print_literal(parse_literal(args.literal, sort)), file=out)
    return EXIT_OK


def cmd_prime(args, out) -> int:
    p = _int_arg(args.p, "p")
    if p < 2:
        print("composite", file=out)
        return 1
    prime = field_core.is_probable_prime(p, args.mr_rounds)
    print("probable-prime" if prime else "composite", file=out)
    return EXIT_OK if prime else 1


def cmd_diff(args, out) -> int:
    pool = tuple((s.p, s.n) for s in (_sort_spec(x) for x in args.sorts.split(",")))
    params = FuzzParams(sorts=pool)
    if args.corpus:
        cases = corpus_cases(args.corpus)
    else:
        a, b = args.seeds if args.seeds else (args.seed, args.seed + args.count)
        cases = seed_cases(a, b, params)
    try:
        solvers = [ExternalSolverConfig.parse(s, args.timeout) for s in args.solver]
    except ValueError as exc:
        raise FFAError(str(exc)) from None
    if not solvers and not args.internal_only:
        solvers = detect_solvers(args.timeout)
        if not solvers:
            print("; skipped: no external FFA solver found (try --internal-only or --solver)", file=out)
            return EXIT_OK
    report = run_diff(cases, solvers, args.internal_only, args.budget, args.jobs)
    out.write(report.format_jsonl() if args.jsonl else report.format_text())
    return EXIT_MISMATCH if report.has_mismatch else EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "conway": cmd_conway,
    "normalize": cmd_normalize,
    "prime": cmd_prime,
    "diff": cmd_diff,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    cache_path = args.cache or os.environ.get(conway.ENV_CACHE) or os.path.join(os.getcwd(), DEFAULT_CACHE_NAME)
    try:
        if args.budget is None:
            args.budget = _env_int(ENV_BUDGET, DEFAULT_BUDGET)
        if args.mr_rounds is None:
            args.mr_rounds = _env_int(ENV_MR_ROUNDS, field_core.DEFAULT_MR_ROUNDS)
        field_core.DEFAULT_MR_ROUNDS = args.mr_rounds
        search_budget = _env_int(ENV_CONWAY_BUDGET, conway.DEFAULT_SEARCH_BUDGET)
        conway.set_default_cache(conway.ConwayCache(cache_path, search_budget=search_budget))
        return COMMANDS[args.command](args, out)
    except ResourceError as exc:
        _error(str(exc))
        return EXIT_RESOURCE
    except FFAError as exc:
        _error(str(exc))
        return EXIT_INPUT
    except OSError as exc:
        _error(f"{exc.strerror or exc}: {exc.filename or ''}".rstrip(": "))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
