"""Command-line front end.

Exit status: 0 success, 1 a verification check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import verify
from .alternating import (
    classification_error,
    n_ap,
    n_ap_literal,
    network_lower_bound,
)
from .network import RecurrentSpec, compile_network, compile_recurrent
from .pwl import PwlFunction, format_rational, piece_count, rational
from .serialize import (
    FormatError,
    dump_dataset,
    dump_pwl,
    load_dataset,
    load_network,
    load_pwl,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _decimal(q, digits: int) -> str:
    return f"{float(q):.{digits}g}"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_compile(args) -> int:
    spec = load_network(_read(args.network))
    if isinstance(spec, RecurrentSpec):
        base, k = spec.base, spec.iterations
    else:
        base, k = spec, 1
    if args.iterations is not None:
        k = args.iterations
    if k < 1:
        raise UsageError("--iterations must be positive")
    rnet = RecurrentSpec(base, k)
    f = compile_network(base) if k == 1 else compile_recurrent(rnet)
    _write(args.output, dump_pwl(f))
    t, m, l = base.activation_pieces, base.width, base.depth
    print(
        f"pieces={piece_count(f)} bound=(t*m)^(l*k)=({t}*{m})^({l}*{k})={rnet.piece_bound()}",
        file=sys.stderr if args.output == "-" else sys.stdout,
    )
    return EXIT_OK


def cmd_dataset(args) -> int:
    if args.n is None and args.k is None:
        raise UsageError("give --n or --k")
    n = args.n if args.n is not None else 2**args.k
    if n < 1:
        raise UsageError("n must be at least 1")
    data = n_ap_literal(n) if args.strict_paper_coords else n_ap(n)
    _write(args.output, dump_dataset(data))
    return EXIT_OK


def cmd_error(args) -> int:
    f = load_pwl(_read(args.function))
    data = load_dataset(_read(args.dataset))
    if len(data) == 0:
        raise UsageError("dataset is empty")
    err = classification_error(f, data)
    print(f"error={format_rational(err)} decimal~{_decimal(err, args.precision)}")
    return EXIT_OK


def cmd_bound(args) -> int:
    if args.n is None and args.k is None:
        raise UsageError("give --n or --k")
    n = args.n if args.n is not None else 2**args.k
    if min(n, args.t, args.m, args.l) < 1:
        raise UsageError("n, t, m, l must be positive")
    report = network_lower_bound(n, args.t, args.m, args.l)
    print(json.dumps(report.to_dict()))
    return EXIT_OK


def polyline(f: PwlFunction, lo, hi) -> list:
    """Vertices of the graph of ``f`` over ``[lo, hi]``.

    A jump at a breakpoint yields two vertices with the same x (left limit,
    then value); an isolated point value yields three.
    """
    pts = [(lo, f(lo))]
    for i, b in enumerate(f.breakpoints):
        if not lo < b < hi:
            continue
        left = f.left_value(i)
        at = f.value_at_breakpoint(i)
        right = f.right_value(i)
        for y in (left, at, right):
            if pts[-1] != (b, y):
                pts.append((b, y))
    pts.append((hi, f(hi)))
    return pts


def cmd_plot(args) -> int:
    f = load_pwl(_read(args.function))
    lo_s, sep, hi_s = args.range.partition("..")
    if not sep:
        raise UsageError("--range must look like lo..hi")
    try:
        lo, hi = rational(lo_s), rational(hi_s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not lo < hi:
        raise UsageError("range needs lo < hi")
    lines = ["x,y"]
    for x, y in polyline(f, lo, hi):
        lines.append(f"{_decimal(x, args.precision)},{_decimal(y, args.precision)}")
    _write(args.output, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    if any(name not in verify.SUITES for name in names):
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(verify.SUITES)}")
    reports = []
    for name in names:
        cases = args.cases if args.cases is not None else verify.DEFAULT_CASES.get(name, 200)
        reports.append(verify.run_suite(name, cases, args.seed, workers=args.workers))
    out = [r.to_dict() for r in reports]
    print(json.dumps(out[0] if len(out) == 1 else out, indent=1))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def _default_seed() -> int:
    raw = os.environ.get("SAWTOOTH_SEED")
    try:
        return int(raw) if raw else 0
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sawtooth",
        description="Exact piecewise-affine compilation of 1-d networks and depth-separation checks.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a network JSON file to a piecewise-affine function")
    p.add_argument("network", help="NetworkSpec JSON file")
    p.add_argument("-o", "--output", default="-", help="output PwlFunction JSON (default stdout)")
    p.add_argument("--iterations", type=int, help="apply the network this many times")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("dataset", help="write an alternating-point dataset as CSV")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--n", type=int, help="number of points")
    g.add_argument("--k", type=int, help="use n = 2**k points")
    p.add_argument("-o", "--output", default="-")
    p.add_argument(
        "--strict-paper-coords",
        action="store_true",
        help="use x_i = i*2**-n, i = 1..n, instead of i/n",
    )
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("error", help="exact classification error of a function on a dataset")
    p.add_argument("function", help="PwlFunction JSON file")
    p.add_argument("dataset", help="dataset CSV file")
    p.add_argument("--precision", type=int, default=12, help="significant digits of the decimal rendering")
    p.set_defaults(func=cmd_error)

    p = sub.add_parser("bound", help="lower bound (n - 4(tm)^l)/(3n) on shallow-network error")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int, help="use n = 2**k")
    p.add_argument("--t", type=int, default=2, help="activation pieces (default 2, ReLU)")
    p.add_argument("--m", type=int, required=True, help="max nodes per layer")
    p.add_argument("--l", type=int, required=True, help="number of layers")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("plot", help="polyline CSV of a function's graph")
    p.add_argument("function", help="PwlFunction JSON file")
    p.add_argument("--range", default="0..1", help="x range as lo..hi (rationals allowed)")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--precision", type=int, default=12)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("--suite", default="all", help=f"all, or one of: {', '.join(verify.SUITES)}")
    p.add_argument("--cases", type=int, help="cases per suite")
    p.add_argument("--seed", type=int, default=_default_seed(), help="base seed (env SAWTOOTH_SEED)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormatError) as exc:
        print(f"sawtooth {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
