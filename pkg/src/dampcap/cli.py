"""Command line entry point: ``dampcap compute | sweep | figure``.

Exit status is 0 on success, 2 on invalid input and 3 when some grid
points were skipped or failed.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .capacity import DEFAULT_MAX_ITER, DEFAULT_TOL
from .families import ChannelSpec
from .harness import (PRESETS, ConfigError, SweepSpec, emit, figure_preset, parse_config,
                      run_sweep)

EXIT_OK, EXIT_INVALID, EXIT_PARTIAL = 0, 2, 3


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def _param(text: str) -> tuple[str, object]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        if "," in value:
            return key, [float(v) for v in value.split(",")]
        return key, _number(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"parameter {key!r} is not numeric: {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dampcap", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="Blahut-Arimoto certification gap in bits")
    common.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", type=Path, default=None, help="output file (default stdout)")
    common.add_argument("--workers", type=int, default=1,
                        help="processes used to evaluate grid points")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="one channel")
    p.add_argument("--family", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--param", type=_param, action="append", default=[],
                   metavar="KEY=VALUE", help="family parameter; comma list for per-level gamma")

    p = sub.add_parser("sweep", parents=[common], help="sweep from a JSON config")
    p.add_argument("--config", type=Path, required=True)

    p = sub.add_parser("figure", parents=[common], help="reproduce a figure's data")
    p.add_argument("--id", required=True, choices=sorted(PRESETS))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.command == "compute":
            params = dict(args.param)
            ChannelSpec(args.family, args.d, params).transition()
            sweep = SweepSpec(args.family, [args.d], params=params)
        elif args.command == "sweep":
            sweep = parse_config(args.config.read_text())
        else:
            sweep = figure_preset(args.id)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    rows = run_sweep(sweep, tol=args.tol, max_iter=args.max_iter, workers=args.workers)
    ok = [r for r in rows if r.status == "ok"]
    bad = len(rows) - len(ok)
    if ok:
        try:
            if args.out is None:
                emit(ok, args.format, sys.stdout)
            else:
                emit(ok, args.format, args.out)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
    if bad:
        print(f"{bad} of {len(rows)} grid points skipped or failed", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
