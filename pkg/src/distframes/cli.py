"""Command line entry point: ``distframes run|classify|sweep|oracle-check``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .distmap import Builtin, builtin_map, import_map
from .errors import DistFrameError, ParseError, TaskFailure, UnknownMapLabel
from .frameops import DEFAULT_TOLERANCES, classify, unboundedness_sweep
from .scenario import bundled_dir, dump_json, load_scenario, execute, oracle_check, parse_grid_arg
from .testspace import hermite_space


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _tol_pair(text: str) -> tuple[str, float]:
    key, sep, val = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key, float(val)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distframes", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scenario file or a directory of them")
    run.add_argument("scenario", nargs="?", help="scenario JSON file or directory")
    run.add_argument("--bundled", action="store_true", help="run the scenarios shipped with the package")
    run.add_argument("--out", default="reports", help="output directory (default: ./reports)")

    cl = sub.add_parser("classify", help="classify one map and print its FrameReport")
    cl.add_argument("--map", required=True, help="builtin kind or path to a pairing CSV")
    cl.add_argument("--n", type=int, required=True)
    cl.add_argument("--grid", default="auto", help="auto or kind,m[,a,b]")
    cl.add_argument("--tol", type=_tol_pair, action="append", default=[],
                    help="tolerance override key=value, repeatable")

    sw = sub.add_parser("sweep", help="frame bounds of a builtin across sizes")
    sw.add_argument("--map", required=True, choices=[b.value for b in Builtin])
    sw.add_argument("--sizes", type=_int_list, default=[4, 8, 16, 32])

    oc = sub.add_parser("oracle-check", help="frame operator vs loop oracle on random maps")
    oc.add_argument("--n", type=int, default=None, help="fix N (default: random up to 32)")
    oc.add_argument("--seed", type=int, default=0)
    oc.add_argument("--count", type=int, default=20)
    return parser


def _run(args) -> int:
    if args.bundled:
        target = bundled_dir()
    elif args.scenario:
        target = Path(args.scenario)
    else:
        print("run: give a scenario path or --bundled", file=sys.stderr)
        return 2
    paths = sorted(target.glob("*.json")) if target.is_dir() else [target]
    status = 0
    for path in paths:
        try:
            report = execute(load_scenario(path), args.out)
        except (ParseError, UnknownMapLabel) as exc:
            print(f"{path}: {type(exc).__name__}: {exc}", file=sys.stderr)
            status = 2
            continue
        except TaskFailure as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            status = 1
            continue
        print(f"{path.name}: {len(report.tasks)} tasks -> {args.out}/{report.scenario}.report.json")
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "classify":
            space = hermite_space(args.n)
            grid = parse_grid_arg(args.grid, space)
            tol = DEFAULT_TOLERANCES.with_overrides(dict(args.tol))
            if args.map in {b.value for b in Builtin}:
                dmap = builtin_map(args.map, space, grid, tol.gram_gate)
            else:
                dmap = import_map(args.map, space, grid)
            sys.stdout.write(dump_json(classify(dmap, tol).to_json()))
            return 0
        if args.command == "sweep":
            sys.stdout.write(dump_json(unboundedness_sweep(args.map, args.sizes).to_json()))
            return 0
        if args.command == "oracle-check":
            sys.stdout.write(dump_json(oracle_check(args.count, args.seed, n=args.n)))
            return 0
    except (DistFrameError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
