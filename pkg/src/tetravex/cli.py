"""Command-line entry point.

Exit codes: 0 for success or a "yes" answer, 1 for a well-formed run with
a "no" answer, 2 for usage or input errors.  Verdicts go to stdout, every
diagnostic to stderr.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .core import (
    Boundary, FormatError, parse_instance, parse_tiling, serialize_instance,
    serialize_tiling, validate_tiling,
)
from .generator import (
    GenConfig, GenerationError, Mode, experiment_csv, generate, generate_unique,
    run_experiment,
)
from .reduction import (
    ReductionError, decode_assignment, pad_map, pad_to_square, parse_1in3, parse_map,
    reduce, sat_oracle, serialize_map,
)
from .solver import solve

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2) itself; keep control here
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _load(path: str, parser):
    try:
        return parser(_read(path))
    except FormatError as exc:
        raise UsageError(f"{path}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"size must look like 3x3, got {text!r}") from None


def _split_list(values: list[str]) -> list[str]:
    return [v for item in values for v in item.split(",") if v]


# -- subcommands ------------------------------------------------------------

def cmd_reduce(args) -> int:
    sat = _load(args.inp, parse_1in3)
    boundary = Boundary.TOROIDAL if args.toroidal else Boundary.BORDERED
    try:
        inst, rmap = reduce(sat, boundary, pad_square=args.square)
    except ReductionError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, serialize_instance(inst))
    if args.map:
        _write(args.map, serialize_map(rmap))
    print(f"{inst.width}x{inst.height} {boundary.value}, {inst.size} tiles", file=sys.stderr)
    return EXIT_YES


def cmd_solve(args) -> int:
    inst = _load(args.inp, parse_instance)
    if args.limit is not None and args.limit < 1:
        raise UsageError("--limit must be at least 1")
    limit = args.limit if args.limit is not None else (None if args.count else 1)
    res = solve(inst, limit=limit, collect=1 if args.witness else 0)
    st = res.stats
    print(f"nodes {st.nodes_expanded}, max depth {st.max_depth}, {st.elapsed:.3f}s", file=sys.stderr)
    if not res.solvable:
        print("UNSOLVABLE")
        return EXIT_NO
    if args.count and limit is not None and res.count >= limit:
        print(f"limit {limit} reached; the true count may be higher", file=sys.stderr)
    print(f"SOLVABLE {res.count}")
    if args.witness:
        _write(args.witness, serialize_tiling(res.witnesses[0]))
    return EXIT_YES


def cmd_verify(args) -> int:
    inst = _load(args.instance, parse_instance)
    tiling = _load(args.tiling, lambda text: parse_tiling(text, inst))
    report = validate_tiling(inst, tiling)
    if report.valid:
        print("VALID")
        return EXIT_YES
    for v in report.violations[:20]:
        print(f"mismatch {v.first}->{v.second}: {v.labels[0]} vs {v.labels[1]}", file=sys.stderr)
    print(f"INVALID {len(report.violations)} mismatch(es)"
          + ("" if report.multiset_ok else ", wrong multiset"))
    return EXIT_NO


def _map_for(sat, inst):
    """Rebuild the reduction map behind ``inst``, refusing if it does not match."""
    padded = inst.boundary is Boundary.BORDERED and inst.width == inst.height
    ref, rmap = reduce(sat, inst.boundary, pad_square=padded)
    if ref != inst:
        raise UsageError("instance is not the reduction of this 1in3 file")
    return rmap


def cmd_decode(args) -> int:
    sat = _load(args.inp, parse_1in3)
    inst = _load(args.instance, parse_instance)
    tiling = _load(args.tiling, lambda text: parse_tiling(text, inst))
    rmap = _map_for(sat, inst)
    if not validate_tiling(inst, tiling).valid:
        raise UsageError("tiling is not a valid solution of the instance")
    try:
        a = decode_assignment(rmap, tiling)
    except ReductionError as exc:
        raise UsageError(str(exc)) from None
    print(a)
    if not sat.satisfied_by(a):
        print("decoded assignment does not 1-in-3-satisfy the formula", file=sys.stderr)
        return EXIT_NO
    return EXIT_YES


def cmd_oracle(args) -> int:
    sat = _load(args.inp, parse_1in3)
    try:
        found = sat_oracle(sat)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not found:
        print("UNSATISFIABLE")
        return EXIT_NO
    for a in found:
        print(a)
    return EXIT_YES


def cmd_generate(args) -> int:
    try:
        cfg = GenConfig(args.width, args.height, args.alphabet, args.seed, Mode(args.mode))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.unique:
        if cfg.mode is not Mode.SHREDDED:
            raise UsageError("--unique needs --mode shredded")
        try:
            inst = generate_unique(cfg, args.budget)
        except GenerationError as exc:
            print(str(exc), file=sys.stderr)
            return EXIT_NO
    else:
        inst = generate(cfg)
    _write(args.out, serialize_instance(inst))
    return EXIT_YES


def cmd_experiment(args) -> int:
    try:
        modes = [Mode(m) for m in _split_list(args.modes)]
        sizes = [_size(s) for s in _split_list(args.sizes)]
        alphabets = [int(a) for a in _split_list(args.alphabets)]
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(str(exc)) from None
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    rows = run_experiment(modes, sizes, alphabets, args.trials, args.seed, args.workers)
    text = experiment_csv(rows)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        _write(args.out, text)
    return EXIT_YES


def cmd_pad(args) -> int:
    inst = _load(args.inp, parse_instance)
    rmap = _load(args.map, parse_map)
    try:
        padded = pad_to_square(inst, rmap)
    except ReductionError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, serialize_instance(padded))
    if args.map_out:
        _write(args.map_out, serialize_map(pad_map(rmap)))
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tetravex", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("reduce", help="compile a 1in3 file into a puzzle")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--toroidal", action="store_true")
    s.add_argument("--square", action="store_true", help="pad the board to a square")
    s.add_argument("--map", help="also write the per-cell role map")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", help="decide / count solutions")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--limit", type=int)
    s.add_argument("--witness", help="write the first solution here")
    s.add_argument("--count", action="store_true", help="count (exhaustively unless --limit)")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", help="check a tiling against an instance")
    s.add_argument("--instance", required=True)
    s.add_argument("--tiling", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("decode", help="read the assignment out of a solved reduction")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--instance", required=True)
    s.add_argument("--tiling", required=True)
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("oracle", help="list 1-in-3 satisfying assignments")
    s.add_argument("--in", dest="inp", required=True)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("generate", help="random puzzle")
    s.add_argument("--mode", choices=[m.value for m in Mode], required=True)
    s.add_argument("--width", type=int, required=True)
    s.add_argument("--height", type=int, required=True)
    s.add_argument("--alphabet", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--unique", action="store_true")
    s.add_argument("--budget", type=int, default=100)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("experiment", help="solvable/unique fractions as CSV")
    s.add_argument("--modes", nargs="+", required=True)
    s.add_argument("--sizes", nargs="+", required=True, help="e.g. 2x2 3x3")
    s.add_argument("--alphabets", nargs="+", required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", required=True, help="CSV path, or - for stdout")
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("pad", help="square a bordered reduction instance")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--map", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--map-out", help="also write the padded role map")
    s.set_defaults(func=cmd_pad)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
