"""``colfc``: check and run coinductive logic programs.

Exit codes: 0 success, 1 static error, 2 usage error, 3 stuck process.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .analysis import format_tree
from .compiler import emit_ir_text
from .errors import ColfError, StuckProcess
from .pipeline import compile_source
from .printer import print_proof, print_term
from .runtime import DEFAULT_DEPTH, DEFAULT_STEPS

EXIT_OK, EXIT_STATIC, EXIT_USAGE, EXIT_STUCK = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    path: str
    command: str
    depth: int = DEFAULT_DEPTH
    steps: int = DEFAULT_STEPS
    seed: int | None = None
    proof: bool = False
    emit_ir: bool = False
    dump_elab: bool = False
    dump_tree: str | None = None
    main: str = "main"


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser():
    parser = argparse.ArgumentParser(prog="colfc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run the static pipeline only")
    check.add_argument("path")
    check.add_argument("--dump-elab", action="store_true", help="print the elaborated signature")
    check.add_argument("--dump-tree", metavar="R", help="print the decision tree of relation R")
    check.add_argument("--emit-ir", action="store_true", help="print the process code")

    run = sub.add_parser("run", help="check, then run main and print its output")
    run.add_argument("path")
    run.add_argument("--depth", type=_positive, default=DEFAULT_DEPTH)
    run.add_argument("--steps", type=_positive, default=DEFAULT_STEPS)
    run.add_argument("--seed", type=int, default=None, help="randomize the scheduler")
    run.add_argument("--proof", action="store_true", help="also print the partial proof")
    run.add_argument("--emit-ir", action="store_true", help="print the process code first")
    run.add_argument("--main", default="main", metavar="R")
    return parser


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    return RunConfig(
        path=args.path,
        command=args.command,
        depth=getattr(args, "depth", DEFAULT_DEPTH),
        steps=getattr(args, "steps", DEFAULT_STEPS),
        seed=getattr(args, "seed", None),
        proof=getattr(args, "proof", False),
        emit_ir=args.emit_ir,
        dump_elab=getattr(args, "dump_elab", False),
        dump_tree=getattr(args, "dump_tree", None),
        main=getattr(args, "main", "main"),
    )


def main_entry(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        source = Path(cfg.path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"colfc: cannot read {cfg.path}: {exc}", file=stderr)
        return EXIT_USAGE

    try:
        program = compile_source(source)
        if cfg.dump_tree is not None and cfg.dump_tree not in program.trees:
            raise ColfError(f"no relation {cfg.dump_tree!r}")
        if cfg.command == "run":
            program.check_main(cfg.main)
    except ColfError as exc:
        print(exc.render(cfg.path), file=stderr)
        return EXIT_STATIC

    if cfg.dump_elab:
        stdout.write(str(program.elaborated))
    if cfg.dump_tree is not None:
        stdout.write(format_tree(program.trees[cfg.dump_tree]))
    if cfg.emit_ir:
        stdout.write(emit_ir_text(program.procs))
    if cfg.command == "check":
        return EXIT_OK

    try:
        result = program.run(cfg.main, cfg.depth, cfg.steps, cfg.seed, cfg.proof)
    except StuckProcess as exc:
        _print_result(exc.partial, cfg, stdout)
        print(f"{cfg.path}: runtime error: {exc}", file=stderr)
        return EXIT_STUCK
    _print_result(result, cfg, stdout)
    for w in result.warnings:
        print(f"{cfg.path}: warning: {w}", file=stderr)
    return EXIT_OK


def _print_result(result, cfg, stdout):
    if result is None:
        return
    stdout.write(print_term(result.term) + "\n")
    if cfg.proof:
        stdout.write("\n" + print_proof(result.proof) + "\n")


def main():
    logging.basicConfig(level=logging.ERROR, format="%(message)s")
    sys.exit(main_entry())


if __name__ == "__main__":
    main()
