"""parse -> classify -> elaborate -> modes/uniqueness -> compile, in one call."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .analysis import check_signature
from .compiler import compile_program, emit_ir_text
from .elaborator import elaborate_all
from .errors import ColfError
from .runtime import Budget, run_main
from .syntax import Mode, Signature, classify, parse_signature


@dataclass(frozen=True)
class Program:
    parsed: Signature
    elaborated: Signature
    modes: dict
    trees: dict
    procs: dict

    @property
    def ir_text(self):
        return emit_ir_text(self.procs)

    def check_main(self, main="main"):
        spec = self.modes.get(main)
        if spec is None:
            raise ColfError(f"no relation {main!r} to run")
        if spec.modes != (Mode.MINUS,):
            raise ColfError(
                f"{main!r} must have a single output argument and no inputs, has mode {spec}"
            )

    def run(self, main="main", depth=5, steps=1_000_000, seed=None, proof=False):
        self.check_main(main)
        return run_main(self.procs, main, Budget(depth, steps), seed=seed, record_proofs=proof)


def compile_source(source: str) -> Program:
    parsed = parse_signature(source)
    elaborated = elaborate_all(classify(parsed))
    modes, trees = check_signature(elaborated)
    return Program(parsed, elaborated, modes, trees, compile_program(elaborated, modes, trees))


def load(path) -> Program:
    return compile_source(Path(path).read_text(encoding="utf-8"))


def run_source(source: str, depth=5, **kw):
    """Compile and run; returns the RunResult."""
    return compile_source(source).run(depth=depth, **kw)
