"""Compiler and concurrent runtime for first-order coinductive logic programs.

Relations over possibly infinite terms run without backtracking as networks
of processes exchanging messages over write-once cells.
"""

from .errors import (
    ClassifyError,
    ColfError,
    ElabError,
    ModeDeclError,
    ModeError,
    ParseError,
    StuckProcess,
    UniquenessError,
)
from .pipeline import Program, compile_source, load, run_source
from .printer import print_proof, print_term
from .runtime import Budget, run_main
from .syntax import classify, parse_signature

__all__ = [
    "Budget",
    "ClassifyError",
    "ColfError",
    "ElabError",
    "ModeDeclError",
    "ModeError",
    "ParseError",
    "Program",
    "StuckProcess",
    "UniquenessError",
    "classify",
    "compile_source",
    "load",
    "parse_signature",
    "print_proof",
    "print_term",
    "run_main",
    "run_source",
]
