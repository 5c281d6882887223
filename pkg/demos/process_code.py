"""The process code a program compiles to, and how a run unfolds."""

from colf import compile_source
from colf.programs import source
from colf.runtime import Budget, run_main

program = compile_source(source("fib"))
print(program.ir_text)

# Reads block until the producer writes, so the same answer comes out
# whatever order ready processes are picked in.
for seed in (None, 1, 2, 3):
    r = run_main(program.procs, budget=Budget(depth=15), seed=seed)
    print(f"seed={seed}: {r.steps} steps, {r.cells} cells, {r.processes} processes")
