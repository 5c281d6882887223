"""Infinite streams, printed to a chosen depth.

    python3 demos/streams.py
"""

from colf import load, print_proof, print_term
from colf.programs import path

# Each definition turns into a relation; the clause for `up` calls itself
# on the successor, so the stream never ends.  Only what is demanded runs.
up = load(path("up"))
for depth in (2, 5, 12):
    print(f"up z, depth {depth:>2}: {print_term(up.run(depth=depth).term)}")

# repeat omega: every element is infinite too, so element i gets i fewer
# layers than the head of the stream.
omega = load(path("repeat_omega"))
print("\nrepeat omega, depth 5:")
print(" ", print_term(omega.run(depth=5).term))

# Proof objects are built alongside the output.
result = up.run(depth=4, proof=True)
print("\nproof of up z at depth 4:")
print(" ", print_proof(result.proof))

for name, depth in (("even", 20), ("fib", 30), ("integrate", 30)):
    program = load(path(name))
    print(f"\n{name}, depth {depth}:")
    print(" ", print_term(program.run(depth=depth).term))
