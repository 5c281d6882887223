"""Unary add and mult, checked against Python's integers."""

from colf import compile_source
from colf.printer import Node
from colf.programs import source


def numeral(n):
    return "z" if n == 0 else f"(s {numeral(n - 1)})"


def decode(term):
    n = 0
    while isinstance(term, Node) and term.name == "s":
        term, n = term.args[0], n + 1
    return n if isinstance(term, Node) and term.name == "z" else None


base = source("mult").split("main")[0]

print("   " + " ".join(f"{n:>3}" for n in range(7)))
for m in range(7):
    row = []
    for n in range(7):
        text = base + f"main : conat -> cotype.\nmain_def : mult {numeral(m)} {numeral(n)} R -> main R.\n"
        got = decode(compile_source(text).run(depth=m * n + 2).term)
        assert got == m * n
        row.append(got)
    print(f"{m:>2} " + " ".join(f"{v:>3}" for v in row))
