"""What the checker accepts and what it rejects, with the reason."""

from colf import ColfError, compile_source
from colf.analysis import format_tree
from colf.programs import source

NAT = """
conat : cotype.
z : conat.
s : conat -> conat.
add : conat -> conat -> conat -> cotype.
add_z : add z A A.
add_s : add A B C -> add (s A) B (s C).
"""

program = compile_source(NAT)
print("decision tree for add:")
print(format_tree(program.trees["add"]))

cases = {
    # C would be produced by both premises.
    "two producers": "d : conat -> conat -> cotype.\nd_c : add A B C -> add A A C -> d A C.",
    # Y occurs in the output but nothing ever writes it.
    "no producer": "g : conat -> conat -> cotype.\ng_c : g X (s Y).",
    # One clause must read the second argument, the other need not.
    "action mismatch": ("o1 : conat. o2 : conat.\nh : conat -> conat -> conat -> cotype.\n"
                        "h_1 : h z Y o1.\nh_2 : h X (s Y) o2."),
    # Both clauses read (s _); they differ only in what they write.
    "overlap": "p : conat -> conat -> cotype.\np_a : p (s X) z.\np_b : p (s Y) (s z).",
}

for label, extra in cases.items():
    try:
        compile_source(NAT + extra)
        print(f"{label}: accepted")
    except ColfError as exc:
        print(f"{label}: {exc.render('<demo>')}")

# A mode pragma changes which arguments are read; add under (-,+,+)
# cannot work because add_z would need to read A twice.
try:
    compile_source(NAT + "%mode add - + +.")
except ColfError as exc:
    print("\nadd with mode - + +:", exc.render("<demo>"))

print("\nelaborated fib program:")
print(compile_source(source("fib")).elaborated)
