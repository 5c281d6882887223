import pytest

from colf import compile_source
from colf.printer import Node
from colf.programs import NAMES, source

CONAT = """
conat : cotype.
z : conat.
s : conat -> conat.
"""

ARITH = CONAT + """
add : conat -> conat -> conat -> cotype.
add_z : add z A A.
add_s : add A B C -> add (s A) B (s C).

mult : conat -> conat -> conat -> cotype.
mult_z : mult z A z.
mult_s : mult A B C -> add B C D -> mult (s A) B D.
"""


def numeral(n):
    """Concrete syntax for n in unary."""
    text = "z"
    for _ in range(n):
        text = f"(s {text})"
    return text


def decode(term):
    """Unary partial term to int; None if any layer is unresolved."""
    n = 0
    while isinstance(term, Node) and term.name == "s":
        term, n = term.args[0], n + 1
    if isinstance(term, Node) and term.name == "z":
        return n
    return None


def stream_elements(term, k):
    out = []
    for _ in range(k):
        if not (isinstance(term, Node) and term.name == "cons"):
            break
        out.append(decode(term.args[0]))
        term = term.args[1]
    return out


@pytest.fixture(scope="session")
def programs():
    return {name: compile_source(source(name)) for name in NAMES}
