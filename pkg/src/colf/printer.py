"""Render partial terms and partial proofs as ``(cons z (cons (s z) ...))``."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Node:
    name: str
    args: tuple = ()


class _Unresolved:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNRESOLVED"

    def __reduce__(self):
        return (_Unresolved, ())


UNRESOLVED = _Unresolved()


def _visible_args(args):
    # A run of trailing unresolved arguments prints as a single "...".
    k = len(args)
    while k and args[k - 1] is UNRESOLVED:
        k -= 1
    return args[:k] + ((UNRESOLVED,) if k < len(args) else ())


def print_term(term) -> str:
    out = []
    stack = [term]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif item is UNRESOLVED:
            out.append("...")
        elif not item.args:
            out.append(item.name)
        else:
            out.append("(" + item.name)
            stack.append(")")
            for a in reversed(_visible_args(item.args)):
                stack.append(a)
                stack.append(" ")
    return "".join(out)


def proof_to_term(proof):
    """Convert a ProofNode tree into a partial term over clause names."""
    if proof is None or proof.rule is None:
        return UNRESOLVED
    # Post-order without recursion: proof spines can be very long.
    done = {}
    stack = [(proof, False)]
    while stack:
        node, expanded = stack.pop()
        if node.rule is None:
            done[id(node)] = UNRESOLVED
        elif expanded:
            done[id(node)] = Node(node.rule, tuple(done[id(c)] for c in node.children))
        else:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children)
    return done[id(proof)]


def print_proof(proof) -> str:
    return print_term(proof_to_term(proof))


def term_depth(term) -> int:
    """Constructor layers on the longest resolved path."""
    best = 0
    stack = [(term, 1)]
    while stack:
        t, d = stack.pop()
        if t is UNRESOLVED:
            continue
        best = max(best, d)
        stack.extend((a, d + 1) for a in t.args)
    return best


def is_prefix(smaller, larger) -> bool:
    """Information order: ``larger`` resolves everything ``smaller`` does, identically."""
    stack = [(smaller, larger)]
    while stack:
        a, b = stack.pop()
        if a is UNRESOLVED:
            continue
        if b is UNRESOLVED or a.name != b.name or len(a.args) != len(b.args):
            return False
        stack.extend(zip(a.args, b.args))
    return True


def compatible(a, b) -> bool:
    """Agree wherever both are resolved."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is UNRESOLVED or y is UNRESOLVED:
            continue
        if x.name != y.name or len(x.args) != len(y.args):
            return False
        stack.extend(zip(x.args, y.args))
    return True


def from_term(term):
    """Ground syntax ``App`` tree to a fully resolved partial term."""
    return Node(term.head, tuple(from_term(a) for a in term.args))


def parse_partial(text: str):
    """Read printed output back, ``...`` included.

    A trailing ``...`` stands for every remaining argument, so the caller
    must supply arities to expand it; here it stays a single UNRESOLVED and
    ``expand_arity`` below pads it.
    """
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def atom():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "...":
            return UNRESOLVED
        if tok != "(":
            return Node(tok)
        name = tokens[pos]
        pos += 1
        args = []
        while tokens[pos] != ")":
            args.append(atom())
        pos += 1
        return Node(name, tuple(args))

    result = atom()
    if pos != len(tokens):
        raise ValueError(f"trailing input after term: {tokens[pos:]}")
    return result


def expand_arity(term, arity):
    """Pad collapsed trailing ``...`` using ``arity`` (name -> argument count)."""
    if term is UNRESOLVED:
        return term
    args = [expand_arity(a, arity) for a in term.args]
    want = arity.get(term.name, len(args))
    if len(args) < want and (not args or args[-1] is UNRESOLVED):
        args += [UNRESOLVED] * (want - len(args))
    return Node(term.name, tuple(args))
