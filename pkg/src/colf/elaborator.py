"""Turn notational definitions into relations with a single defining clause.

``repeat : conat -> stream = [N] cons N (repeat N).`` becomes::

    repeat : conat -> stream -> cotype.
    repeat_def : repeat N R -> repeat N (cons N R).

Clauses mentioning defined constants in their arguments are rewritten the
same way, each defined subterm replaced by a fresh variable and a premise.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ElabError
from .syntax import (
    COTYPE,
    App,
    FamilyDecl,
    Lam,
    NotationalDef,
    SimpleType,
    Tag,
    TermConst,
    Var,
    is_variable_name,
    term_vars,
)


class FreshSupply:
    """Hands out variable names not already in ``taken``: R, R1, R2, ..."""

    def __init__(self, taken=()):
        self.taken = set(taken)

    def __call__(self, hint: str) -> str:
        base = (hint[:1] or "X").upper()
        if not base.isalpha():
            base = "X"
        name, n = base, 0
        while name in self.taken:
            n += 1
            name = f"{base}{n}"
        self.taken.add(name)
        return name


def flatten(term, fresh: FreshSupply, defined):
    """Pull every subterm headed by a defined constant out into a premise.

    ``defined`` is the set of defined constant names.  Returns the pure term
    and the generated premises, innermost first, left to right.
    """
    premises = []

    def go(t):
        if isinstance(t, Var):
            return t
        if isinstance(t, Lam):
            raise ElabError("nested abstraction in a first-order term")
        args = tuple(go(a) for a in t.args)
        if t.head in defined:
            out = Var(fresh(t.head))
            premises.append(App(t.head, args + (out,)))
            return out
        return App(t.head, args)

    return go(term), premises


@dataclass(frozen=True)
class ElaborationResult:
    family: FamilyDecl
    clause: TermConst


def elaborate_definition(d: NotationalDef, defined, taken_names=()) -> ElaborationResult:
    params = d.body.params if isinstance(d.body, Lam) else ()
    body = d.body.body if isinstance(d.body, Lam) else d.body

    # Lowercase binders are legal in definitions but would read back as
    # constants once they become clause variables.
    fresh = FreshSupply(set(term_vars(body)) | set(params))
    renaming = {}
    for p in params:
        renaming[p] = p if is_variable_name(p) else fresh(p)
    body = _rename(body, renaming)
    heads = [Var(renaming[p]) for p in params]

    pure, premises = flatten(body, fresh, defined)
    family = FamilyDecl(d.name, SimpleType(d.type.args + (d.type.target,), COTYPE), d.pos)
    name = d.name + "_def"
    if name in taken_names:
        raise ElabError(f"generated clause name {name!r} is already declared", d.pos)
    clause = TermConst(name, tuple(premises), App(d.name, tuple(heads) + (pure,)), d.pos)
    return ElaborationResult(family, clause)


def _rename(term, mapping):
    if isinstance(term, Var):
        return Var(mapping.get(term.name, term.name))
    return App(term.head, tuple(_rename(a, mapping) for a in term.args))


def elaborate_clause(c: TermConst, defined) -> TermConst:
    atoms = c.premises + (c.target,)
    if not any(_mentions(a, defined) for a in atoms):
        return c
    fresh = FreshSupply(v for a in atoms for v in term_vars(a))
    premises = []
    for p in c.premises:
        args = []
        for a in p.args:
            pure, extra = flatten(a, fresh, defined)
            premises.extend(extra)
            args.append(pure)
        premises.append(App(p.head, tuple(args)))
    args = []
    for a in c.target.args:
        pure, extra = flatten(a, fresh, defined)
        premises.extend(extra)
        args.append(pure)
    return replace(c, premises=tuple(premises), target=App(c.target.head, tuple(args)))


def _mentions(term, names):
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, App):
            if t.head in names:
                return True
            stack.extend(t.args)
    return False


def elaborate_all(sig):
    """Replace every definition by its relation and ``_def`` clause, in order."""
    if not sig.classified:
        raise ValueError("elaborate_all expects a classified signature")
    defined = {d.name for d in sig.decls if isinstance(d, NotationalDef)}
    if not defined:
        return sig
    names = {d.name for d in sig.named()}
    tags = dict(sig.tags)
    out = []
    for d in sig.decls:
        if isinstance(d, NotationalDef):
            _check_body(d, sig)
            result = elaborate_definition(d, defined, names)
            names.add(result.clause.name)
            out.extend([result.family, result.clause])
            tags[d.name] = Tag.RELATION
            tags[result.clause.name] = Tag.CLAUSE
        elif isinstance(d, TermConst) and tags[d.name] is Tag.CLAUSE:
            out.append(elaborate_clause(d, defined))
        else:
            out.append(d)
    return replace(sig, decls=tuple(out), tags=tags)


def _check_body(d: NotationalDef, sig):
    stack = [d.body.body if isinstance(d.body, Lam) else d.body]
    while stack:
        t = stack.pop()
        if isinstance(t, App):
            tag = sig.tags.get(t.head)
            if tag is Tag.RELATION:
                raise ElabError(
                    f"definition {d.name!r} mentions relation {t.head!r}; relations are not terms",
                    d.pos,
                )
            if tag not in (Tag.CONSTRUCTOR, Tag.DEFINITION) and t.head != d.name:
                raise ElabError(f"{t.head!r} cannot appear in the body of {d.name!r}", d.pos)
            stack.extend(t.args)
