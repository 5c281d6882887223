"""Terms, declarations, the signature parser and the data/relation classifier.

Concrete syntax (Twelf style)::

    conat : cotype.
    z : conat.
    s : conat -> conat.
    add : conat -> conat -> conat -> cotype.
    add_z : add z A A.
    add_s : add A B C -> add (s A) B (s C).
    repeat : conat -> stream = [N] cons N (repeat N).
    %mode add + + -.

``%`` starts a comment running to end of line, except for the ``%mode``
pragma.  Uppercase-initial identifiers in clauses are variables.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Iterator, Union

from .errors import ClassifyError, ParseError

COTYPE = "cotype"


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    head: str
    args: tuple = ()

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Lam:
    params: tuple
    body: "Term"

    def __str__(self):
        return format_term(self)


Term = Union[Var, App, Lam]


def is_variable_name(name: str) -> bool:
    return name[:1].isupper()


def term_vars(term: Term) -> Iterator[str]:
    """Yield variable occurrences left to right (with repetition)."""
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            yield t.name
        elif isinstance(t, App):
            stack.extend(reversed(t.args))
        else:
            bound = set(t.params)
            yield from (v for v in term_vars(t.body) if v not in bound)


def format_term(term: Term, nested: bool = False) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Lam):
        text = "[" + " ".join(term.params) + "] " + format_term(term.body)
        return f"({text})" if nested else text
    if not term.args:
        return term.head
    text = " ".join([term.head] + [format_term(a, True) for a in term.args])
    return f"({text})" if nested else text


# ---------------------------------------------------------- declarations


class Mode(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    def __str__(self):
        return self.value


class Tag(enum.Enum):
    DATA = "data"
    RELATION = "relation"
    CONSTRUCTOR = "constructor"
    CLAUSE = "clause"
    DEFINITION = "definition"


@dataclass(frozen=True)
class SimpleType:
    """Right-nested arrow over base type names; ``target`` may be COTYPE."""

    args: tuple
    target: str

    def __str__(self):
        return " -> ".join(list(self.args) + [self.target])


@dataclass(frozen=True)
class FamilyDecl:
    name: str
    kind: SimpleType
    pos: tuple | None = field(default=None, compare=False)

    @property
    def arity(self):
        return len(self.kind.args)

    def __str__(self):
        return f"{self.name} : {self.kind}."


@dataclass(frozen=True)
class TermConst:
    """``name : P1 -> ... -> Pk -> T``.  Either a constructor or a clause."""

    name: str
    premises: tuple
    target: App
    pos: tuple | None = field(default=None, compare=False)

    @property
    def arity(self):
        return len(self.premises)

    def __str__(self):
        parts = [format_term(p, _needs_parens(p)) for p in self.premises]
        parts.append(format_term(self.target))
        return f"{self.name} : {' -> '.join(parts)}."


def _needs_parens(t):
    return isinstance(t, Lam)


@dataclass(frozen=True)
class NotationalDef:
    name: str
    type: SimpleType
    body: Term
    pos: tuple | None = field(default=None, compare=False)

    @property
    def arity(self):
        return len(self.type.args)

    def __str__(self):
        return f"{self.name} : {self.type} = {format_term(self.body)}."


@dataclass(frozen=True)
class ModePragma:
    relation: str
    modes: tuple
    pos: tuple | None = field(default=None, compare=False)

    def __str__(self):
        return f"%mode {self.relation} {' '.join(str(m) for m in self.modes)}."


Declaration = Union[FamilyDecl, TermConst, NotationalDef, ModePragma]


@dataclass(frozen=True)
class Clause:
    name: str
    premises: tuple
    conclusion: App
    pos: tuple | None = field(default=None, compare=False)

    @property
    def relation(self):
        return self.conclusion.head

    def variables(self) -> set:
        names = set()
        for atom in self.premises + (self.conclusion,):
            names.update(term_vars(atom))
        return names

    def __str__(self):
        parts = [format_term(p) for p in self.premises] + [format_term(self.conclusion)]
        return f"{self.name} : {' -> '.join(parts)}."


@dataclass(frozen=True, eq=True)
class Signature:
    decls: tuple = ()
    tags: dict | None = field(default=None, compare=False, hash=False)

    def __hash__(self):
        return hash(self.decls)

    @property
    def classified(self):
        return self.tags is not None

    def named(self):
        return [d for d in self.decls if not isinstance(d, ModePragma)]

    def lookup(self, name):
        for d in self.decls:
            if not isinstance(d, ModePragma) and d.name == name:
                return d
        return None

    def tag(self, name):
        if self.tags is None:
            raise ValueError("signature has not been classified")
        return self.tags[name]

    def names_with(self, tag):
        return [d.name for d in self.named() if self.tag(d.name) is tag]

    def relations(self):
        return self.names_with(Tag.RELATION)

    def data_types(self):
        return self.names_with(Tag.DATA)

    def clauses(self, relation=None):
        out = []
        for d in self.decls:
            if isinstance(d, TermConst) and self.tag(d.name) is Tag.CLAUSE:
                c = as_clause(d)
                if relation is None or c.relation == relation:
                    out.append(c)
        return out

    def constructors(self, data=None):
        return [
            d
            for d in self.decls
            if isinstance(d, TermConst)
            and self.tag(d.name) is Tag.CONSTRUCTOR
            and (data is None or d.target.head == data)
        ]

    def pragmas(self):
        return [d for d in self.decls if isinstance(d, ModePragma)]

    def __str__(self):
        return format_signature(self)


def as_clause(const: TermConst) -> Clause:
    return Clause(const.name, tuple(const.premises), const.target, const.pos)


def format_signature(sig: Signature) -> str:
    return "".join(str(d) + "\n" for d in sig.decls)


# ----------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\n)
  | (?P<pragma>%mode\b)
  | (?P<comment>%[^\n]*)
  | (?P<arrow>->)
  | (?P<punct>[:.=()\[\]+\-])
  | (?P<ident>[A-Za-z0-9_/]+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: tuple


def tokenize(source: str) -> list:
    tokens = []
    line, col, i = 1, 1, 0
    while i < len(source):
        m = _TOKEN_RE.match(source, i)
        if m is None:
            raise ParseError(f"unexpected character {source[i]!r}", (line, col))
        kind, text = m.lastgroup, m.group()
        if kind == "ws" and text == "\n":
            line, col = line + 1, 1
        else:
            if kind not in ("ws", "comment"):
                tokens.append(Token(kind if kind != "punct" else text, text, (line, col)))
            col += len(text)
        i = m.end()
    tokens.append(Token("eof", "", (line, col)))
    return tokens


# ---------------------------------------------------------------- parser
#
# Raw syntax first: ("id", name, pos) or ("app", head_raw, [arg_raw...], pos).
# Resolution against the declarations seen so far happens per declaration.


class _Parser:
    def __init__(self, source):
        self.toks = tokenize(source)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, what=None):
        t = self.tok
        if t.kind != kind:
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise ParseError(f"expected {what or repr(kind)}, found {found}", t.pos)
        return self.advance()

    # -- raw terms

    def atom(self):
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return ("id", t.text, t.pos)
        if t.kind == "(":
            self.advance()
            inner = self.app()
            self.expect(")", "')'")
            return inner
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"expected a term, found {found}", t.pos)

    def app(self):
        start = self.tok.pos
        head = self.atom()
        args = []
        while self.tok.kind in ("ident", "("):
            args.append(self.atom())
        if not args:
            return head
        if head[0] != "id":
            raise ParseError("application head must be an identifier", start)
        return ("app", head, args, start)

    def arrow_chain(self):
        parts = [self.app()]
        while self.tok.kind == "arrow":
            self.advance()
            parts.append(self.app())
        return parts

    def def_body(self):
        binders = []
        while self.tok.kind == "[":
            lb = self.advance()
            names = []
            while self.tok.kind == "ident":
                names.append(self.advance())
            if not names:
                raise ParseError("empty binder list", lb.pos)
            self.expect("]", "']'")
            binders.extend(names)
        body = self.app()
        return binders, body

    # -- declarations

    def declarations(self):
        while self.tok.kind != "eof":
            if self.tok.kind == "pragma":
                yield self.pragma()
            else:
                yield self.declaration()

    def pragma(self):
        start = self.advance().pos
        name = self.expect("ident", "relation name after %mode")
        modes = []
        while self.tok.kind in ("+", "-"):
            modes.append(Mode.PLUS if self.advance().kind == "+" else Mode.MINUS)
        self.expect(".", "'+', '-' or '.'")
        return ("mode", name, modes, start)

    def declaration(self):
        name = self.expect("ident", "a declaration")
        self.expect(":", "':'")
        parts = self.arrow_chain()
        body = None
        if self.tok.kind == "=":
            self.advance()
            body = self.def_body()
        self.expect(".", "'.' at end of declaration")
        return ("decl", name, parts, body)


def _raw_pos(raw):
    return raw[2] if raw[0] == "id" else raw[3]


class _Resolver:
    """Single forward pass: every constant must be declared before use."""

    def __init__(self):
        self.decls = []
        self.arity = {}
        self.families = {}

    def declare(self, decl, pos):
        if decl.name in self.arity:
            raise ParseError(f"duplicate declaration of {decl.name!r}", pos)
        self.arity[decl.name] = decl.arity
        if isinstance(decl, FamilyDecl):
            self.families[decl.name] = decl
        self.decls.append(decl)

    def check_name(self, tok):
        if tok.text in (COTYPE, "type"):
            raise ParseError(f"{tok.text!r} is a reserved word", tok.pos)
        if is_variable_name(tok.text):
            raise ParseError(
                f"constant {tok.text!r} must not begin with an uppercase letter", tok.pos
            )

    def term(self, raw, bound=None, extra=None):
        """Resolve a raw term.  ``bound`` restricts variables (definitions)."""
        if raw[0] == "id":
            head, args, pos = raw[1], [], raw[2]
        else:
            if raw[1][0] != "id":
                raise ParseError("application head must be an identifier", raw[3])
            head, args, pos = raw[1][1], raw[2], raw[3]
        if head in ("type", COTYPE):
            raise ParseError(f"{head!r} cannot appear inside a term", pos)
        if bound is not None and head in bound or bound is None and is_variable_name(head):
            if args:
                raise ParseError(f"variable {head!r} applied to arguments", pos)
            return Var(head)
        if is_variable_name(head):
            raise ParseError(f"unbound variable {head!r}", pos)
        arity = self.arity.get(head)
        if arity is None and extra is not None:
            arity = extra.get(head)
        if arity is None:
            raise ParseError(f"unknown constant {head!r}", pos)
        if len(args) != arity:
            raise ParseError(
                f"arity mismatch: {head!r} expects {arity} argument(s), got {len(args)}", pos
            )
        return App(head, tuple(self.term(a, bound, extra) for a in args))

    def base_name(self, raw, what, indexed_ok=False):
        if raw[0] != "id":
            raise ParseError(f"{what} must be a type name (dependent kinds are not supported)",
                             _raw_pos(raw))
        name, pos = raw[1], raw[2]
        if name == "type":
            raise ParseError(
                "inductive 'type' is not supported; only coinductive 'cotype' families exist",
                pos,
            )
        if name == COTYPE:
            raise ParseError(f"'cotype' cannot appear as {what}", pos)
        if name not in self.families:
            raise ParseError(f"unknown type family {name!r}", pos)
        if self.families[name].arity and not indexed_ok:
            raise ParseError(f"{name!r} is an indexed family, not a base type", pos)
        return name

    def declaration(self, raw):
        _, name_tok, parts, body = raw
        self.check_name(name_tok)
        name, pos = name_tok.text, name_tok.pos
        target = parts[-1]
        if target[0] == "id" and target[1] == "type":
            raise ParseError(
                "inductive 'type' is not supported; declare the family as 'cotype'", target[2]
            )
        if body is not None:
            args = tuple(self.base_name(p, "an argument type") for p in parts[:-1])
            result = self.base_name(target, "a result type")
            binders, raw_body = body
            if len(binders) != len(args):
                raise ParseError(
                    f"definition {name!r} has {len(args)} argument(s) but binds {len(binders)}",
                    pos,
                )
            names = [b.text for b in binders]
            if len(set(names)) != len(names):
                raise ParseError("repeated binder name", binders[0].pos)
            for b in binders:
                if b.text in self.arity or b.text == name:
                    raise ParseError(f"binder {b.text!r} shadows a constant", b.pos)
            term = self.term(raw_body, bound=set(names), extra={name: len(args)})
            if names:
                term = Lam(tuple(names), term)
            self.declare(NotationalDef(name, SimpleType(args, result), term, pos), pos)
        elif target[0] == "id" and target[1] == COTYPE:
            args = tuple(self.base_name(p, "a kind argument", True) for p in parts[:-1])
            self.declare(FamilyDecl(name, SimpleType(args, COTYPE), pos), pos)
        else:
            atoms = tuple(self.atom(p) for p in parts)
            self.declare(TermConst(name, atoms[:-1], atoms[-1], pos), pos)

    def atom(self, raw):
        """A component of a constant's type: a (possibly indexed) family."""
        head = raw if raw[0] == "id" else raw[1]
        if head[0] == "id" and head[1] == COTYPE:
            raise ParseError("'cotype' can only be the target of a kind", head[2])
        if head[0] == "id" and head[1] not in self.families and not is_variable_name(head[1]):
            if head[1] in self.arity:
                raise ParseError(f"{head[1]!r} is not a type family", head[2])
        term = self.term(raw)
        if isinstance(term, Var):
            raise ParseError("a type cannot be a variable", _raw_pos(raw))
        return term

    def pragma(self, raw):
        _, name_tok, modes, pos = raw
        if name_tok.text not in self.arity:
            raise ParseError(f"unknown relation {name_tok.text!r} in %mode", name_tok.pos)
        self.decls.append(ModePragma(name_tok.text, tuple(modes), pos))


def parse_signature(source: str) -> Signature:
    """Parse and resolve a whole signature (names, arities, declaration order)."""
    parser = _Parser(source)
    resolver = _Resolver()
    for raw in parser.declarations():
        if raw[0] == "mode":
            resolver.pragma(raw)
        else:
            resolver.declaration(raw)
    return Signature(tuple(resolver.decls))


def parse_term(source: str, signature: Signature | None = None) -> Term:
    """Parse a single term, e.g. printed runtime output ``(cons z (s z))``.

    Without a signature lowercase identifiers become applications of
    whatever arity they are written with.
    """
    parser = _Parser(source)
    raw = parser.app()
    parser.expect("eof", "end of term")
    if signature is None:
        return _loose_term(raw)
    resolver = _Resolver()
    for d in signature.named():
        resolver.arity[d.name] = d.arity
    return resolver.term(raw)


def _loose_term(raw):
    if raw[0] == "id":
        return Var(raw[1]) if is_variable_name(raw[1]) else App(raw[1])
    return App(raw[1][1], tuple(_loose_term(a) for a in raw[2]))


# -------------------------------------------------------- classification


def classify(sig: Signature) -> Signature:
    """Tag families DATA/RELATION and constants CONSTRUCTOR/CLAUSE/DEFINITION."""
    tags = {}
    for d in sig.named():
        if isinstance(d, FamilyDecl):
            for a in d.kind.args:
                if tags.get(a) is Tag.RELATION:
                    raise ClassifyError(
                        f"family {d.name!r} is indexed by relation {a!r}; indices must be data",
                        d.pos,
                    )
            tags[d.name] = Tag.RELATION if d.kind.args else Tag.DATA
        elif isinstance(d, NotationalDef):
            tags[d.name] = Tag.DEFINITION
        elif isinstance(d, TermConst):
            tags[d.name] = _classify_const(d, tags)
    for d in sig.pragmas():
        if tags[d.relation] is not Tag.RELATION and tags[d.relation] is not Tag.DEFINITION:
            raise ClassifyError(f"%mode names {d.relation!r}, which is not a relation", d.pos)
    return replace(sig, tags=tags)


def _classify_const(d: TermConst, tags) -> Tag:
    target = tags[d.target.head]
    premise_tags = [tags[p.head] for p in d.premises]
    if target is Tag.DATA:
        if any(t is Tag.RELATION for t in premise_tags):
            raise ClassifyError(
                f"{d.name!r} has relation premises but targets data type {d.target.head!r}",
                d.pos,
            )
        return Tag.CONSTRUCTOR
    if target is not Tag.RELATION:
        raise ClassifyError(f"{d.target.head!r} is not a type family", d.pos)
    for p, t in zip(d.premises, premise_tags):
        if t is not Tag.RELATION:
            raise ClassifyError(
                f"premise {format_term(p)!r} of clause {d.name!r} is not a relation atom", d.pos
            )
    for atom in d.premises + (d.target,):
        for arg in atom.args:
            _check_clause_term(arg, tags, d)
    return Tag.CLAUSE


def _check_clause_term(term, tags, d):
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, App):
            tag = tags[t.head]
            if tag not in (Tag.CONSTRUCTOR, Tag.DEFINITION):
                raise ClassifyError(
                    f"{t.head!r} ({tag.value}) used as a term in clause {d.name!r}", d.pos
                )
            stack.extend(t.args)
