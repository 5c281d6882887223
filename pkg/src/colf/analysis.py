"""Mode checking and uniqueness checking.

Together these guarantee that every variable of a clause is written by
exactly one process and that a relation never has to choose between two
actions, so execution needs no backtracking.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ModeDeclError, ModeError, UniquenessError
from .syntax import App, Clause, Mode, Var, format_term, term_vars


@dataclass(frozen=True)
class ModeSpec:
    relation: str
    modes: tuple

    @property
    def inputs(self):
        return [i for i, m in enumerate(self.modes) if m is Mode.PLUS]

    @property
    def output(self):
        return self.modes.index(Mode.MINUS)

    def __str__(self):
        return f"{self.relation}({', '.join(str(m) for m in self.modes)})"


def default_modes(arity):
    return tuple([Mode.PLUS] * (arity - 1) + [Mode.MINUS])


def resolve_modes(sig, pragmas=None):
    """Mode table for every relation of an elaborated signature.

    A ``%mode`` pragma wins; otherwise every argument is an input except the
    last.
    """
    if pragmas is None:
        pragmas = sig.pragmas()
    table = {}
    for rel in sig.relations():
        arity = sig.lookup(rel).arity
        table[rel] = ModeSpec(rel, default_modes(arity))
    seen = set()
    for p in pragmas:
        if p.relation not in table:
            raise ModeDeclError(f"%mode for {p.relation!r}, which is not a relation", p.pos)
        if p.relation in seen:
            raise ModeDeclError(f"second %mode for {p.relation!r}", p.pos)
        seen.add(p.relation)
        arity = sig.lookup(p.relation).arity
        if len(p.modes) != arity:
            raise ModeDeclError(
                f"%mode {p.relation} lists {len(p.modes)} mode(s) for {arity} argument(s)", p.pos
            )
        outputs = sum(m is Mode.MINUS for m in p.modes)
        if outputs != 1:
            raise ModeDeclError(
                f"%mode {p.relation} has {outputs} output(s); exactly one '-' is required", p.pos
            )
        table[p.relation] = ModeSpec(p.relation, tuple(p.modes))
    return table


# ------------------------------------------------------------ mode check


def mode_errors(clause: Clause, modes) -> list:
    """All single-producer violations, most specific first."""
    errors = []
    head = modes[clause.relation]

    def err(code, subject):
        errors.append(ModeError(code, subject, clause.name, clause.pos))

    producers = {}
    input_vars = []
    for i in head.inputs:
        input_vars.extend(term_vars(clause.conclusion.args[i]))
    for v in input_vars:
        producers.setdefault(v, []).append("input")
    for v in sorted({v for v in input_vars if input_vars.count(v) > 1}, key=input_vars.index):
        err("NonlinearInput", v)

    consumed = []
    for k, prem in enumerate(clause.premises):
        spec = modes[prem.head]
        out = prem.args[spec.output]
        if not isinstance(out, Var):
            err("NonVariablePremiseOutput", format_term(prem))
        else:
            producers.setdefault(out.name, []).append(k)
        for i in spec.inputs:
            consumed.extend(term_vars(prem.args[i]))
    consumed.extend(term_vars(clause.conclusion.args[head.output]))

    for v, ps in producers.items():
        if len(ps) > 1 and not all(p == "input" for p in ps):
            err("TwoProducers", v)
    for v in dict.fromkeys(consumed):
        if v not in producers:
            err("NoProducer", v)

    # Most specific diagnostic first.
    order = ["NonVariablePremiseOutput", "NonlinearInput", "TwoProducers", "NoProducer"]
    errors.sort(key=lambda e: order.index(e.code))
    return errors


def check_clause_modes(clause: Clause, modes) -> None:
    errors = mode_errors(clause, modes)
    if errors:
        raise errors[0]


# -------------------------------------------------------- decision trees


@dataclass(frozen=True)
class Leaf:
    clause: Clause

    @property
    def premises(self):
        return self.clause.premises


@dataclass(frozen=True)
class ReadNode:
    """Read the channel at ``path`` and branch on its constructor.

    ``branches`` maps constructor name to ``(arity, subtree)``, in the order
    the constructors first appear among the clauses.
    """

    path: tuple
    branches: dict = field(hash=False)


def format_path(path):
    return "arg" + ".".join(str(i + 1) for i in path)


def pattern_at(clause: Clause, path):
    t = clause.conclusion.args[path[0]]
    for i in path[1:]:
        t = t.args[i]
    return t


def build_decision_tree(relation, clauses, modes):
    """Fixed left-to-right, outside-in read order over the input arguments."""
    if not clauses:
        return None
    spec = modes[relation]
    return _build(list(clauses), [(i,) for i in spec.inputs], relation)


def _build(rows, paths, relation):
    while paths:
        path, rest = paths[0], paths[1:]
        pats = [pattern_at(c, path) for c in rows]
        if all(isinstance(p, Var) for p in pats):
            paths = rest
            continue
        if not all(isinstance(p, App) for p in pats):
            var_c = next(c for c, p in zip(rows, pats) if isinstance(p, Var))
            con_c = next(c for c, p in zip(rows, pats) if isinstance(p, App))
            raise UniquenessError(
                "ActionMismatch",
                f"{relation}: at {format_path(path)} clause {con_c.name} reads a constructor "
                f"but clause {var_c.name} does not",
                con_c.pos,
            )
        groups = {}
        for c, p in zip(rows, pats):
            groups.setdefault(p.head, (len(p.args), []))[1].append(c)
        branches = {}
        for con, (arity, group) in groups.items():
            sub = [path + (k,) for k in range(arity)]
            branches[con] = (arity, _build(group, sub + rest, relation))
        return ReadNode(path, branches)
    if len(rows) > 1:
        raise UniquenessError(
            "Overlap",
            f"{relation}: clauses {rows[0].name} and {rows[1].name} cannot be told apart "
            f"by reading their inputs",
            rows[1].pos,
        )
    return Leaf(rows[0])


def leaves(tree):
    if tree is None:
        return []
    if isinstance(tree, Leaf):
        return [tree]
    return [leaf for _, sub in tree.branches.values() for leaf in leaves(sub)]


def select(tree, inputs):
    """Walk the tree for ground inputs (dict arg index -> Term).

    Returns the Leaf reached, or None when a read finds no branch.
    """
    while isinstance(tree, ReadNode):
        t = inputs[tree.path[0]]
        for i in tree.path[1:]:
            t = t.args[i]
        branch = tree.branches.get(t.head)
        if branch is None:
            return None
        tree = branch[1]
    return tree


def format_tree(tree, indent=0):
    pad = "  " * indent
    if tree is None:
        return pad + "(no clauses)\n"
    if isinstance(tree, Leaf):
        c = tree.clause
        prem = ", ".join(format_term(p) for p in c.premises)
        args = " ".join(format_term(a, True) for a in c.conclusion.args)
        return f"{pad}leaf {c.name}: {c.relation} {args}" + (f" <- {prem}" if prem else "") + "\n"
    out = f"{pad}read {format_path(tree.path)}\n"
    for con, (arity, sub) in tree.branches.items():
        out += f"{pad}  {con}/{arity} =>\n" + format_tree(sub, indent + 2)
    return out


def check_signature(sig, pragmas=None):
    """Run mode and uniqueness checking on an elaborated signature.

    Returns ``(modes, trees)`` with one decision tree per relation.
    """
    modes = resolve_modes(sig, pragmas)
    for c in sig.clauses():
        check_clause_modes(c, modes)
    trees = {}
    for rel in sig.relations():
        trees[rel] = build_decision_tree(rel, sig.clauses(rel), modes)
    return modes, trees
