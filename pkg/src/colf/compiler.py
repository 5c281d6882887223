"""Compile decision trees into process code over channel variables.

Each relation becomes one process definition.  Its body reads input
channels along the decision tree and, at a leaf, allocates channels for the
premises' outputs, writes the output one constructor layer per cell, then
spawns the premises (the last one is tail-called).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .analysis import Leaf, ReadNode, pattern_at
from .syntax import Mode, Var


@dataclass(frozen=True)
class ProofTag:
    clause: str
    premises: int


@dataclass(frozen=True)
class Block:
    instrs: tuple
    tag: ProofTag | None = None


@dataclass(frozen=True)
class Branch:
    params: tuple
    body: Block


@dataclass(frozen=True)
class Read:
    chan: str
    branches: dict = field(hash=False)


@dataclass(frozen=True)
class Write:
    chan: str
    constructor: str
    args: tuple = ()


@dataclass(frozen=True)
class Forward:
    dst: str
    src: str


@dataclass(frozen=True)
class Alloc:
    chan: str


@dataclass(frozen=True)
class Spawn:
    relation: str
    args: tuple
    premise: int


@dataclass(frozen=True)
class TailCall:
    relation: str
    args: tuple
    premise: int


@dataclass(frozen=True)
class Halt:
    pass


TERMINAL = (Read, Forward, TailCall, Halt)


@dataclass(frozen=True)
class ProcessDef:
    relation: str
    params: tuple  # (channel name, Mode) pairs
    body: Block

    @property
    def output(self):
        return next(n for n, m in self.params if m is Mode.MINUS)


def param_names(spec):
    inputs = spec.inputs
    names = ["X", "Y"] if len(inputs) <= 2 else [f"X{i + 1}" for i in range(len(inputs))]
    it = iter(names)
    return tuple((next(it), m) if m is Mode.PLUS else ("Z", m) for m in spec.modes)


class _Scope:
    def __init__(self, names=()):
        self.names = set(names)

    def copy(self):
        return _Scope(self.names)

    def fresh(self, hint):
        name, n = hint, 0
        while name in self.names:
            n += 1
            name = f"{hint}{n}"
        self.names.add(name)
        return name

    def fresh_cell(self):
        n = 1
        while f"c{n}" in self.names:
            n += 1
        self.names.add(f"c{n}")
        return f"c{n}"


def compile_relation(relation, tree, modes) -> ProcessDef:
    spec = modes[relation]
    params = param_names(spec)
    scope = _Scope(n for n, _ in params)
    chans = {(i,): params[i][0] for i in spec.inputs}
    out = params[spec.output][0]
    if tree is None:
        body = Block((Halt(),))
    else:
        body = _compile_node(tree, chans, scope, out, modes)
    return ProcessDef(relation, params, body)


def _compile_node(tree, chans, scope, out, modes):
    if isinstance(tree, Leaf):
        return _compile_leaf(tree.clause, chans, scope.copy(), out, modes)
    clauses = [leaf.clause for leaf in _leaves(tree)]
    branches = {}
    for con, (arity, sub) in tree.branches.items():
        inner = scope.copy()
        sub_clauses = [leaf.clause for leaf in _leaves(sub)] or clauses
        names = []
        for k in range(arity):
            path = tree.path + (k,)
            hint = "V"
            for c in sub_clauses:
                p = pattern_at(c, path)
                if isinstance(p, Var):
                    hint = p.name
                    break
            names.append(inner.fresh(hint))
        sub_chans = dict(chans)
        sub_chans.update({tree.path + (k,): n for k, n in enumerate(names)})
        branches[con] = Branch(tuple(names), _compile_node(sub, sub_chans, inner, out, modes))
    return Block((Read(chans[tree.path], branches),))


def _leaves(tree):
    if isinstance(tree, Leaf):
        return [tree]
    return [leaf for _, sub in tree.branches.values() for leaf in _leaves(sub)]


def _compile_leaf(clause, chans, scope, out, modes):
    spec = modes[clause.relation]
    env = {}
    for i in spec.inputs:
        _bind_inputs(clause.conclusion.args[i], (i,), chans, env)
    code = []
    output = clause.conclusion.args[spec.output]

    for prem in clause.premises:
        v = prem.args[modes[prem.head].output].name
        if isinstance(output, Var) and output.name == v:
            env[v] = out
        else:
            env[v] = scope.fresh(v)
            code.append(Alloc(env[v]))

    forward = None
    if isinstance(output, Var):
        if env[output.name] != out:
            forward = Forward(out, env[output.name])
    else:
        _write_pattern(out, output, env, scope, code)
    if forward is not None and not clause.premises:
        code.append(forward)
        return Block(tuple(code), ProofTag(clause.name, 0))

    last = len(clause.premises) - 1
    for k, prem in enumerate(clause.premises):
        pspec = modes[prem.head]
        args = []
        for i, a in enumerate(prem.args):
            if isinstance(a, Var) or pspec.modes[i] is Mode.MINUS:
                args.append(env[a.name])
            else:
                cell = scope.fresh_cell()
                code.append(Alloc(cell))
                _write_pattern(cell, a, env, scope, code)
                args.append(cell)
        # A forwarded output is terminal, so no premise may be tail-called.
        if k == last and forward is None:
            code.append(TailCall(prem.head, tuple(args), k))
        else:
            code.append(Spawn(prem.head, tuple(args), k))
    if forward is not None:
        code.append(forward)
    elif not clause.premises:
        code.append(Halt())
    return Block(tuple(code), ProofTag(clause.name, len(clause.premises)))


def _bind_inputs(pattern, path, chans, env):
    if isinstance(pattern, Var):
        env[pattern.name] = chans[path]
        return
    for k, a in enumerate(pattern.args):
        _bind_inputs(a, path + (k,), chans, env)


def _write_pattern(chan, pattern, env, scope, code):
    """Outermost constructor first; sub-patterns go into fresh cells."""
    args, pending = [], []
    for a in pattern.args:
        if isinstance(a, Var):
            args.append(env[a.name])
        else:
            cell = scope.fresh_cell()
            code.append(Alloc(cell))
            pending.append((cell, a))
            args.append(cell)
    code.append(Write(chan, pattern.head, tuple(args)))
    for cell, a in pending:
        _write_pattern(cell, a, env, scope, code)


def compile_program(sig, modes, trees) -> dict:
    return {rel: compile_relation(rel, trees[rel], modes) for rel in sig.relations()}


# ------------------------------------------------------------- text form

IR_HEADER = "# colf-ir v1"


def _con(name, args):
    return f"{name}({','.join(args)})" if args else name


def _format_block(block, indent):
    pad = "  " * indent
    lines = []
    for i, ins in enumerate(block.instrs):
        sep = ";" if i < len(block.instrs) - 1 else ""
        if isinstance(ins, Read):
            lines.append(f"{pad}read {ins.chan} {{")
            for j, (con, br) in enumerate(ins.branches.items()):
                bar = "| " if j else ""
                lines.append(f"{pad}  {bar}{_con(con, br.params)} =>")
                lines.extend(_format_block(br.body, indent + 2))
            lines.append(f"{pad}}}")
        elif isinstance(ins, Write):
            lines.append(f"{pad}write {ins.chan} {_con(ins.constructor, ins.args)}{sep}")
        elif isinstance(ins, Forward):
            lines.append(f"{pad}fwd {ins.dst} {ins.src}")
        elif isinstance(ins, Alloc):
            lines.append(f"{pad}alloc {ins.chan}{sep}")
        elif isinstance(ins, Spawn):
            lines.append(f"{pad}spawn {ins.relation}({', '.join(ins.args)}){sep}")
        elif isinstance(ins, TailCall):
            lines.append(f"{pad}tail {ins.relation}({', '.join(ins.args)})")
        else:
            lines.append(f"{pad}halt")
    return lines


def proof_tags(proc: ProcessDef):
    out = []
    stack = [proc.body]
    while stack:
        block = stack.pop()
        if block.tag is not None:
            out.append(block.tag)
        for ins in block.instrs:
            if isinstance(ins, Read):
                stack.extend(br.body for br in reversed(list(ins.branches.values())))
    return out


def format_process(proc: ProcessDef) -> str:
    params = ", ".join(f"{m}{n}" for n, m in proc.params)
    tags = ", ".join(t.clause for t in proof_tags(proc))
    lines = [f"# clauses: {tags}" if tags else "# clauses: (none)"]
    lines.append(f"proc {proc.relation}({params}):")
    lines.extend(_format_block(proc.body, 1))
    return "\n".join(lines) + "\n"


def emit_ir_text(procs) -> str:
    if not procs:
        return ""
    return IR_HEADER + "\n" + "".join(format_process(procs[r]) for r in sorted(procs))


# ------------------------------------------------------------- validator


def validate_process(proc: ProcessDef) -> list:
    """Structural problems with generated code; an empty list means well formed."""
    problems = []
    out = proc.output
    params = {n for n, _ in proc.params}

    def check(block, bound, writable, where):
        bound, writable = set(bound), set(writable)
        seen_output = False
        if not block.instrs:
            problems.append(f"{where}: empty block")
            return
        for i, ins in enumerate(block.instrs):
            last = i == len(block.instrs) - 1
            if isinstance(ins, TERMINAL) != last:
                problems.append(f"{where}: {type(ins).__name__} at position {i}")

            def use(*names):
                for n in names:
                    if n not in bound:
                        problems.append(f"{where}: {n} used before it is bound")

            if isinstance(ins, Alloc):
                if ins.chan in bound:
                    problems.append(f"{where}: {ins.chan} bound twice")
                bound.add(ins.chan)
                writable.add(ins.chan)
            elif isinstance(ins, Write):
                use(ins.chan, *ins.args)
                if ins.chan not in writable:
                    problems.append(f"{where}: write to {ins.chan}, which is not writable here")
                writable.discard(ins.chan)
                if ins.chan == out:
                    seen_output = True
            elif isinstance(ins, Forward):
                use(ins.src)
                if ins.dst != out or out not in writable:
                    problems.append(f"{where}: forward into {ins.dst}")
                seen_output = True
            elif isinstance(ins, (Spawn, TailCall)):
                use(*ins.args)
                if block.tag is None:
                    problems.append(f"{where}: call outside a clause leaf")
                elif not seen_output and _writes_output(block, out):
                    problems.append(f"{where}: {ins.relation} started before the output write")
            elif isinstance(ins, Read):
                use(ins.chan)
                for con, br in ins.branches.items():
                    dup = bound.intersection(br.params)
                    if dup or len(set(br.params)) != len(br.params):
                        problems.append(f"{where}/{con}: rebinding {sorted(dup)}")
                    check(br.body, bound | set(br.params), writable, f"{where}/{con}")

    check(proc.body, params, {out}, proc.relation)
    return problems


def _writes_output(block, out):
    """True when the block writes (not forwards) the output; forwards may trail spawns."""
    return any(isinstance(i, Write) and i.chan == out for i in block.instrs)
