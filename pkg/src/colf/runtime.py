"""A demand-driven scheduler for compiled processes.

Processes communicate through write-once cells.  A process only runs while
the cell it is responsible for writing is demanded: the root cell carries
the depth budget, writing a cell passes ``budget - 1`` on to its argument
cells, and a process blocked on a read demands one layer of the cell it
reads.  Everything else stays dormant, which is what lets infinite streams
such as ``repeat omega`` quiesce.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, field

from .compiler import Alloc, Forward, Halt, Read, Spawn, TailCall, Write
from .errors import CycleDetected, DoubleWrite, StuckProcess
from .printer import UNRESOLVED, Node

log = logging.getLogger(__name__)

DEFAULT_DEPTH = 5
DEFAULT_STEPS = 1_000_000


class Cell:
    """EMPTY until written once; then WRITTEN (tag, args) or FWD (target)."""

    __slots__ = ("id", "tag", "args", "target", "readers", "demand", "dormant")

    def __init__(self, ident):
        self.id = ident
        self.tag = None
        self.args = ()
        self.target = None
        self.readers = []
        self.demand = 0
        self.dormant = []

    @property
    def state(self):
        if self.target is not None:
            return "FWD"
        return "EMPTY" if self.tag is None else "WRITTEN"

    @property
    def is_empty(self):
        return self.tag is None and self.target is None

    def __repr__(self):
        if self.target is not None:
            return f"<cell {self.id} -> {self.target.id}>"
        if self.tag is None:
            return f"<cell {self.id} empty demand={self.demand}>"
        return f"<cell {self.id} {self.tag}({', '.join(str(a.id) for a in self.args)})>"


def resolve(cell: Cell) -> Cell:
    """Follow forwarding links to a cell that is EMPTY or WRITTEN.

    Chains are compressed on the way, which is safe because a link never
    changes once made.
    """
    start, seen, hops = cell, None, 0
    while cell.target is not None:
        cell = cell.target
        hops += 1
        if hops >= 32:
            seen = seen if seen is not None else set()
            if cell in seen:
                raise CycleDetected(f"forwarding cycle through cell {cell.id}")
            seen.add(cell)
    c = start
    while c.target is not None and c.target is not cell:
        c.target, c = cell, c.target
    return cell


class ProofNode:
    __slots__ = ("rule", "children")

    def __init__(self):
        self.rule = None
        self.children = ()

    def commit(self, clause, premises):
        if self.rule is not None:
            raise AssertionError("proof node committed twice")
        self.rule = clause
        self.children = tuple(ProofNode() for _ in range(premises))


class Process:
    __slots__ = ("pid", "proc", "block", "pc", "env", "proof", "output", "pending")

    def __init__(self, pid, proc, env, proof):
        self.pid = pid
        self.proc = proc
        self.env = env
        self.proof = proof
        self.output = env[proc.output]
        self.block = None
        self.pc = 0
        self.pending = None

    def __repr__(self):
        return f"<process {self.pid} {self.proc.relation}>"


@dataclass(frozen=True)
class Budget:
    depth: int = DEFAULT_DEPTH
    steps: int = DEFAULT_STEPS

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        if self.steps < 1:
            raise ValueError("steps must be at least 1")


@dataclass
class RunResult:
    term: object
    proof: ProofNode | None
    steps: int
    exhausted: bool
    cells: int
    processes: int
    warnings: list = field(default_factory=list)


class Machine:
    """Single-threaded event loop over logically concurrent processes.

    ``seed=None`` gives a FIFO ready queue; any integer seed picks the next
    process uniformly at random, which is how schedule independence is
    tested.
    """

    def __init__(self, procs, seed=None, record_proofs=False):
        self.procs = procs
        self.record = record_proofs
        self.rng = None if seed is None else random.Random(seed)
        self.ready = deque() if seed is None else []
        self.next_cell = 0
        self.next_pid = 0
        self.steps = 0

    # -- cells

    def new_cell(self):
        self.next_cell += 1
        return Cell(self.next_cell)

    def demand(self, cell, budget):
        stack = [(cell, budget)]
        while stack:
            c, d = stack.pop()
            c = resolve(c)
            if d <= c.demand:
                continue
            was = c.demand
            c.demand = d
            if c.tag is not None:
                if d > 1:
                    stack.extend((a, d - 1) for a in c.args)
            elif was == 0 and c.dormant:
                waiting, c.dormant = c.dormant, []
                for p in waiting:
                    self.enqueue(p)

    def write(self, cell, tag, args):
        if not cell.is_empty:
            raise DoubleWrite(f"cell {cell.id} written twice ({tag})")
        cell.tag = tag
        cell.args = args
        if cell.demand > 1:
            for a in args:
                self.demand(a, cell.demand - 1)
        readers, cell.readers = cell.readers, []
        for p in readers:
            self.enqueue(p)

    def forward(self, dst, src):
        if not dst.is_empty:
            raise DoubleWrite(f"cell {dst.id} forwarded after being written")
        src = resolve(src)
        if src is dst:
            raise CycleDetected(f"cell {dst.id} forwarded to itself")
        dst.target = src
        readers, dst.readers = dst.readers, []
        if src.tag is not None:
            for p in readers:
                self.enqueue(p)
        else:
            src.readers.extend(readers)
        if dst.dormant:
            src.dormant.extend(dst.dormant)
            dst.dormant = []
        if dst.demand:
            self.demand(src, dst.demand)

    # -- processes

    def enqueue(self, p):
        self.ready.append(p)

    def start(self, relation, cells, proof):
        proc = self.procs[relation]
        env = {name: c for (name, _), c in zip(proc.params, cells)}
        self.next_pid += 1
        p = Process(self.next_pid, proc, env, proof)
        self.enter(p, proc.body)
        self.activate(p)
        return p

    def activate(self, p):
        out = resolve(p.output)
        if out.demand > 0:
            self.enqueue(p)
        else:
            out.dormant.append(p)

    def enter(self, p, block):
        p.block = block
        p.pc = 0
        # The proof node is filled when the leaf actually runs, not when a
        # dormant process is merely spawned.
        p.pending = block.tag if self.record else None

    def child_proof(self, p, k):
        return p.proof.children[k] if self.record else None

    def pick(self):
        if self.rng is None:
            return self.ready.popleft()
        i = self.rng.randrange(len(self.ready))
        ready = self.ready
        ready[i], ready[-1] = ready[-1], ready[i]
        return ready.pop()

    def step(self):
        """Execute one instruction of one ready process."""
        p = self.pick()
        self.steps += 1
        if p.pending is not None:
            p.proof.commit(p.pending.clause, p.pending.premises)
            p.pending = None
        ins = p.block.instrs[p.pc]
        env = p.env
        kind = type(ins)
        if kind is Read:
            c = resolve(env[ins.chan])
            if c.tag is None:
                self.demand(c, 1)
                c.readers.append(p)
                return
            branch = ins.branches.get(c.tag)
            if branch is None:
                raise StuckProcess(p.proc.relation, c.tag)
            for name, arg in zip(branch.params, c.args):
                env[name] = arg
            self.enter(p, branch.body)
        elif kind is Alloc:
            env[ins.chan] = self.new_cell()
            p.pc += 1
        elif kind is Write:
            self.write(env[ins.chan], ins.constructor, tuple(env[a] for a in ins.args))
            p.pc += 1
        elif kind is Spawn:
            self.start(ins.relation, [env[a] for a in ins.args], self.child_proof(p, ins.premise))
            p.pc += 1
        elif kind is TailCall:
            proc = self.procs[ins.relation]
            cells = [env[a] for a in ins.args]
            p.proof = self.child_proof(p, ins.premise)
            p.proc = proc
            p.env = {name: c for (name, _), c in zip(proc.params, cells)}
            p.output = p.env[proc.output]
            self.enter(p, proc.body)
            self.activate(p)
            return
        elif kind is Forward:
            self.forward(env[ins.dst], env[ins.src])
            return
        elif kind is Halt:
            return
        else:
            raise TypeError(f"unknown instruction {ins!r}")
        self.enqueue(p)

    def run(self, steps):
        while self.ready and self.steps < steps:
            self.step()
        return not self.ready


def snapshot(cell, depth):
    """The written structure below ``cell``, cut off ``depth`` layers down."""
    root = [None]
    # (cell, budget, parent list, index)
    stack = [(cell, depth, root, 0)]
    while stack:
        c, d, parent, i = stack.pop()
        if d <= 0:
            parent[i] = UNRESOLVED
            continue
        c = resolve(c)
        if c.tag is None:
            parent[i] = UNRESOLVED
            continue
        args = [None] * len(c.args)
        parent[i] = (c.tag, args)
        for k, a in enumerate(c.args):
            stack.append((a, d - 1, args, k))
    return _freeze(root[0])


def _freeze(raw):
    if raw is UNRESOLVED:
        return raw
    done = {}
    stack = [(raw, False)]
    while stack:
        item, expanded = stack.pop()
        if item is UNRESOLVED:
            continue
        tag, args = item
        if expanded:
            done[id(item)] = Node(tag, tuple(a if a is UNRESOLVED else done[id(a)] for a in args))
        else:
            stack.append((item, True))
            stack.extend((a, False) for a in args)
    return done[id(raw)]


def run_main(procs, main="main", budget=None, seed=None, record_proofs=False):
    """Run ``main`` with one output and no inputs until quiescence.

    Returns a RunResult whose ``term`` is the partial output.  A read that
    finds no matching branch raises StuckProcess carrying the partial result.
    """
    budget = budget or Budget()
    proc = procs.get(main)
    if proc is None:
        raise ValueError(f"no relation named {main!r}")
    if len(proc.params) != 1:
        raise ValueError(f"{main!r} must have exactly one (output) argument")
    m = Machine(procs, seed=seed, record_proofs=record_proofs)
    root = m.new_cell()
    root.demand = budget.depth
    proof = ProofNode() if record_proofs else None
    m.start(main, [root], proof)

    def result(exhausted):
        warnings = []
        if exhausted:
            warnings.append(f"step budget of {budget.steps} exhausted; output is partial")
            log.warning(warnings[-1])
        return RunResult(
            snapshot(root, budget.depth), proof, m.steps, exhausted,
            m.next_cell, m.next_pid, warnings,
        )

    try:
        quiet = m.run(budget.steps)
    except StuckProcess as exc:
        exc.partial = result(False)
        raise
    return result(not quiet)
