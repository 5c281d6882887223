import pytest

from colf import compile_source
from colf.compiler import (
    IR_HEADER,
    Alloc,
    Forward,
    Halt,
    Read,
    Spawn,
    TailCall,
    Write,
    emit_ir_text,
    proof_tags,
    validate_process,
)
from colf.programs import NAMES, source

from conftest import ARITH


def flat(text):
    return " ".join(text.split())


def proc(name, rel):
    return compile_source(source(name)).procs[rel]


def test_add_ir_text():
    text = emit_ir_text(compile_source(ARITH).procs)
    assert text.startswith(IR_HEADER + "\n")
    assert (
        "proc add(+X, +Y, -Z): read X { z => fwd Z Y | s(A) => alloc C; write Z s(C); "
        "tail add(A, Y, C) }" in flat(text)
    )


def test_tail_ir_text():
    text = emit_ir_text({"tail": proc("fib", "tail")})
    assert "proc tail(+X, -Z): read X { cons(N,F) => fwd Z F }" in flat(text)


def test_empty_program_emits_nothing():
    assert emit_ir_text(compile_source("").procs) == ""
    assert emit_ir_text(compile_source("conat : cotype. z : conat.").procs) == ""


def test_add_s_leaf():
    p = compile_source(ARITH).procs["add"]
    (read,) = p.body.instrs
    assert isinstance(read, Read) and read.chan == "X"
    branch = read.branches["s"]
    assert branch.params == ("A",)
    assert branch.body.instrs == (
        Alloc("C"),
        Write("Z", "s", ("C",)),
        TailCall("add", ("A", "Y", "C"), 0),
    )
    assert read.branches["z"].body.instrs == (Forward("Z", "Y"),)


def test_fib_leaf_scheme():
    p = proc("fib", "fib")
    instrs = p.body.instrs
    assert p.body.tag.clause == "fib_def"
    # Premise outputs first, then the output pattern one layer per cell,
    # then the premises, the last one tail-called.
    assert instrs[:3] == (Alloc("F"), Alloc("G"), Alloc("H"))
    writes = [i for i in instrs if isinstance(i, Write)]
    assert writes == [
        Write("Z", "cons", ("c1", "c2")),
        Write("c1", "z"),
        Write("c2", "cons", ("c3", "H")),
        Write("c3", "s", ("c4",)),
        Write("c4", "z"),
    ]
    assert instrs[-3:] == (
        Spawn("fib", ("F",), 0),
        Spawn("tail", ("F", "G"), 1),
        TailCall("add_stream", ("F", "G", "H"), 2),
    )


def test_main_output_is_passed_to_premise():
    p = proc("up_relation", "main")
    assert p.body.instrs == (Alloc("c1"), Write("c1", "z"), TailCall("up", ("c1", "Z"), 0))


def test_ground_premise_input_materialized_before_spawn():
    p = proc("integrate", "integrate")
    instrs = p.body.instrs
    assert instrs == (
        Alloc("B"),
        Spawn("integrate", ("X", "B"), 0),
        Alloc("c1"),
        Alloc("c2"),
        Write("c1", "cons", ("c2", "B")),
        Write("c2", "z"),
        TailCall("add_stream", ("c1", "X", "Z"), 1),
    )


def test_forwarded_input_with_premises_spawns_first():
    text = ARITH + "keep : conat -> conat -> cotype.\nkeep_c : add X X Y -> keep X X."
    p = compile_source(text).procs["keep"]
    assert p.body.instrs[-2:] == (Spawn("add", ("X", "X", "Y"), 0), Forward("Z", "X"))
    assert validate_process(p) == []


def test_zero_clause_relation_halts():
    p = compile_source("conat : cotype. r : conat -> cotype.").procs["r"]
    assert p.body.instrs == (Halt(),)


@pytest.mark.parametrize("name", NAMES)
def test_generated_code_is_well_formed(name):
    program = compile_source(source(name))
    for p in program.procs.values():
        assert validate_process(p) == []


@pytest.mark.parametrize("name", NAMES)
def test_write_before_spawn(name):
    program = compile_source(source(name))
    for p in program.procs.values():
        stack = [p.body]
        while stack:
            block = stack.pop()
            kinds = [type(i) for i in block.instrs]
            out_writes = [k for k, i in enumerate(block.instrs)
                          if isinstance(i, (Write, Forward)) and getattr(i, "chan", None) in (p.output, None)
                          and (not isinstance(i, Forward) or i.dst == p.output)]
            calls = [k for k, t in enumerate(kinds) if t in (Spawn, TailCall)]
            if out_writes and calls:
                assert out_writes[0] < calls[0]
            for i in block.instrs:
                if isinstance(i, Read):
                    stack.extend(b.body for b in i.branches.values())


@pytest.mark.parametrize("name", NAMES)
def test_every_clause_tagged_once(name):
    program = compile_source(source(name))
    for rel, p in program.procs.items():
        tags = [t.clause for t in proof_tags(p)]
        assert sorted(tags) == sorted(c.name for c in program.elaborated.clauses(rel))


def test_validator_catches_problems():
    from colf.compiler import Block, ProcessDef
    from colf.syntax import Mode

    bad = ProcessDef("r", (("Z", Mode.MINUS),), Block((Write("Z", "s", ("Q",)), Write("Z", "z"))))
    problems = validate_process(bad)
    assert any("Q used before" in p for p in problems)
    assert any("not writable" in p for p in problems)
    assert any("Write at position 1" in p for p in problems)


def test_emission_is_stable():
    program = compile_source(source("fib"))
    assert emit_ir_text(program.procs) == emit_ir_text(compile_source(source("fib")).procs)
    names = [line.split("(")[0][5:] for line in emit_ir_text(program.procs).splitlines()
             if line.startswith("proc ")]
    assert names == sorted(names)
