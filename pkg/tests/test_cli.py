import io
import re
import subprocess
import sys
from pathlib import Path

import pytest

from colf.cli import main_entry, parse_config
from colf.programs import path as program_path

DATA = Path(__file__).parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main_entry([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_run_up():
    code, out, err = run("run", program_path("up"), "--depth", 6)
    assert code == 0 and err == ""
    assert out == (
        "(cons z (cons (s z) (cons (s (s z)) (cons (s (s ...)) (cons (s ...) (cons ...))))))\n"
    )


def test_run_with_proof():
    code, out, _ = run("run", program_path("up"), "--depth", 2, "--proof")
    assert code == 0
    term, blank, proof, end = out.split("\n")
    assert (blank, end) == ("", "")
    assert proof == "(main_def (up_def (up_def ...)))"


def test_repeated_runs_are_byte_identical():
    outs = {run("run", program_path("fib"), "--depth", 25)[1] for _ in range(3)}
    outs |= {run("run", program_path("fib"), "--depth", 25, "--seed", k)[1] for k in range(3)}
    assert len(outs) == 1


def test_check_ok():
    assert run("check", program_path("fib")) == (0, "", "")


@pytest.mark.parametrize(
    "name, code",
    [("overlap", "Overlap"), ("two_producers", "TwoProducers"),
     ("no_producer", "NoProducer"), ("mismatch", "ActionMismatch")],
)
def test_static_errors(name, code):
    f = DATA / f"{name}.colf"
    status, out, err = run("check", f)
    assert status == 1 and out == ""
    assert re.match(rf"{re.escape(str(f))}:\d+:\d+: \w+ error: .*{code}", err)


def test_parse_error_position(tmp_path):
    f = tmp_path / "bad.colf"
    f.write_text("conat : cotype.\nz : nat.\n")
    status, _, err = run("run", f)
    assert status == 1
    assert err.startswith(f"{f}:2:5: ")


def test_stuck_exit_code():
    status, out, err = run("run", DATA / "stuck.colf", "--depth", 4)
    assert status == 3
    assert out.strip() != "" and "pred" in err


def test_step_budget_warning():
    status, out, err = run("run", DATA / "loop.colf", "--steps", 1000)
    assert status == 0
    assert out == "...\n" and "warning" in err


@pytest.mark.parametrize(
    "argv",
    [[], ["run"], ["frobnicate", "x"], ["run", "x.colf", "--depth", "0"],
     ["run", "x.colf", "--steps", "many"]],
)
def test_usage_errors(argv, capsys):
    assert run(*argv)[0] == 2


def test_unreadable_file(tmp_path):
    status, _, err = run("run", tmp_path / "missing.colf")
    assert status == 2 and "cannot read" in err


def test_main_must_have_output_mode():
    status, _, err = run("run", program_path("fib"), "--main", "add")
    assert status == 1 and "single output" in err
    status, _, err = run("run", program_path("fib"), "--main", "nothing")
    assert status == 1


def test_alternative_main(tmp_path):
    f = tmp_path / "two.colf"
    f.write_text(program_path("streams").read_text() + "\nother : stream = up (s z).\n")
    status, out, _ = run("run", f, "--main", "other", "--depth", 2)
    assert status == 0 and out == "(cons (s ...) (cons ...))\n"


def test_dump_elab():
    status, out, _ = run("check", program_path("repeat_omega"), "--dump-elab")
    assert status == 0
    assert "omega_def : omega O -> omega (s O)." in out
    assert "main_def : omega O -> repeat O R -> main R." in out


def test_dump_tree():
    status, out, _ = run("check", program_path("add"), "--dump-tree", "add")
    assert status == 0 and out.startswith("read arg1")
    assert run("check", program_path("add"), "--dump-tree", "nope")[0] == 1


def test_emit_ir():
    status, out, _ = run("check", program_path("fib"), "--emit-ir")
    assert status == 0
    assert out.startswith("# colf-ir v1\n") and "proc fib(-Z):" in out
    status, out, _ = run("run", program_path("up"), "--emit-ir", "--depth", 1)
    assert out.endswith("(cons ...)\n")


def test_config_defaults():
    cfg = parse_config(["run", "a.colf"])
    assert (cfg.depth, cfg.steps, cfg.seed, cfg.main) == (5, 1_000_000, None, "main")


def test_console_module():
    proc = subprocess.run(
        [sys.executable, "-m", "colf", "run", str(program_path("add"))],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "(s (s (s (s (s ...)))))\n"
