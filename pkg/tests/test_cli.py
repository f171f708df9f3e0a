import json
import subprocess
import sys
from pathlib import Path

import pytest

from constraintkernel.cli import check_document, main

ROOT = Path(__file__).resolve().parent.parent
COURSES = str(ROOT / "programs" / "courses.pl")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_prove_bi(capsys):
    code, out, _ = run(capsys, "prove", "--logic", "bi", "--depth", "4", "--show-constraints",
                       "p , q , r |- p * (q * r)")
    assert code == 0
    assert "{x1 = 1 & x2 = 0 & x3 = 0}" in out
    assert "interpretation: x1=1, x2=0, x3=0, x4=0, x5=1, x6=0" in out


def test_prove_ipl_unprovable(capsys):
    code, out, _ = run(capsys, "prove", "--logic", "ipl", "e+ |- p | ~p")
    assert code == 1 and "not provable" in out


@pytest.mark.parametrize("argv", [
    ["prove", "--logic", "bi", "p , q |- p * q"],
    ["prove", "--logic", "ipl", "--depth", "8", "|- ~~(p | ~p)"],
    ["prove", "--logic", "k", "x: box (p & q) |- x: box p"],
    ["prove", "--logic", "k", "--calc", "generated", "x: dia p , x: box q |- x: dia (p & q)"],
    ["prove", "--logic", "ipl", "--calc", "rjplus", "|- x: (p -> q) -> ~q -> ~p"],
])
def test_json_documents_round_trip(capsys, argv):
    code, out, err = run(capsys, *argv, "--emit", "json", "--check")
    assert code == 0
    assert "check: ok" in err
    doc = json.loads(out)
    assert {"version", "logic", "goal", "tree", "interpretation", "timing"} <= set(doc)
    assert check_document(doc)


def test_tampered_document_is_rejected(capsys):
    _, out, _ = run(capsys, "prove", "--logic", "bi", "--emit", "json", "p , q |- p * q")
    doc = json.loads(out)
    doc["tree"]["children"][0]["sequent"] = "q |- p"
    assert not check_document(doc)


def test_ljplus_emit(capsys):
    code, out, _ = run(capsys, "prove", "--logic", "ipl", "--emit", "ljplus", "p & q |- q & p")
    assert code == 0 and "[andL]" in out


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--logic", "ipl", "p | ~p")
    assert code == 1
    assert out.splitlines()[0] == "invalid" and out.splitlines()[1].startswith("countermodel: worlds=")
    code, out, _ = run(capsys, "oracle", "--logic", "k", "box (p -> q) -> box p -> box q")
    assert code == 0 and out.strip() == "valid"


def test_blp_all(capsys):
    code, out, err = run(capsys, "blp", "--program", COURSES, "--goal", "s(X,Y,Z)", "--all")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 27
    assert lines[0] == "X=al, Y=lo, Z=da"
    assert "candidate space: 729" in err


def test_blp_json_check(capsys):
    code, out, _ = run(capsys, "blp", "--program", COURSES, "--goal", "s(al,lo,ai)",
                       "--emit", "json", "--check")
    assert code == 0
    doc = json.loads(out.splitlines()[0])
    assert check_document(doc, Path(COURSES).read_text())


def test_blp_failure(capsys):
    assert run(capsys, "blp", "--program", COURSES, "--goal", "s(pr,gr,ca)")[0] == 1


def test_gen_calc(capsys):
    code, out, _ = run(capsys, "gen-calc", "--theory", "k", "--simplify", "--emit", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["rules"]) == 14 and doc["simplified"]
    code, out, _ = run(capsys, "gen-calc", "--calc", "rjplus", "--emit", "ljplus")
    assert code == 0 and "Rimp:" in out


def test_solve(capsys):
    assert run(capsys, "solve", "x1 + x2 = 1", "x1 = 1")[:2] == (0, "x1=1, x2=0\n")
    assert run(capsys, "solve", "x1 * x2 = 1", "x1 = 0")[:2] == (1, "unsat\n")
    code, out, _ = run(capsys, "solve", "--all", "x1 + x2 = 1")
    assert code == 0 and out.splitlines() == ["x1=0, x2=1", "x1=1, x2=0", "x1=1, x2=1"]


@pytest.mark.parametrize("argv", [
    ["prove", "--logic", "bi", "p |- (("],
    ["prove", "--calc", "nope", "x: p |- x: p"],
    ["blp", "--program", "/nonexistent.pl", "--goal", "p"],
    ["solve", "x1 = "],
    ["gen-calc", "--theory", "/nonexistent.thy"],
])
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as e:
        main(["prove", "--logic", "lambda", "p |- p"])
    assert e.value.code == 2


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "constraintkernel", "prove", "--logic", "ipl", "e+ |- p | ~p"]
    codes = {subprocess.run(cmd, capture_output=True).returncode for _ in range(2)}
    assert codes == {1}
