import json
import subprocess
import sys

import pytest

from smtcount import bvformula as bv
from smtcount.cli import main


@pytest.fixture
def smt(tmp_path):
    def write(text, name="f.smt2"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


X3 = "(declare-fun x () (_ BitVec 8)) (assert (= x #x03))"
LT5 = "(declare-fun x () (_ BitVec 4)) (assert (bvult x #x5))"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def check_schema(doc):
    assert set(doc) == {"final_count", "t", "pivot", "successes", "iterations", "status"}
    assert doc["final_count"] is None or doc["final_count"].isdigit()
    assert all(isinstance(doc[k], int) for k in ("t", "pivot", "successes"))
    assert doc["status"] in ("ok", "failed", "timeout")
    assert len(doc["iterations"]) == doc["t"]
    for it in doc["iterations"]:
        assert set(it) == {"C", "num_cells", "leaf", "outcome"}
        assert all(isinstance(c, int) and c >= 0 for c in it["C"])
        assert it["num_cells"].isdigit() and isinstance(it["leaf"], int)
        assert it["outcome"] in ("exact", "estimate", "failed")


def test_count_exact_path(smt, capsys):
    code, out, err = run(["count", smt(X3), "--epsilon", "0.8", "--delta", "0.2", "--seed", "42", "--backend", "enum"], capsys)
    assert code == 0 and out.strip() == "1"
    assert "pivot 4, t 137" in err


def test_exact_subcommand(smt, capsys):
    code, out, _ = run(["exact", smt(LT5)], capsys)
    assert code == 0 and out.strip() == "5"
    code, out, _ = run(["exact", smt(LT5), "--json"], capsys)
    assert json.loads(out) == {"exact_count": "5"}


def test_count_json_is_byte_identical_across_processes(smt):
    path = smt("(declare-fun x () (_ BitVec 6)) (declare-fun y () (_ BitVec 6)) (assert (bvult x y))")
    cmd = [sys.executable, "-m", "smtcount", "count", path, "--seed", "7", "--delta", "0.375", "--json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b
    doc = json.loads(a)
    check_schema(doc)
    assert doc["status"] == "ok" and doc["t"] == 105


def test_json_schema_on_corpus(tmp_path, corpus, capsys):
    for name, f in corpus.items():
        path = tmp_path / f"{name}.smt2"
        path.write_text(bv.print_smt2(f))
        code, out, _ = run(["count", str(path), "--json", "--delta", "0.9"], capsys)
        doc = json.loads(out)
        check_schema(doc)
        assert code == (0 if doc["status"] == "ok" else 1), name


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "F", "--epsilon", "0"],
        ["count", "F", "--delta", "1"],
        ["count", "F", "--budget", "-3"],
        ["count", "F", "--seed", "-1"],
        ["count", "F", "--backend", "sat4j"],
        ["hash-stats", "--n", "2", "--k", "2", "--C", "a,b"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, smt, capsys):
    argv = [smt(X3) if a == "F" else a for a in argv]
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert "error" in capsys.readouterr().err


def test_parse_error_exit_2(smt, capsys):
    code, _, err = run(["count", smt("(declare-fun x () (_ BitVec 4)) (assert (bvsdiv x x))")], capsys)
    assert code == 2 and "bvsdiv" in err
    code, _, err = run(["count", "/nonexistent.smt2"], capsys)
    assert code == 2


def test_space_too_large_exit_2(smt, capsys):
    code, _, err = run(["exact", smt("(declare-fun x () (_ BitVec 32)) (assert true)")], capsys)
    assert code == 2 and "2**32" in err


def test_process_backend_without_command_exit_3(smt, capsys):
    code, _, err = run(["count", smt(X3), "--backend", "process"], capsys)
    assert code == 3 and "solver" in err


def test_broken_solver_exit_3(smt, capsys):
    code, _, _ = run(["count", smt(X3), "--backend", "process", "--solver-cmd", "/nonexistent/solver"], capsys)
    assert code == 3


def test_all_invocations_failed_exit_1(smt, capsys):
    # a lone 8-bit word with every value a model: the core loop hits the 2**8 cell guard
    path = smt("(declare-fun x () (_ BitVec 8)) (assert true)")
    code, out, _ = run(["count", path, "--delta", "0.9", "--seed", "2", "--json"], capsys)
    doc = json.loads(out)
    assert code == 1 and doc["status"] == "failed" and doc["final_count"] is None
    code, out, _ = run(["count", path, "--delta", "0.9", "--seed", "2"], capsys)
    assert code == 1 and out.strip() == "FAILED"


def test_count_with_process_backend(smt, capsys, solver_cmd):
    code, out, _ = run(["count", smt(LT5), "--delta", "0.9", "--backend", "process", "--solver-cmd", " ".join(solver_cmd)], capsys)
    assert code == 0 and out.strip() == "5"


def test_hash_stats(capsys):
    code, out, _ = run(["hash-stats", "--n", "2", "--k", "2", "--C", "1", "--trials", "20000", "--json"], capsys)
    rows = json.loads(out)
    assert code == 0 and [r["law"] for r in rows] == ["uniformity", "pairwise", "collision"]
    assert all(r["passed"] for r in rows)


def test_validate_on_directory(tmp_path, capsys):
    (tmp_path / "a.smt2").write_text(LT5)
    (tmp_path / "b.smt2").write_text(X3)
    code, out, _ = run(["validate", "--corpus", str(tmp_path), "--seeds", "2", "--json"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["within_fraction"] == 1.0
    assert [s["formula"] for s in doc["summaries"]] == ["a", "b"]
