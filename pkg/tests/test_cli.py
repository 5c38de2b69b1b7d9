import csv
import io
import json
import subprocess
import sys

import pytest

from ellmzv.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_binom_det(capsys):
    code, out, _ = run(capsys, "binom-det", "2")
    assert code == 0
    assert json.loads(out) == {"n": 2, "det": "15", "expected": "15", "ok": True, "provenance": "theorem"}


def test_fay_shuffle(capsys):
    code, out, _ = run(capsys, "fay-shuffle", "3", "--basis")
    row = json.loads(out)
    assert code == 0 and row["dim"] == 2 and len(row["basis"]) == 2


def test_qexp(capsys):
    code, out, _ = run(capsys, "qexp", "0,3", "--order", "3")
    rows = json.loads(out)
    assert [r["term"] for r in rows] == ["-1 * T^2 * q^1", "-9/2 * T^2 * q^2", "-28/3 * T^2 * q^3"]


def test_qexp_constant_row(capsys):
    code, out, _ = run(capsys, "qexp", "2,2", "--order", "2")
    assert json.loads(out) == [{"index": "(2,2)", "coeff": "1/288", "T_exp": 4, "q_exp": 0,
                                "term": "1/288 * T^4 * q^0"}]


def test_dims(capsys):
    code, out, _ = run(capsys, "dims", "--max-weight", "9")
    rows = json.loads(out)
    assert code == 0
    assert (rows[9]["D1"], rows[9]["D2"]) == (0, 4)
    assert (rows[4]["D1"], rows[4]["D2"]) == (1, 0)
    assert all(r["provenance"] == "theorem" for r in rows)


def test_dims_length3_csv(capsys):
    code, out, _ = run(capsys, "dims", "--lengths", "3", "--max-weight", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert rows[2]["D3_reference"] == "2" and rows[2]["D3_provenance"] == "paper-table"


def test_tsv_and_determinism(capsys):
    _, a, _ = run(capsys, "hilbert", "--max", "12", "--format", "tsv")
    _, b, _ = run(capsys, "hilbert", "--max", "12", "--format", "tsv")
    assert a == b
    header = a.splitlines()[0].split("\t")
    assert header[:3] == ["N", "hilbert", "w_dim"]


def test_threads_do_not_change_output(capsys, monkeypatch):
    _, a, _ = run(capsys, "dims", "--max-weight", "7")
    monkeypatch.setenv("EMZV_THREADS", "3")
    _, b, _ = run(capsys, "dims", "--max-weight", "7")
    assert a == b


def test_usage_errors(capsys):
    assert run(capsys, "rank-c", "4")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "qexp", "a,b")[0] == 1
    assert run(capsys, "numeric-check", "--indices", "1,2")[0] == 1
    assert run(capsys, "binom-det", "0")[0] == 1


def test_verification_failure_exit(capsys, monkeypatch):
    import ellmzv.cli as cli
    monkeypatch.setattr(cli, "det_M", lambda n: 1)
    code, out, err = run(capsys, "binom-det", "3")
    assert code == 2 and json.loads(out)["ok"] is False and "failed" in err


def test_relations(capsys):
    code, out, _ = run(capsys, "verify-relations", "4")
    rows = json.loads(out)
    assert code == 0
    assert {r["provenance"] for r in rows} <= {"theorem", "report-only"}


def test_numeric_check(capsys):
    code, out, _ = run(capsys, "numeric-check", "--tau", "0.5+i", "--indices", "0,3;2,2", "--properties")
    rows = json.loads(out)
    assert code == 0 and all(r["ok"] for r in rows)
    assert {"abs_diff", "error_estimate"} <= set(rows[0])


def test_rank_c(capsys):
    code, out, _ = run(capsys, "rank-c", "11", "--format", "csv")
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == 0 and row["rank"] == "4"


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "ellmzv", "binom-det", "1"], capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["det"] == "3"
