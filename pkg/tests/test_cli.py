import csv
import io

import pytest

from ridesched.cli import main
from ridesched.ingest import REPORT_HEADER

# the worked example laid out on a line: depot, P1, P2, D1, D2, depot 10 apart
WORKED = """1 2 480 2 30
0 0 0 0 0 0 1000
1 10 0 1 1 0 1000
2 20 0 1 1 40 1000
3 30 0 1 -1 0 1000
4 40 0 1 -1 0 1000
5 50 0 0 0 0 1000
"""


@pytest.fixture
def files(tmp_path):
    inst = tmp_path / "line.txt"
    inst.write_text(WORKED)
    corpus = tmp_path / "corpus.txt"
    # the second route carries P1 alone, straight to its dropoff
    corpus.write_text("line;0;0,1,2,3,4,5\nline;0;0,1,3,5\n")
    return inst, corpus, tmp_path


def _rows(path):
    return list(csv.DictReader(io.StringIO(path.read_text())))


@pytest.mark.parametrize("alg, check", [("alg1", lambda x: x == 2.0), ("eight-step", lambda x: x >= 2.0),
                                        ("oracle", lambda x: abs(x - 2.0) < 1e-9)])
def test_schedule_worked_example(files, alg, check):
    inst, corpus, tmp = files
    out = tmp / f"{alg}.csv"
    assert main(["schedule", "--instance", str(inst), "--corpus", str(corpus), "--alg", alg,
                 "--out", str(out), "--repeats", "1"]) == 0
    first, second = _rows(out)
    assert first["verdict"] == "feasible" and first["size"] == "6"
    assert check(float(first["excess"]))
    assert float(second["excess"]) == 0.0


def test_bench_toy_corpus(files):
    inst, corpus, tmp = files
    out = tmp / "report.csv"
    assert main(["bench", "--instance", str(inst), "--corpus", str(corpus), "--alg", "alg1",
                 "--out", str(out), "--repeats", "1", "--check"]) == 0
    text = out.read_text().splitlines()
    assert text[0] == ",".join(REPORT_HEADER)
    rows = {r["alg"]: r for r in _rows(out)}
    assert set(rows) == {"alg1", "oracle"}
    assert rows["alg1"]["n_deviating"] == "0" and rows["alg1"]["n_routes"] == "2"


def test_bench_window_infeasible_route(files, capsys):
    inst, _, tmp = files
    late = tmp / "late.txt"
    late.write_text(WORKED.replace("4 40 0 1 -1 0 1000", "4 40 0 1 -1 0 45"))
    corpus = tmp / "c.txt"
    corpus.write_text("late;0;0,1,2,3,4,5\n")
    out = tmp / "r.csv"
    assert main(["bench", "--instance", str(late), "--corpus", str(corpus), "--alg", "alg1",
                 "--out", str(out), "--repeats", "1", "--check"]) == 0
    rows = {r["alg"]: r for r in _rows(out)}
    assert rows["alg1"]["n_infeasible"] == rows["oracle"]["n_infeasible"] == "1"
    err = capsys.readouterr().err
    assert "alg1: incorrect=0 unsound=0" in err


def test_gen_is_repeatable(files):
    inst, _, tmp = files
    a, b = tmp / "a.txt", tmp / "b.txt"
    for out in (a, b):
        assert main(["gen", "--instance", str(inst), "--seed", "1", "--count", "50",
                     "--size-max", "6", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 50


def test_gen_unreachable_size_range(files, capsys):
    inst, _, tmp = files
    code = main(["gen", "--instance", str(inst), "--size-min", "20", "--size-max", "30",
                 "--out", str(tmp / "x.txt")])
    assert code == 2
    assert "fits" in capsys.readouterr().err


def test_io_errors(files, tmp_path):
    inst, corpus, _ = files
    bad = tmp_path / "bad.txt"
    bad.write_text("line;0;0,1,x\n")
    assert main(["schedule", "--instance", str(inst), "--corpus", str(bad)]) == 2
    assert main(["schedule", "--instance", str(tmp_path / "missing.txt"), "--corpus", str(corpus)]) == 2
    assert main(["schedule", "--instance", str(inst)]) == 2
    assert main(["bench", "--instance", str(inst), "--corpus", str(corpus), "--alg", "parragh"]) == 2


def test_check_failure_exits_one(files, monkeypatch):
    import ridesched.cli as cli
    from ridesched.bench import CheckResult

    inst, corpus, tmp = files
    monkeypatch.setattr(cli, "acceptance_checks", lambda report, alg: [CheckResult("x", False, "")])
    assert main(["bench", "--instance", str(inst), "--corpus", str(corpus), "--alg", "alg1",
                 "--out", str(tmp / "r.csv"), "--repeats", "1", "--check"]) == 1
