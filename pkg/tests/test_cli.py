from __future__ import annotations

import argparse
import json
import math

import pytest

from qwsearch.cli import main, parse_grid, parse_real


@pytest.mark.parametrize(
    "text,value",
    [("1.5", 1.5), ("1/98", 1 / 98), ("pi", math.pi), ("-pi/2", -math.pi / 2), ("3*pi/4", 3 * math.pi / 4),
     ("2pi", 2 * math.pi), ("2.5e-3", 2.5e-3), (".5", 0.5)],
)
def test_parse_real(text, value):
    assert parse_real(text) == pytest.approx(value, rel=1e-15)


@pytest.mark.parametrize("text", ["", "-", "abc", "1/0", "pi/0", "1..2"])
def test_parse_real_rejects(text):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_real(text)


def test_parse_grid():
    assert parse_grid("0:1:3").tolist() == [0.0, 0.5, 1.0]
    for bad in ("0:1:0", "0:1:1", "1:0:5", "0:1", "0:1:x"):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_grid(bad)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def k4(tmp_path):
    path = tmp_path / "k4.txt"
    assert main(["generate", "complete", "--n", "4", "-o", str(path)]) == 0
    return path


@pytest.fixture
def cyclepair1(tmp_path):
    path = tmp_path / "cp1.txt"
    assert main(["generate", "cyclepair", "--k", "1", "-o", str(path)]) == 0
    return path


def test_generate_complete(capsys):
    code, out, _ = run(capsys, "generate", "complete", "--n", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "4" and len(lines) == 7


def test_generate_cyclepair(cyclepair1):
    lines = cyclepair1.read_text().splitlines()
    assert lines[0] == "343"
    assert len(lines) == 1 + 684


def test_generate_cycle_too_small(capsys):
    code, _, err = run(capsys, "generate", "cycle", "--n", "2")
    assert code == 2
    assert "n >= 3" in err


def test_generate_csv_and_json(capsys):
    code, out, _ = run(capsys, "generate", "cycle", "--n", "3", "--format", "csv")
    assert out == "u,v\n0,1\n0,2\n1,2\n"
    code, out, _ = run(capsys, "generate", "cycle", "--n", "3", "--format", "json")
    assert json.loads(out) == {"n": 3, "edges": [[0, 1], [0, 2], [1, 2]]}


def test_partition_k4(capsys, k4):
    code, out, _ = run(capsys, "partition", str(k4))
    assert code == 0
    assert json.loads(out)["cells"] == [[0], [1, 2, 3]]


def test_partition_cyclepair(capsys, cyclepair1):
    code, out, _ = run(capsys, "partition", str(cyclepair1), "--gamma", "1/2")
    doc = json.loads(out)
    assert doc["dtable"] == [[0, 18, 0], [1, 2, 18], [0, 1, 2]]
    assert doc["gamma"] == 0.5


def test_partition_disconnected(capsys, tmp_path):
    path = tmp_path / "disc.txt"
    path.write_text("4\n0 1\n2 3\n")
    code, _, err = run(capsys, "partition", str(path))
    assert code == 3
    assert "not connected" in err


def test_partition_bad_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3\n0 0\n")
    code, _, err = run(capsys, "partition", str(path))
    assert code == 3
    assert "line 2" in err
    code, _, _ = run(capsys, "partition", str(tmp_path / "missing.txt"))
    assert code == 3


def test_simulate_k4_grid(capsys, k4):
    code, out, _ = run(capsys, "simulate", str(k4), "--gamma", "1/2", "--grid", "0:2pi:9")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,probability"
    assert lines[1] == "0,0.25"
    assert len(lines) == 10


def test_simulate_methods_agree(capsys, k4):
    _, quot, _ = run(capsys, "simulate", str(k4), "--gamma", "1/3", "--grid", "0:5:6", "--format", "json")
    _, full, _ = run(capsys, "simulate", str(k4), "--gamma", "1/3", "--grid", "0:5:6", "--format", "json",
                     "--method", "full")
    for (t1, p1), (t2, p2) in zip(json.loads(quot)["curve"], json.loads(full)["curve"]):
        assert t1 == t2 and p1 == pytest.approx(p2, abs=1e-12)


def test_simulate_cyclepair_at_pi(capsys, cyclepair1):
    code, out, _ = run(capsys, "simulate", str(cyclepair1), "--gamma", "1/2", "--time", "pi", "--format", "json")
    assert code == 0
    assert json.loads(out)["curve"][0][1] == pytest.approx(324 / 343, abs=1e-12)


def test_simulate_zero_steps(capsys, k4):
    code, _, _ = run(capsys, "simulate", str(k4), "--gamma", "1/2", "--grid", "0:1:0")
    assert code == 2


def test_pst_complete_quotient(capsys, tmp_path):
    path = tmp_path / "k100.txt"
    main(["generate", "complete", "--n", "100", "-o", str(path)])
    code, out, _ = run(capsys, "pst", str(path), "1", "0", "--quotient", "--gamma", "1/98")
    assert code == 0
    assert json.loads(out)["tau"] == pytest.approx(98 * math.pi / (2 * math.sqrt(99)), rel=1e-12)


def test_pst_c4(capsys, tmp_path):
    path = tmp_path / "c4.txt"
    main(["generate", "cycle", "--n", "4", "-o", str(path)])
    code, out, _ = run(capsys, "pst", str(path), "0", "2", "--horizon", "6")
    doc = json.loads(out)
    assert doc["tau"] == pytest.approx(math.pi / 2, abs=1e-12)
    assert [t for t, _ in doc["times"]] == pytest.approx([math.pi / 2, 3 * math.pi / 2])


def test_pst_k3_absent(capsys, tmp_path):
    path = tmp_path / "k3.txt"
    main(["generate", "complete", "--n", "3", "-o", str(path)])
    code, out, err = run(capsys, "pst", str(path), "0", "1", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1] == "0,1,,,,parity-violation"
    assert "parity-violation" in err


def test_pst_matrix_document_and_at(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"dim": 2, "matrix": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}))
    code, out, _ = run(capsys, "pst", str(path), "0", "1", "--at", "pi/2")
    doc = json.loads(out)
    assert doc["phase"] == pytest.approx([0.0, 1.0], abs=1e-12)
    code, out, _ = run(capsys, "pst", str(path), "0", "1", "--at", "1")
    assert json.loads(out)["reason"] == "no-transfer"


def test_pst_tolerance_flag(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"dim": 2, "matrix": [[0, 1], [1, 0]]}))
    # |U(1.5)[1, 0]| = sin 1.5 ~ 0.9975 passes only with a loose tolerance
    _, out, _ = run(capsys, "pst", str(path), "0", "1", "--at", "1.5", "--tolerance", "0.01")
    assert json.loads(out)["tau"] == 1.5
    _, out, _ = run(capsys, "pst", str(path), "0", "1", "--at", "1.5")
    assert json.loads(out)["reason"] == "no-transfer"


def test_pst_partition_document(capsys, tmp_path, cyclepair1):
    part = tmp_path / "p.json"
    main(["partition", str(cyclepair1), "--gamma", "1/2", "-o", str(part)])
    code, out, _ = run(capsys, "pst", str(part), "2", "0", "--at", "pi")
    assert code == 0
    assert json.loads(out)["residuals"]["transfer"] <= 1e-9


def test_pst_bad_index(capsys, k4):
    code, _, _ = run(capsys, "pst", str(k4), "0", "9")
    assert code == 2


def test_verify_complete_1000(capsys):
    code, out, _ = run(capsys, "verify", "complete", "--n", "1000")
    assert code == 0
    assert json.loads(out)["probability"] == pytest.approx(0.999, abs=1e-10)


def test_verify_cyclepair(capsys):
    code, out, _ = run(capsys, "verify", "cyclepair", "--k", "1")
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    assert doc["probability"] == pytest.approx(324 / 343, abs=1e-12)


def test_verify_complete_2(capsys):
    code, _, err = run(capsys, "verify", "complete", "--n", "2")
    assert code == 2
    assert "N >= 3" in err


def test_verify_impossible_tolerance(capsys):
    code, _, err = run(capsys, "verify", "cyclepair", "--k", "1", "--tolerance", "1e-20")
    assert code == 4
    assert "verification failed" in err


def test_missing_subcommand(capsys):
    code, _, _ = run(capsys)
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "cyclepair", "--k", "1"],
        ["verify", "cyclepair", "--k", "1"],
        ["simulate", "{graph}", "--gamma", "1/2", "--grid", "0:10:21"],
    ],
)
def test_deterministic_output(tmp_path, cyclepair1, argv):
    argv = [str(cyclepair1) if a == "{graph}" else a for a in argv]
    first, second = tmp_path / "a.out", tmp_path / "b.out"
    assert main(argv + ["-o", str(first)]) == 0
    assert main(argv + ["-o", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
