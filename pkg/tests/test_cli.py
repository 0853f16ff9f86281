import csv
import io
import json
import subprocess
import sys

import pytest

from qdeform import cli
from qdeform.qlattice import GeoLattice


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_qnum_values(capsys):
    code, out, _ = run(capsys, "qnum", "--q", "0.5", "--n-max", "3")
    assert code == 0
    r = rows(out)
    assert [row["n"] for row in r] == ["0", "1", "2", "3"]
    assert float(r[2]["asym"]) == 1.5
    assert float(r[2]["sym"]) == 2.5
    assert float(r[3]["sym"]) == pytest.approx(5.25)


def test_qnum_exact_strings(capsys):
    code, out, _ = run(capsys, "qnum", "--mode", "exact", "--n-max", "2")
    assert code == 0
    assert rows(out)[2]["sym"] == "q^-1 + q"


def test_header_lines(capsys):
    _, out, _ = run(capsys, "spectrum", "--q", "0.5", "--N", "4")
    lines = out.splitlines()
    assert lines[0].startswith("# config: ")
    cfg = json.loads(lines[0][len("# config: "):])
    assert cfg["q"] == 0.5 and cfg["N"] == 4
    assert lines[1].startswith("# units:")
    assert lines[2] == "n,eigenvalue"
    assert float(rows(out)[2]["eigenvalue"]) == pytest.approx(3.875)


def test_json_output(capsys):
    code, out, _ = run(capsys, "qnum", "--q", "0.5", "--n-max", "1", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["columns"] == ["n", "asym", "sym", "sym_factorial"]
    assert doc["rows"][1] == [1, 1.0, 1.0, 1.0]


@pytest.mark.parametrize("argv", [
    ("qnum", "--q", "0.5"),
    ("spectrum", "--q", "0.7", "--realization", "asym"),
    ("ground", "--q", "0.5", "--realization", "asym"),
    ("delta", "--q", "0.9", "--P-exponent", "2"),
    ("uncertainty", "--q", "0.9"),
    ("transform", "--q", "0.9"),
])
def test_byte_identical_reruns(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second and first


def test_separate_processes_identical():
    cmd = [sys.executable, "-m", "qdeform.cli", "delta", "--q", "0.9"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b


def test_bad_q_exit_code(capsys):
    code, out, err = run(capsys, "qnum", "--q", "1.2")
    assert code == 2
    assert "q must lie in (0,1)" in err
    assert out == ""


@pytest.mark.parametrize("cmd", ["ground", "transform", "delta", "uncertainty"])
def test_exact_mode_rejected_for_numeric_commands(capsys, cmd):
    code, _, err = run(capsys, cmd, "--mode", "exact")
    assert code == 2 and "error" in err


def test_io_error_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "qnum", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 3 and "error" in err


def test_out_file(capsys, tmp_path):
    path = tmp_path / "q.csv"
    code, out, _ = run(capsys, "qnum", "--q", "0.5", "--out", str(path))
    assert code == 0 and out == ""
    assert rows(path.read_text())[1]["sym"] == "1.0"


def test_ground_rows_ordered(capsys):
    _, out, _ = run(capsys, "ground", "--q", "0.5", "--realization", "asym", "--kmin", "-2", "--kmax", "3")
    r = rows(out)
    xs = [float(row["x"]) for row in r]
    assert xs == sorted(xs)
    assert all(abs(float(row["residual"])) <= 1e-10 for row in r if row["residual"] not in ("", "nan"))


def test_transform_from_input(capsys, tmp_path):
    lat = GeoLattice.spanning(0.9, 1e-6, 20.0)
    path = tmp_path / "phi.csv"
    path.write_text(lat.sample(lambda p: (p * p + 1) ** -4.0).to_csv())
    code, out, _ = run(capsys, "transform", "--q", "0.9", "--input", str(path))
    assert code == 0
    r = rows(out)
    assert r and set(r[0]) == {"x", "re", "im"}


def test_uncertainty_columns(capsys):
    _, out, _ = run(capsys, "uncertainty", "--q", "0.9", "--n-max", "3")
    r = rows(out)
    assert len(r) == 4
    assert all(row["holds"] == "1" for row in r)
    # ground state saturates the Robertson bound and sits below the literal product reading
    assert float(r[0]["product"]) == pytest.approx(float(r[0]["robertson_bound"]))
    assert r[0]["holds_literal_product"] == "0"


@pytest.mark.parametrize("mode", ["float", "exact"])
def test_verify_all_passes(capsys, mode):
    code, out, _ = run(capsys, "verify", "all", "--mode", mode)
    assert code == 0, out
    assert "FAIL" not in out


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "core", "--q", "0.7")
    assert code == 0
    assert "core" in out
