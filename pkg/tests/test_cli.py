from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from tricolor.cli import CSV_HEADER, run


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_info(capsys):
    code, out, _ = _run(capsys, "info", "--family", "tri-666", "--d", "3")
    assert code == 0
    assert json.loads(out) == {"family": "tri-666", "n": 7, "k": 1, "d": 3, "chi": 1, "plaquette_sizes": {"4": 3}}
    code, out, _ = _run(capsys, "info", "--family", "hex-torus", "--a", "3", "--b", "3")
    info = json.loads(out)
    assert (info["n"], info["k"], info["d"], info["chi"]) == (18, 4, 4, 0)


def test_distance_reports_witness(capsys):
    code, out, _ = _run(capsys, "distance", "--family", "tri-488", "--d", "5")
    data = json.loads(out)
    assert code == 0 and data["d"] == 5
    assert len(data["witness"].split()) == 5
    code, out, _ = _run(capsys, "distance", "--family", "tri-488", "--d", "5", "--max-weight", "3")
    assert json.loads(out)["d"] is None


def test_build_validate_round_trip(capsys, tmp_path):
    path = tmp_path / "lat.json"
    assert run(["build", "--family", "tri-488", "--d", "5", "--out", str(path)]) == 0
    code, out, _ = _run(capsys, "validate", str(path))
    report = json.loads(out)
    assert code == 0 and report["ok"] is True
    again = tmp_path / "again.json"
    assert run(["build", "--family", "tri-488", "--d", "5", "--out", str(again)]) == 0
    assert path.read_bytes() == again.read_bytes()


def test_validate_reads_stdin(tmp_path):
    built = subprocess.run(
        [sys.executable, "-m", "tricolor.cli", "build", "--family", "hex-torus", "--a", "3", "--b", "3"],
        capture_output=True,
        text=True,
        check=True,
    )
    checked = subprocess.run(
        [sys.executable, "-m", "tricolor.cli", "validate"], input=built.stdout, capture_output=True, text=True
    )
    assert checked.returncode == 0
    assert json.loads(checked.stdout)["ok"] is True


def test_verify_gates(capsys):
    code, out, _ = _run(capsys, "verify-gates", "--family", "tri-666", "--d", "3")
    reports = {r["gate"]: r for r in json.loads(out)}
    assert code == 0
    assert reports["H"]["logical_action"] == "H"
    assert reports["K"]["logical_action"] == "Kdag"
    assert reports["CNOT"]["logical_action"] == "CNOT"
    code, out, _ = _run(capsys, "verify-gates", "--family", "hex-torus", "--a", "3", "--b", "3")
    reports = {r["gate"]: r for r in json.loads(out)}
    assert reports["K"]["preserves_code"] is False
    assert len(reports["K"]["failing_generators"]) == 9


def test_simulate_csv_is_deterministic(capsys):
    argv = ["simulate", "--family", "tri-666", "--d", "3", "--p", "0.01", "--p", "0.05", "--trials", "5000", "--seed", "4"]
    code, first, _ = _run(capsys, *argv)
    assert code == 0
    _, second, _ = _run(capsys, *argv, "--threads", "3")
    assert first == second
    rows = list(csv.reader(io.StringIO(first)))
    assert tuple(rows[0]) == CSV_HEADER
    assert [r[2] for r in rows[1:]] == ["0.01", "0.05"]
    assert all(r[3] == "5000" and r[6] == "4" for r in rows[1:])


@pytest.mark.parametrize(
    "argv",
    [
        ["info", "--family", "tri-666", "--d", "4"],
        ["info", "--family", "hex-torus", "--a", "4", "--b", "3"],
        ["info", "--family", "tri-666"],
        ["info"],
        ["simulate", "--family", "tri-666", "--d", "3", "--p", "0.1"],
        ["simulate", "--family", "tri-666", "--d", "3", "--seed", "1"],
        ["simulate", "--family", "tri-666", "--d", "3", "--seed", "1", "--p", "1.5"],
        ["distance", "--family", "tri-666", "--d", "3", "--max-weight", "0"],
        ["info", "--family", "klein"],
        ["nonsense"],
    ],
)
def test_invalid_input_exits_2(capsys, argv):
    assert run(argv) == 2


def test_bad_lattice_file_exits_2(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run(["validate", str(path)]) == 2
    assert run(["validate", str(tmp_path / "missing.json")]) == 2


def test_budget_exceeded_exits_3(capsys, monkeypatch):
    monkeypatch.setenv("TRICOLOR_BUDGET", "1000")
    code, _, err = _run(capsys, "distance", "--family", "hex-torus", "--a", "6", "--b", "6")
    assert code == 3
    assert "budget" in err


def test_render_with_overlay(capsys, tmp_path):
    ops = tmp_path / "ops.txt"
    ops.write_text("# logical X\n+X1 X2 X3 X4 X5 X6 X7\n+Z1 Z2\n")
    code, out, _ = _run(capsys, "render", "--family", "tri-666", "--d", "3", str(ops))
    assert code == 0 and out.startswith("<?xml")
    ops.write_text("+X9\n")
    assert run(["render", "--family", "tri-666", "--d", "3", str(ops)]) == 2
