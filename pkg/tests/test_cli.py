import csv
import json
import subprocess
import sys

import pytest

from vdcolor.cli import main
from vdcolor.graph import read_dimacs_file
from vdcolor.instances import forest_g2


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def test_gen_writes_dimacs(tmp_path, capsys):
    f = tmp_path / "g.col"
    code, _ = run_cli(capsys, "gen", "g2:2", "-o", f)
    assert code == 0
    assert read_dimacs_file(f) == forest_g2(2)


def test_solve_with_trajectory(tmp_path, capsys):
    f, traj, col = tmp_path / "p.col", tmp_path / "t.csv", tmp_path / "s.txt"
    main(["gen", "path:30", "-o", str(f)])
    code, out = run_cli(capsys, "solve", f, "-k", 2, "--seed", 4, "--budget", 100000,
                        "--trajectory", traj, "--coloring", col)
    res = json.loads(out)
    assert code == 0 and res["status"] == "feasible"
    rows = list(csv.DictReader(traj.open()))
    assert len(rows) == res["steps_taken"]
    assert len(col.read_text().splitlines()) == 30


def test_batch_csv_and_summary(tmp_path, capsys):
    out_csv, summary = tmp_path / "b.csv", tmp_path / "b.json"
    code, _ = run_cli(capsys, "batch", "g2:2", "-k", 2, "-t", 30, "--seed", 1, "-o", out_csv,
                      "--summary", summary, "--cycle-window", "auto")
    assert code == 0
    rows = list(csv.DictReader(out_csv.open()))
    assert len(rows) == 30 and rows[0]["trial_index"] == "0"
    s = json.loads(summary.read_text())
    assert s["trials"] == 30 and s["instance"] == "g2:2"
    assert s["success_rate"] + s["failure_rate"] == pytest.approx(1)


def test_scaling(tmp_path, capsys):
    out_csv = tmp_path / "s.csv"
    code, out = run_cli(capsys, "scaling", "--family", "path", "--sizes", "8,16,32", "-k", 2, "-t", 5,
                        "-o", out_csv)
    assert code == 0
    assert json.loads(out)["success_rate"] == 1.0
    assert len(list(csv.DictReader(out_csv.open()))) == 15


def test_trap(tmp_path, capsys):
    code, out = run_cli(capsys, "trap", "--family", "g3", "--size", 4, "-t", 20, "--budget", 5000,
                        "-o", tmp_path / "t.csv")
    res = json.loads(out)
    assert code == 0 and res["trials"] == 20 and res["window"] == 42


def test_dsatur_and_exact(tmp_path, capsys):
    f = tmp_path / "g1.col"
    main(["gen", "g1", "-o", str(f)])
    code, out = run_cli(capsys, "dsatur", f, "--enumerate")
    assert code == 0 and json.loads(out) == {"colours_used": 4, "min_colours": 4, "max_colours": 4}
    code, out = run_cli(capsys, "exact", f)
    assert code == 0 and json.loads(out) == {"chromatic": 3}


def test_exact_budget_error(tmp_path, capsys):
    f = tmp_path / "r.col"
    main(["gen", "rand:60:6:seed1", "-o", str(f)])
    assert main(["exact", str(f), "--budget", "5"]) == 2
    assert "exceeded" in capsys.readouterr().err


def test_bad_inputs_exit_nonzero(tmp_path, capsys):
    assert main(["gen", "tree:3", "-o", str(tmp_path / "x.col")]) == 2
    assert main(["dsatur", str(tmp_path / "missing.col")]) == 2
    bad = tmp_path / "bad.col"
    bad.write_text("p edge 3 5\ne 1 2\n")
    assert main(["exact", str(bad)]) == 2
    code, out = run_cli(capsys, "exact", bad, "--lenient")
    assert code == 0 and json.loads(out) == {"chromatic": 2}


def test_verify_subset(tmp_path, capsys):
    code, out = run_cli(capsys, "verify", "--only", 6, 7, "--outdir", tmp_path)
    assert code == 0
    assert "[PASS]  6" in out and "[PASS]  7" in out
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["passed"] and [c["number"] for c in summary["criteria"]] == [6, 7]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "vdcolor", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verify" in proc.stdout
