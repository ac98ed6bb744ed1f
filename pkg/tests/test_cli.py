import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from glmpbb import load_instance, partition_terms, save_instance, solve, validate
from glmpbb.bb import SolverConfig
from glmpbb.cli import BENCH_COLUMNS, main
from glmpbb.generate import GenSpec, generate

from _util import instance_a, instance_b


@pytest.fixture
def files(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_instance(instance_a(), a)
    save_instance(instance_b(), b)
    return tmp_path, a, b


def test_solve_a(files, capsys):
    tmp, a, _ = files
    trace = tmp / "trace.csv"
    assert main(["solve", str(a), "--eps", "1e-4", "--trace", str(trace)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "EpsOptimal"
    assert out["h_value"] == pytest.approx(2.0, abs=1e-3)
    assert out["schema_version"] == 1
    with open(trace) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["k", "lb", "ub", "gap", "active_nodes", "node_diameter"]
    assert len(rows) == out["iterations"] + 2


def test_solve_b(files, capsys):
    _, _, b = files
    assert main(["solve", str(b), "--eps", "1e-4"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["h_value"] == pytest.approx(1 / 3, abs=1e-3)


def test_solve_limit_exit_code(tmp_path, capsys):
    path = tmp_path / "p3.json"
    save_instance(generate(GenSpec("P3", 8, 6, p=4, p_bar_target=3, seed=1)), path)
    assert main(["solve", str(path), "--eps", "1e-6", "--max-iters", "2"]) == 2
    assert json.loads(capsys.readouterr().out)["status"] == "IterLimit"


def test_missing_terms(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 1, "m": 1, "A": [[1.0]], "b": [1.0]}))
    assert main(["solve", str(bad)]) == 1
    assert "terms" in capsys.readouterr().err


def test_invalid_instance_lists_violations(tmp_path, capsys):
    path = tmp_path / "unb.json"
    path.write_text(json.dumps({"n": 1, "m": 1, "A": [[-1.0]], "b": [0.0],
                                "terms": [{"c": [1.0], "d": 1.0, "alpha": 1.0}]}))
    assert main(["solve", str(path)]) == 1
    err = capsys.readouterr().err
    assert "unbounded" in err and "  - " in err


def test_missing_file(capsys):
    assert main(["solve", "/nonexistent/x.json"]) == 1


def test_generate_round_trip(tmp_path):
    p1, p2 = tmp_path / "1.json", tmp_path / "2.json"
    args = ["generate", "--scheme", "p3", "--m", "5", "--n", "4", "--p", "3",
            "--pbar", "2", "--seed", "11"]
    assert main(args + ["--out", str(p1)]) == 0
    assert main(args + ["--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()
    inst = load_instance(p1)
    ref = generate(GenSpec("P3", 5, 4, p=3, p_bar_target=2, seed=11))
    for key in ("A", "b", "c", "d", "alpha"):
        assert getattr(inst, key).tobytes() == getattr(ref, key).tobytes()
    assert partition_terms(inst).p_bar == 2
    assert validate(inst).ok


def test_bench(tmp_path):
    summary, runs = tmp_path / "s.csv", tmp_path / "r.csv"
    assert main(["bench", "--scheme", "p1", "--m", "5", "--n", "6", "--repeats", "3",
                 "--eps", "1e-3", "--out", str(summary), "--runs-out", str(runs)]) == 0
    with open(summary) as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == BENCH_COLUMNS
    with open(runs) as fh:
        per_run = list(csv.DictReader(fh))
    assert len(per_run) == 3
    avg_iter = np.mean([float(r["iterations"]) for r in per_run])
    assert float(rows[1][6]) == pytest.approx(avg_iter)
    assert float(rows[1][8]) == pytest.approx(np.mean([float(r["opt_val"]) for r in per_run]))


def test_bench_single_repeat_equals_solve(tmp_path):
    summary = tmp_path / "s.csv"
    main(["bench", "--scheme", "p1", "--m", "5", "--n", "6", "--repeats", "1",
          "--seed", "4", "--eps", "1e-3", "--out", str(summary)])
    with open(summary) as fh:
        row = list(csv.reader(fh))[1]
    res = solve(generate(GenSpec("P1", 5, 6, seed=4)), SolverConfig(epsilon=1e-3))
    assert int(float(row[6])) == res.iterations
    assert float(row[8]) == res.h_value


def test_oracle_command(files, capsys):
    _, a, _ = files
    assert main(["oracle", str(a), "--resolution", "50"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["vertex_min_h"] == pytest.approx(2.0)
    assert out["grid_min_psi"] == pytest.approx(0.693147, abs=1e-5)


def test_module_entry_point(files):
    _, _, b = files
    proc = subprocess.run([sys.executable, "-m", "glmpbb", "solve", str(b), "--eps", "1e-3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "EpsOptimal"
