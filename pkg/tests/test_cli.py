import csv
import json
import subprocess
import sys

import pytest

from covertnet.cli import main


def _rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_optimize(tmp_path, capsys):
    assert main(["optimize", "--epsilon", "0.05", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "compare.csv")
    assert len(rows) == 1 and rows[0]["feasible"] == "true" and rows[0]["one_minus_eps"] == "0.95"
    assert "feasible=true" in capsys.readouterr().out
    manifest = json.loads((tmp_path / "optimize.manifest.json").read_text())
    assert manifest["parameters"]["epsilon"] == 0.05
    assert len(manifest["scenario"]["users"]["explicit"]) == 1000


def test_dep_curve_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["dep-curve", "--k", "60", "--p-a-mw", "100", "--trials", "2000", "--out", str(out)]) == 0
    assert len(_rows(a / "dep_curve.csv")) == 512
    assert (a / "dep_curve.csv").read_bytes() == (b / "dep_curve.csv").read_bytes()
    assert (a / "dep-curve.manifest.json").read_bytes() == (b / "dep-curve.manifest.json").read_bytes()


def test_min_dep_feasible_and_infeasible(tmp_path, capsys):
    assert main(["min-dep", "--p-a-mw", "50", "--epsilon", "0.03", "--out", str(tmp_path)]) == 0
    assert "K_min=" in capsys.readouterr().out
    assert main(["min-dep", "--p-a-mw", "200", "--epsilon", "0.005", "--out", str(tmp_path)]) == 2


def test_bad_input_exit_1(tmp_path, capsys):
    assert main(["min-dep", "--epsilon", "0.7", "--out", str(tmp_path)]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"alpha": 0}))
    assert main(["optimize", "--scenario", str(bad), "--out", str(tmp_path)]) == 1
    assert main(["optimize", "--scenario", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == 1
    assert "error:" in capsys.readouterr().err


def test_seed_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("COVERTNET_SEED", "9")
    assert main(["optimize", "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "optimize.manifest.json").read_text())["parameters"]["seed"] == 9
    monkeypatch.setenv("COVERTNET_SEED", "x")
    assert main(["optimize", "--out", str(tmp_path)]) == 1


def test_sweeps(tmp_path):
    assert main(["kmin-sweep", "--p-a-mw", "25", "50", "--out", str(tmp_path)]) == 0
    assert len(_rows(tmp_path / "kmin_sweep.csv")) == 20
    assert main(["sensitivity", "--param", "mu_d", "--out", str(tmp_path)]) == 0
    assert len(_rows(tmp_path / "sensitivity.csv")) == 50
    assert main(["compare-baseline", "--realizations", "5", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "compare.csv")
    assert {r["policy"] for r in rows} == {"proposed", "baseline"}


def test_validate_subset(tmp_path):
    assert main(["validate", "--criteria", "4", "5", "--out", str(tmp_path)]) == 0
    assert all(r["passed"] == "true" for r in _rows(tmp_path / "validation.csv"))


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "covertnet", "optimize", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "P_a*=" in proc.stdout
