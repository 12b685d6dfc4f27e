import json
import os

import numpy as np
import pytest

from locscape import load_potential
from locscape.cli import main


def run_cli(*args):
    return main(list(args))


def test_missing_config_exits_2_without_outputs(tmp_path):
    out = tmp_path / "never"
    code = run_cli("landscape", "--config", str(tmp_path / "nope.json"), "--out", str(out))
    assert code == 2
    assert not out.exists()


def test_unknown_config_key_rejected(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n_cells": 10, "frobnicate": 1}))
    assert run_cli("landscape", "--config", str(cfg), "--out", str(tmp_path / "o")) == 2


def test_numerical_failure_exits_3(tmp_path):
    # all-zero potential under pure reflective walls is singular
    out = tmp_path / "o"
    code = run_cli("landscape", "--set", "dist_params=[0.0]", "--set", "K=0.0",
                   "--out", str(out), "--seed", "1")
    assert code == 3


def test_potential_roundtrip_and_manifest(tmp_path):
    out = tmp_path / "o"
    assert run_cli("potential", "--set", "n_cells=12", "--seed", "9",
                   "--out", str(out)) == 0
    fieldv = load_potential(out / "potential.txt")
    assert fieldv.grid.cells_per_side == 12
    assert fieldv.seed == 9
    manifest = json.loads((out / "run_manifest.json").read_text())
    assert manifest["command"] == "potential"
    assert manifest["seed"] == 9
    assert "config_sha256" in manifest and "versions" in manifest


def test_solve_writes_eigenpairs_and_landscape(tmp_path):
    cfg = tmp_path / "solve.json"
    cfg.write_text(json.dumps({
        "n_cells": 30, "dist": "uniform", "dist_params": [0.0, 1.0],
        "K": 8000.0, "bc": "neumann", "n_modes": 4,
    }))
    out = tmp_path / "o"
    assert run_cli("solve", "--config", str(cfg), "--seed", "1", "--out", str(out)) == 0
    rows = (out / "eigenpairs.csv").read_text().splitlines()
    assert rows[0].startswith("mode,eigenvalue,residual")
    assert len(rows) == 5
    w = [float(v) for v in (out / "landscape.txt").read_text().split()]
    assert len(w) == 241
    assert min(w) > 0


def test_valleys_outputs(tmp_path):
    out = tmp_path / "o"
    assert run_cli("valleys", "--set", "n_cells=20", "--set", "K=100000.0",
                   "--seed", "2", "--out", str(out)) == 0
    labels = [int(float(v)) for v in (out / "valley_labels.txt").read_text().split()]
    assert len(labels) == 161
    assert (out / "regions.csv").exists()
    assert (out / "zero_component_labels.txt").exists()


def test_ensemble_reruns_are_byte_identical(tmp_path):
    args = ("boundary-prob", "--set", "K=50000.0", "--set", "bc=\"robin\"",
            "--set", "h=0.01", "--seed", "4", "--trials", "20", "--threads", "1")
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_cli(*args, "--out", str(out1)) == 0
    assert run_cli(*args, "--out", str(out2)) == 0
    for name in ("trials.csv", "summary.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    summary = (out1 / "summary.csv").read_text().splitlines()
    assert summary[0].split(",")[:4] == ["spec_hash", "predicate", "p_hat", "ci_low"]
    analytic = float(summary[1].split(",")[-1])
    assert 0.2 < analytic < 0.3


def test_multimodal_summary_carries_series_value(tmp_path):
    out = tmp_path / "o"
    assert run_cli("multimodal-prob", "--set", "bc=\"dirichlet\"", "--set", "K=3000000.0",
                   "--seed", "3", "--trials", "10", "--out", str(out)) == 0
    last = (out / "summary.csv").read_text().splitlines()[1].split(",")
    assert abs(float(last[-1]) - 0.2785) < 1e-3


def test_fk_check_table(tmp_path):
    out = tmp_path / "o"
    assert run_cli("fk-check", "--set", "n_cells=30", "--set", "n_paths=400",
                   "--seed", "6", "--out", str(out)) == 0
    rows = (out / "fk_check.csv").read_text().splitlines()
    assert rows[0].split(",")[0] == "probe_x"
    assert len(rows) == 6


def test_bifurcation_and_scaling_commands(tmp_path):
    out = tmp_path / "bif"
    assert run_cli("bifurcation", "--set", "sweep=false", "--out", str(out)) == 0
    body = (out / "critical.csv").read_text().splitlines()
    label, K, lam = body[1].split(",")
    assert label == "analytic"
    assert 0 < float(lam) < float(K)
    out2 = tmp_path / "sc"
    assert run_cli("scaling", "--set", 'axes=["P1"]', "--set", "n_points=4",
                   "--seed", "5", "--out", str(out2)) == 0
    summary = (out2 / "regression_summary.csv").read_text().splitlines()
    axis, model, slope = summary[1].split(",")[:3]
    assert axis == "P1" and model == "power"
    assert abs(float(slope) + 2.0) < 0.15
    assert (out2 / "scaling_P1.csv").exists()


def test_env_defaults_and_flag_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv("LOCSCAPE_TRIALS", "7")
    monkeypatch.setenv("LOCSCAPE_OUT", str(tmp_path / "envout"))
    assert run_cli("boundary-prob", "--set", "n_cells=10", "--set", "K=100.0",
                   "--seed", "8", "--threads", "1") == 0
    rows = (tmp_path / "envout" / "trials.csv").read_text().splitlines()
    assert len(rows) == 8    # header + LOCSCAPE_TRIALS rows
    # explicit flag beats the environment
    assert run_cli("boundary-prob", "--set", "n_cells=10", "--set", "K=100.0",
                   "--seed", "8", "--threads", "1", "--trials", "3",
                   "--out", str(tmp_path / "flagout")) == 0
    rows = (tmp_path / "flagout" / "trials.csv").read_text().splitlines()
    assert len(rows) == 4
