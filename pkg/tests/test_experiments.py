import json
import os
import subprocess
import sys

import numpy as np
import pytest

from dyadiclab import experiments as ex
from dyadiclab import cli


EXPECTED_NAMES = {
    "nehari1d", "nehari2d", "para-bound", "commutator-decomp", "petermichl",
    "aak-extend", "carleson", "journe", "lower-bound",
}


def test_catalog():
    cat = ex.list_experiments()
    assert set(cat) == EXPECTED_NAMES
    assert len(cat) == 9
    assert all(isinstance(v, str) and v for v in cat.values())


def test_validate_config():
    with pytest.raises(ex.ConfigError, match="experiment"):
        ex.validate_config({})
    with pytest.raises(ex.ConfigError, match="catalog"):
        ex.validate_config({"experiment": "bogus"})
    with pytest.raises(ex.ConfigError, match="4\\*M"):
        ex.validate_config({"experiment": "nehari1d", "n": 3, "M": 8})
    cfg = ex.validate_config({"experiment": "nehari1d"})
    assert cfg["seed"] == 0


def test_trial_rng_streams_are_stable():
    a = ex.trial_rng(5, 7).standard_normal(4)
    b = ex.trial_rng(5, 7).standard_normal(4)
    c = ex.trial_rng(5, 8).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_run_writes_deterministic_outputs(tmp_path):
    cfg = {"experiment": "nehari1d", "M": 8, "trials": 4, "M_list": [4, 8],
           "trend_trials": 3, "seed": 7}
    m1 = ex.run(cfg, tmp_path / "a", threads=1)
    m2 = ex.run(cfg, tmp_path / "b", threads=2)
    m8 = ex.run(cfg, tmp_path / "c", threads=8)
    files = ["manifest.json", "rows.csv"]
    for f in files:
        b1 = (tmp_path / "a" / f).read_bytes()
        b2 = (tmp_path / "b" / f).read_bytes()
        b8 = (tmp_path / "c" / f).read_bytes()
        assert b1 == b2 == b8
    assert m1["summary"] == m2["summary"] == m8["summary"]
    # summary statistics recomputable from the per-trial rows
    import csv

    with open(tmp_path / "a" / "rows.csv") as fh:
        rows = [r for r in csv.DictReader(fh)]
    trial_rows = [r for r in rows if int(r["trial"]) >= 0]
    ratios = np.array([float(r["ratio"]) for r in trial_rows])
    assert abs(ratios.max() / ratios.min() - m1["summary"]["max_over_min"]) < 1e-12
    # run_info carries the wall clock and is excluded from the contract
    info = json.loads((tmp_path / "a" / "run_info.json").read_text())
    assert "elapsed_seconds" in info


def test_commutator_decomp_experiment(tmp_path):
    m = ex.run({"experiment": "commutator-decomp", "n": 5, "trials": 3, "seed": 1},
               tmp_path, threads=1)
    assert m["summary"]["max_residual"] <= 1e-12


def test_cli_list_and_run(tmp_path, capsys):
    assert cli.main(["list"]) == 0
    out = capsys.readouterr().out
    for name in EXPECTED_NAMES:
        assert name in out

    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"experiment": "commutator-decomp", "n": 4,
                                    "trials": 2, "seed": 3}))
    rc = cli.main(["run", "--config", str(cfg_path), "--out", str(tmp_path / "res")])
    assert rc == 0
    assert (tmp_path / "res" / "manifest.json").exists()
    assert (tmp_path / "res" / "rows.csv").exists()

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"experiment": "unknown-name"}))
    rc = cli.main(["run", "--config", str(bad), "--out", str(tmp_path / "res2")])
    assert rc == 1
    err = json.loads((tmp_path / "res2" / "error.json").read_text())
    assert err["error"] == "config_invalid"
    assert "catalog" in err["message"]

    rc = cli.main(["run", "--config", str(tmp_path / "missing.json"),
                   "--out", str(tmp_path / "res3")])
    assert rc == 1


def test_cli_seed_override(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"experiment": "commutator-decomp", "n": 4,
                                    "trials": 1, "seed": 3}))
    rc = cli.main(["run", "--config", str(cfg_path), "--out", str(tmp_path / "r1"),
                   "--seed", "99"])
    assert rc == 0
    man = json.loads((tmp_path / "r1" / "manifest.json").read_text())
    assert man["config"]["seed"] == 99


def test_env_var_output_dir(tmp_path, monkeypatch):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"experiment": "commutator-decomp", "n": 4,
                                    "trials": 1, "seed": 0}))
    monkeypatch.setenv("DYADICLAB_OUT", str(tmp_path / "envout"))
    monkeypatch.chdir(tmp_path)
    assert cli.main(["run", "--config", str(cfg_path)]) == 0
    assert (tmp_path / "envout" / "manifest.json").exists()


def test_para_bound_csv_shape(tmp_path):
    m = ex.run({"experiment": "para-bound", "n_list": [4, 5], "trials": 2, "seed": 0},
               tmp_path, threads=1)
    import csv

    with open(tmp_path / "rows.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4  # one row per (n, trial)
    assert {(r["n"], r["trial"]) for r in rows} == {("4", "0"), ("4", "1"), ("5", "0"), ("5", "1")}
    assert "log_max_ratio_slope_vs_n" in m["summary"]
