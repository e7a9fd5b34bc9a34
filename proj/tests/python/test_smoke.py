import csv
import json
import math
import os
import subprocess
from pathlib import Path

import pytest

import mixfront

CONFIGS = Path(os.environ.get("MIXFRONT_CONFIGS", Path(__file__).resolve().parents[2] / "configs"))
CLI = os.environ.get("MIXFRONT_CLI")


def small_config(**model):
    m = {
        "d1": 1.0, "d2": 1.0, "tau": 1.0, "mu": 1.0, "rho1": 1.0, "rho2": 1.0, "h0": 0.2,
        "coefficients": {"a": 0.3, "b": 1.0, "c": 1.0, "d": 1.0},
        "kernel": {"kind": "tent", "radius": 1.0},
    }
    m.update(model)
    return {"model": m, "numerics": {"N": 32, "horizon": 1.0}}


def test_kernel_roundtrip():
    k = mixfront.Kernel.tent(1.0)
    assert k(0.0) == pytest.approx(1.0)
    assert k(0.5) == pytest.approx(0.5)
    assert mixfront.Kernel.tent(1.0).validate()["ok"]
    assert json.loads(k.to_json())["kind"] == "tent"


def test_eigen_limits():
    k = mixfront.Kernel.tent(1.0)
    assert mixfront.lambda1_nonlocal(k, 1.0, 0.5, 0.01) == pytest.approx(0.5, abs=0.02)
    assert mixfront.lambda1_mixed(k, 1.0, 1.0, 1.0, math.pi) == pytest.approx(0.0, abs=1e-4)


def test_thresholds_and_predict():
    th = mixfront.thresholds(small_config())
    assert th["h_star"] == pytest.approx(math.pi, abs=0.01)
    assert th["l_star"] > 0
    assert mixfront.predict(small_config())["bistable"]


def test_simulate_series():
    res = mixfront.simulate(small_config())
    s = res["series"]
    assert s["t"][0] == 0.0
    assert len(s["t"]) == len(s["h"]) > 1
    assert all(b > a for a, b in zip(s["h"], s["h"][1:]))


def test_config_errors_name_the_field():
    with pytest.raises(mixfront.ConfigError, match="model.tau"):
        mixfront.thresholds(small_config(tau=0.0))


def test_run_command_in_process(tmp_path):
    code, log, err = mixfront.run_command("eigen", CONFIGS / "vanishing.json", out=tmp_path)
    assert code == 0, err
    assert "h* =" in log
    with open(tmp_path / "eigen_curves.csv") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["length", "lambda_nonlocal", "lambda_mixed"]
    code, _, err = mixfront.run_command("simulate", tmp_path / "missing.json")
    assert code == 1 and "config error" in err


@pytest.mark.skipif(not CLI, reason="CLI path not provided")
def test_cli_exit_codes(tmp_path):
    def cli(*args):
        return subprocess.run([CLI, *args], capture_output=True, text=True).returncode

    cfg = str(CONFIGS / "vanishing.json")
    assert cli("simulate", "--config", cfg, "--out", str(tmp_path), "--horizon", "0") == 0
    with open(tmp_path / "trajectory.csv") as f:
        rows = list(csv.reader(f))
    assert rows[0] == "t,g,h,gprime,hprime,max_u,max_v,vx_left,vx_right".split(",")
    assert len(rows) == 2
    assert cli("simulate", "--config", cfg, "--horizon", "-1") == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli("predict", "--config", str(bad)) == 1
    assert cli("bogus") != 0
