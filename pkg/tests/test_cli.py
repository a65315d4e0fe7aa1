import json
import subprocess
import sys

import pytest

from rwrs_lab.cli import run
from rwrs_lab.export import read_csv


@pytest.fixture
def out(tmp_path):
    return tmp_path / "out"


def test_verify_quick(out, capsys):
    assert run(["verify", "--quick", "--seed", "42", "--out-dir", str(out)]) == 0
    doc = json.loads((out / "verification.json").read_text())
    assert doc["overall"] is True
    assert all("seeds" in c and "sample_sizes" in c for c in doc["checks"])
    assert "overall: PASS" in capsys.readouterr().out


def test_simulate_rwrs_is_byte_identical(tmp_path):
    args = ["simulate-rwrs", "--model", "iid", "--n", "1024", "--replicates", "10", "--seed", "7"]
    assert run(args + ["--out-dir", str(tmp_path / "a")]) == 0
    assert run(args + ["--out-dir", str(tmp_path / "b"), "--threads", "3"]) == 0
    a = (tmp_path / "a" / "rwrs_batch.csv").read_bytes()
    assert a == (tmp_path / "b" / "rwrs_batch.csv").read_bytes()
    info, cols, rows = read_csv(tmp_path / "a" / "rwrs_batch.csv")
    assert info["kind"] == "rwrs-batch" and info["meta"]["seed"] == 7
    assert cols == ["replicate", "t", "raw", "normalized"]
    assert len(rows) == 10


def test_echoed_config_reruns(tmp_path):
    assert run(["simulate-rwrs", "--model", "ar1", "--rho", "0.3", "--n", "200", "--replicates", "5",
                "--times", "0.5,1", "--seed", "3", "--out-dir", str(tmp_path / "a")]) == 0
    info, _, _ = read_csv(tmp_path / "a" / "rwrs_batch.csv")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(info["meta"]["config"]))
    assert run(["simulate-rwrs", "--config", str(cfg), "--out-dir", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "rwrs_batch.csv").read_bytes() == (tmp_path / "b" / "rwrs_batch.csv").read_bytes()


def test_flags_override_config(tmp_path, out):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 50, "replicates": 4, "seed": 1}))
    assert run(["simulate-rwrs", "--config", str(cfg), "--replicates", "6", "--out-dir", str(out)]) == 0
    summary = json.loads((out / "rwrs_summary.json").read_text())
    assert summary["replicates"] == 6 and summary["n"] == 50 and summary["seed"] == 1


def test_dependence_polynomial_slow_decay(out, capsys):
    assert run(["dependence", "--family", "polynomial", "--a", "1.0", "--out-dir", str(out)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] is False
    assert json.loads((out / "dependence.json").read_text())["verdict"] is False


def test_dependence_from_model(out, capsys):
    assert run(["dependence", "--model", "ar1", "--rho", "0.5", "--lambda", "0.25", "--out-dir", str(out)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] is True
    assert doc["weighted_cov_sum"]["source"] == "analytic"


@pytest.mark.parametrize("argv", [
    ["simulate-rwrs", "--law", "-1:0.4,1:0.6"],
    ["simulate-rwrs", "--law", "garbage"],
    ["simulate-rwrs", "--times", "0.5,0.2"],
    ["simulate-limit", "--dt", "-1"],
    ["export", "--model", "iterated", "--kappa", "1.5"],
    ["dependence", "--model", "ar1", "--lambda", "0.7"],
    ["simulate-rwrs", "--model", "bogus"],
])
def test_config_errors_exit_2(argv, out):
    assert run(argv + ["--out-dir", str(out)]) == 2


def test_bad_config_document(tmp_path, out):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"nn": 3}))
    assert run(["simulate-rwrs", "--config", str(cfg), "--out-dir", str(out)]) == 2
    assert run(["simulate-rwrs", "--config", str(tmp_path / "missing.json"), "--out-dir", str(out)]) == 2


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("RWRS_LAB_OUTPUT", str(tmp_path / "env"))
    assert run(["export", "--what", "model", "--model", "doubling"]) == 0
    assert json.loads((tmp_path / "env" / "model.json").read_text())["kind"] == "doubling"


def test_local_time_outputs(out):
    assert run(["local-time", "--n", "500", "--seed", "3", "--out-dir", str(out)]) == 0
    _, cols, rows = read_csv(out / "local_time.csv")
    assert cols == ["site", "count"]
    assert sum(int(c) for _, c in rows) == 501
    _, _, arows = read_csv(out / "alpha.csv")
    assert sum(int(c) for _, c in arows) == 501 ** 2


def test_simulate_limit_outputs(out):
    assert run(["simulate-limit", "--dt", "1e-3", "--h", "0.03", "--replicates", "20", "--times", "0.5,1",
                "--field", "--format", "csv", "--out-dir", str(out)]) == 0
    _, cols, rows = read_csv(out / "delta_batch.csv")
    assert cols == ["replicate", "t", "delta"] and len(rows) == 40
    _, cols, rows = read_csv(out / "local_time_field.csv")
    assert cols == ["t", "x", "L"]
    mass = sum(float(L) for t, _, L in rows if float(t) == 1.0) * 0.03
    assert mass == pytest.approx(1.0, abs=1e-9)


def test_json_format(out):
    assert run(["simulate-rwrs", "--n", "64", "--replicates", "3", "--format", "json", "--out-dir", str(out)]) == 0
    doc = json.loads((out / "rwrs_batch.json").read_text())
    assert len(doc["raw"]) == 3 and doc["seed"] == 0


@pytest.mark.parametrize("what,fname", [("scenery", "scenery.csv"), ("covariance", "covariance.json")])
def test_export(out, what, fname):
    assert run(["export", "--what", what, "--model", "doubling", "--length", "20000", "--k-max", "5",
                "--left", "-10", "--right", "10", "--out-dir", str(out)]) == 0
    assert (out / fname).exists()
    if fname.endswith(".csv"):
        assert len(read_csv(out / fname)[2]) == 21


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "rwrs_lab", "dependence", "--family", "geometric",
                          "--rho", "0.5", "--out-dir", str(tmp_path)], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["verdict"] is True


def test_missing_subcommand():
    assert run([]) == 2
