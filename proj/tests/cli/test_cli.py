import csv
import hashlib
import json
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("KELLYBET_CLI", "kellybet")


def run(*args, cwd, env=None, check=True):
    proc = subprocess.run([CLI, *map(str, args)], cwd=cwd, env=env, capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"exit {proc.returncode}: {proc.stderr}")
    return proc


def digests(directory: Path):
    return {
        p.relative_to(directory).as_posix(): hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(directory.rglob("*"))
        if p.is_file()
    }


def error_record(proc):
    return json.loads(proc.stderr.strip().splitlines()[-1])["error"]


def test_optimal_kelly_has_no_drawdown(tmp_path):
    run("simulate", "--sim", "optimal", "--policy", "kelly", "--out", "sim", cwd=tmp_path)
    rows = list(csv.DictReader(open(tmp_path / "sim" / "performance.csv")))
    assert len(rows) == 1
    assert rows[0]["Max Drawdown"] == "0.00%"


def test_kelly_surface_fixed_p(tmp_path):
    run("kelly-surface", "--p", "0.6", "--out", "ks", cwd=tmp_path)
    out = tmp_path / "ks"
    rows = list(csv.DictReader(open(out / "fixed_p_surface.csv")))
    assert len(rows) == 100
    hit = [r for r in rows if float(r["a"]) == 0.05 and float(r["b"]) == 0.04]
    assert len(hit) == 1
    assert float(hit[0]["f_star"]) == pytest.approx(2.0, abs=1e-9)
    assert (out / "odds_surface.csv").exists()
    assert (out / "symmetric_surface.csv").exists()


def test_kelly_surface_log_optimal(tmp_path):
    run("kelly-surface", "--p", "0.6", "--formula", "log_optimal", "--out", "ks", cwd=tmp_path)
    rows = csv.DictReader(open(tmp_path / "ks" / "fixed_p_surface.csv"))
    hit = [r for r in rows if float(r["a"]) == 0.05 and float(r["b"]) == 0.04]
    assert float(hit[0]["f_star"]) == pytest.approx(7.0, abs=1e-9)


def test_backtest_is_reproducible(tmp_path):
    run("backtest", "--out", "a", cwd=tmp_path)
    run("backtest", "--out", "b", cwd=tmp_path)
    a, b = digests(tmp_path / "a"), digests(tmp_path / "b")
    assert a.keys() == b.keys()
    assert {k: v for k, v in a.items() if k != "manifest.json"} == {k: v for k, v in b.items() if k != "manifest.json"}
    table = list(csv.DictReader(open(tmp_path / "a" / "performance.csv")))
    assert [r["Strategy"] for r in table] == ["Proposed (kelly)", "Triple Barrier", "Side Learning", "Buy and Hold"]
    assert (tmp_path / "a" / "equity.svg").read_text().startswith("<svg")


def test_replay_from_manifest(tmp_path):
    run("backtest", "--modifier", "0.2", "--policy", "kelly", "--policy", "gaussian", "--out", "first", cwd=tmp_path)
    manifest = json.loads((tmp_path / "first" / "manifest.json").read_text())
    argv = manifest["replay_argv"][1:]
    argv[argv.index("--out") + 1] = "second"
    run(*argv, cwd=tmp_path)
    replayed = json.loads((tmp_path / "second" / "manifest.json").read_text())
    strip = lambda m: {a["path"]: a["sha256"] for a in m["artifacts"]}
    assert strip(manifest) == strip(replayed)
    for artifact in manifest["artifacts"]:
        path = tmp_path / "first" / artifact["path"]
        assert hashlib.sha256(path.read_bytes()).hexdigest() == artifact["sha256"]


def test_manifest_contents(tmp_path):
    run("synth", "--seed", "9", "--n", "600", "--out", "s", cwd=tmp_path)
    run("ingest", "--input", "s/candles.csv", "--out", "i", cwd=tmp_path)
    m = json.loads((tmp_path / "i" / "manifest.json").read_text())
    assert m["command"] == "ingest"
    assert m["version"]
    assert m["inputs"][0]["sha256"] == hashlib.sha256((tmp_path / "s" / "candles.csv").read_bytes()).hexdigest()
    assert (tmp_path / "i" / "candles.csv").read_bytes() == (tmp_path / "s" / "candles.csv").read_bytes()
    synth = json.loads((tmp_path / "s" / "manifest.json").read_text())
    assert synth["seeds"] == [9]


def test_compare_writes_per_run_directories(tmp_path):
    run("compare", "--seeds", "3", "--n", "2000", "--modifier", "0.1", "--out", "c", cwd=tmp_path)
    out = tmp_path / "c"
    for policy in ("none", "gaussian", "kelly"):
        for seed in range(3):
            assert (out / "runs" / policy / f"seed_{seed}" / "equity.csv").exists()
    summary = json.loads((out / "summary.json").read_text())
    assert [s["policy"] for s in summary] == ["none", "gaussian", "kelly"]
    assert (out / "equity.svg").exists() and (out / "equity_chart.csv").exists()


def test_report_scores_predictions(tmp_path):
    run("synth", "--n", "1500", "--out", "s", cwd=tmp_path)
    run("simulate", "--input", "s/candles.csv", "--out", "sim", cwd=tmp_path)
    run("report", "--input", "s/candles.csv", "--predictions", "sim/predictions.csv",
        "--equity", "kelly=sim/equity_kelly.csv", "--out", "r", cwd=tmp_path)
    cls = json.loads((tmp_path / "r" / "classification.json").read_text())
    assert cls["n"] > 0
    assert (tmp_path / "r" / "regression.json").exists()
    assert (tmp_path / "r" / "performance.csv").exists()


def test_data_dir_lookup(tmp_path):
    run("synth", "--n", "400", "--out", "data", cwd=tmp_path)
    work = tmp_path / "work"
    work.mkdir()
    env = dict(os.environ, KELLYBET_DATA_DIR=str(tmp_path / "data"))
    run("ingest", "--input", "candles.csv", "--out", "i", cwd=work, env=env)
    assert (work / "i" / "candles.csv").exists()


def test_exit_codes(tmp_path):
    p = run("backtest", "--no-such-flag", cwd=tmp_path, check=False)
    assert p.returncode == 2 and error_record(p)["kind"] == "usage"
    p = run("ingest", "--input", "missing.csv", cwd=tmp_path, check=False)
    assert p.returncode == 3 and error_record(p)["kind"] == "missing_input"
    p = run("backtest", "--kelly-fraction", "1.5", cwd=tmp_path, check=False)
    assert p.returncode == 4 and error_record(p)["kind"] == "config"
    (tmp_path / "bad.csv").write_text("timestamp,open,high,low,close,volume\n1600000000,1,0.5,2,1,1\n")
    p = run("ingest", "--input", "bad.csv", cwd=tmp_path, check=False)
    assert p.returncode == 5 and error_record(p)["kind"] == "data"
    assert "line 2" in error_record(p)["message"]


def test_config_precedence(tmp_path):
    (tmp_path / "run.toml").write_text("[backtest]\nmodifier = 0.3\nmax-leverage = 2\n")
    run("--config", "run.toml", "backtest", "--max-leverage", "3", "--out", "o", cwd=tmp_path)
    config = json.loads((tmp_path / "o" / "manifest.json").read_text())["config"]
    assert config["modifier"] == {"value": "0.3", "source": "config"}
    assert config["max-leverage"] == {"value": "3", "source": "cli"}
    assert config["fee"] == {"value": "0", "source": "default"}
