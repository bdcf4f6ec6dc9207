import json
import os
import subprocess
import sys

import pytest

from traceineq import CHECKS, CampaignConfig, ConfigError, UnknownCheck, run_campaign
from traceineq.campaign import config_from, load_config_file, selected_checks


def _cfg(**kw):
    base = dict(suite="identities", n_values=(3,), trials=2, seed=77,
                parallel=1)
    base.update(kw)
    return CampaignConfig(**base)


def test_registry_covers_both_suites():
    suites = {spec.suite for spec in CHECKS.values()}
    assert suites == {"identities", "inequalities"}
    assert "golden_thompson" in CHECKS
    assert "key_identity" in CHECKS
    for spec in CHECKS.values():
        assert spec.description
        assert spec.formula


def test_config_validation():
    with pytest.raises(ConfigError):
        _cfg(suite="bogus").validate()
    with pytest.raises(ConfigError):
        _cfg(n_values=(2,)).validate()
    with pytest.raises(ConfigError):
        _cfg(trials=0).validate()
    with pytest.raises(ConfigError):
        _cfg(lam_lo=-1.0).validate()
    with pytest.raises(UnknownCheck):
        _cfg(checks=("nope",)).validate()
    with pytest.raises(ConfigError):
        _cfg(fmt="xml").validate()


def test_selected_checks_filters():
    specs = selected_checks(_cfg(suite="inequalities"))
    assert all(s.suite == "inequalities" for s in specs)
    only = selected_checks(_cfg(suite="all", checks=("golden_thompson",)))
    assert [s.check_id for s in only] == ["golden_thompson"]


def test_campaign_runs_and_passes():
    summary = run_campaign(_cfg(suite="all", trials=2))
    assert summary.passed
    assert summary.failure_count == 0
    assert summary.trial_count == len(summary.reports)
    ids = {row["check_id"] for row in summary.per_check}
    assert "beta_normalization" in ids
    assert "tensor_resolvent" in ids


def test_campaign_reports_sorted_and_seeded():
    summary = run_campaign(_cfg(suite="inequalities", trials=3))
    keys = [(r.check_id, r.n or -1, r.seed or -1) for r in summary.reports]
    assert keys == sorted(keys)
    gt = [r for r in summary.reports if r.check_id == "golden_thompson"]
    assert [r.seed for r in gt] == [77, 78, 79]


def test_campaign_deterministic_across_parallelism(tmp_path):
    out1 = str(tmp_path / "a" / "run")
    out2 = str(tmp_path / "b" / "run")
    run_campaign(_cfg(suite="identities", out=out1, parallel=1))
    run_campaign(_cfg(suite="identities", out=out2, parallel=2))
    body1 = open(out1 + ".trials.jsonl", "rb").read()
    body2 = open(out2 + ".trials.jsonl", "rb").read()
    assert body1 == body2
    assert open(out1 + ".summary.csv", "rb").read() == open(out2 + ".summary.csv", "rb").read()


def test_campaign_rerun_byte_identical(tmp_path):
    out = str(tmp_path / "run")
    run_campaign(_cfg(suite="inequalities", out=out))
    first = open(out + ".trials.jsonl", "rb").read()
    run_campaign(_cfg(suite="inequalities", out=out))
    assert open(out + ".trials.jsonl", "rb").read() == first
    # no wall-clock leakage into bodies
    assert b"runtime" not in first.lower()


def test_jsonl_structure(tmp_path):
    out = str(tmp_path / "run")
    run_campaign(_cfg(checks=("beta_normalization", "scalar_power_identity"),
                      out=out))
    lines = open(out + ".trials.jsonl").read().splitlines()
    head = json.loads(lines[0])
    assert head["record"] == "config"
    assert head["config"]["seed"] == 77
    assert "out" not in head["config"]
    assert "parallel" not in head["config"]
    rows = [json.loads(line) for line in lines[1:]]
    assert all(row["record"] == "trial" for row in rows)
    assert all(row["passed"] for row in rows)


def test_csv_format(tmp_path):
    out = str(tmp_path / "run")
    run_campaign(_cfg(checks=("pairing_identity",), fmt="csv", out=out))
    lines = open(out + ".trials.csv").read().splitlines()
    assert lines[0].startswith("# config ")
    assert "check_id" in lines[1].split(",")
    assert len(lines) == 2 + 2 * 2  # header rows + trials x copies


def test_error_trial_recorded_not_fatal(tmp_path, monkeypatch):
    # a runner that raises must yield a failed trial row
    from traceineq import campaign as camp

    def boom(ctx, n, seed):
        raise UnknownCheck("synthetic failure")

    monkeypatch.setitem(
        camp.CHECKS, "beta_normalization",
        camp.CheckSpec("beta_normalization", "identities", boom, "none",
                       deterministic=True, description="x", formula="y"))
    summary = run_campaign(_cfg(checks=("beta_normalization",)))
    assert not summary.passed
    assert summary.reports[0].kind == "error"
    assert "synthetic failure" in summary.reports[0].params["error"]


def test_load_config_file(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text("suite = inequalities\nn_values = 3, 4\ntrials = 5\n"
                    "# a comment\nlam_lo = 0.5\nchecks = golden_thompson\n")
    overrides = load_config_file(str(path))
    assert overrides == {"suite": "inequalities", "n_values": (3, 4),
                         "trials": 5, "lam_lo": 0.5,
                         "checks": ("golden_thompson",)}
    bad = tmp_path / "bad.cfg"
    bad.write_text("bogus = 1\n")
    with pytest.raises(ConfigError):
        load_config_file(str(bad))
    bad.write_text("trials = many\n")
    with pytest.raises(ConfigError):
        load_config_file(str(bad))


def test_config_from_precedence(tmp_path, monkeypatch):
    monkeypatch.delenv("TRACEINEQ_OUT", raising=False)
    cfg = config_from({"trials": 5, "seed": 1}, {"seed": 9, "out": None})
    assert cfg.trials == 5
    assert cfg.seed == 9
    assert cfg.out is None
    monkeypatch.setenv("TRACEINEQ_OUT", str(tmp_path))
    cfg = config_from({}, {})
    assert cfg.out == os.path.join(str(tmp_path), "report")
    # explicit flag beats the environment
    cfg = config_from({}, {"out": str(tmp_path / "x")})
    assert cfg.out == str(tmp_path / "x")


# ------------------------------------------------------------------ the CLI

CLI = [sys.executable, "-m", "traceineq.cli"]


def _run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("TRACEINEQ_OUT", None)
    if env:
        full_env.update(env)
    return subprocess.run(CLI + list(args), capture_output=True, text=True,
                          env=full_env)


def test_cli_verify_exit_zero(tmp_path):
    out = str(tmp_path / "run")
    proc = _run("verify", "--suite", "identities", "--n", "3",
                "--trials", "2", "--seed", "5", "--out", out, "--parallel", "1")
    assert proc.returncode == 0, proc.stderr
    assert "overall: PASS" in proc.stdout
    assert os.path.exists(out + ".trials.jsonl")
    assert os.path.exists(out + ".summary.csv")


def test_cli_env_var_output(tmp_path):
    proc = _run("verify", "--check", "beta_normalization", "--trials", "1",
                "--parallel", "1", env={"TRACEINEQ_OUT": str(tmp_path)})
    assert proc.returncode == 0, proc.stderr
    assert os.path.exists(str(tmp_path / "report.trials.jsonl"))


def test_cli_config_file(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("suite = identities\nn_values = 3\ntrials = 1\nseed = 3\n")
    proc = _run("verify", "--config", str(cfg), "--parallel", "1")
    assert proc.returncode == 0, proc.stderr


def test_cli_bad_inputs_exit_two(tmp_path):
    assert _run("verify", "--n", "99", "--parallel", "1").returncode == 2
    assert _run("explain", "--check", "nope").returncode == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("bogus = 1\n")
    assert _run("verify", "--config", str(bad)).returncode == 2


def test_cli_explain_layout():
    proc = _run("explain", "--check", "tensor_resolvent", "--n", "5")
    assert proc.returncode == 0
    assert "identity pad" in proc.stdout
    assert "slot 2: A_2" in proc.stdout
    proc = _run("explain", "--check", "golden_thompson")
    assert proc.returncode == 0
    assert "Tr[A1 A2]" in proc.stdout


def test_cli_perm_frozen_rows():
    proc = _run("perm", "--n", "7")
    assert proc.returncode == 0
    assert "slot 4: A_5" in proc.stdout
    assert "3 -> 5" in proc.stdout
    assert "padded slots = 3" in proc.stdout


def test_cli_version():
    proc = _run("--version")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "0.1.0"
