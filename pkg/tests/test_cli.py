import json

import pytest
from click.testing import CliRunner

from distrank.cli import cli
from distrank.polyfilter import FilterDocument
from distrank.protocols import degree_for_p

QUIET = ["--log-level", "CRITICAL"]


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def shard_dir(runner, tmp_path):
    out = tmp_path / "shards"
    result = runner.invoke(cli, QUIET + ["gen", "--kind", "planted", "--n", "24", "--m", "2", "--r", "3", "--seed", "5", "--out", str(out)])
    assert result.exit_code == 0, result.output
    manifest = json.loads(result.output)
    assert manifest["n"] == 24
    assert manifest["m"] == 2
    assert manifest["planted_rank"] == 3
    return out


def test_estimate_from_shard_set(runner, shard_dir):
    result = runner.invoke(cli, QUIET + ["estimate", "--shards", str(shard_dir), "--T", "4", "--seed", "1", "--oracle"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["T"] == 4
    assert report["n"] == 24
    assert report["rhat"] >= 0.0
    assert report["bits_used"] > 0
    assert report["oracle"] == {"rank_c1": 3, "rank_c2": 3}


def test_estimate_is_reproducible(runner, shard_dir):
    args = QUIET + ["estimate", "--shards", str(shard_dir), "--T", "3", "--seed", "9"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == 0, first.output
    assert first.output == second.output


def test_estimate_trace_and_ledger(runner, shard_dir, tmp_path):
    ledger = tmp_path / "ledger.csv"
    result = runner.invoke(cli, QUIET + [
        "estimate", "--shards", str(shard_dir), "--T", "1", "--p", "1", "--trace", "--ledger-csv", str(ledger),
    ])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["trace"][0].startswith("round=")
    assert ledger.read_text().splitlines()[0].startswith("round")


def test_det_recovers_planted_rank(runner, shard_dir):
    result = runner.invoke(cli, QUIET + ["det", "--shards", str(shard_dir), "--r", "3", "--oracle"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["rhat"] == 3
    assert report["oracle"]["rank_c1"] == 3


def test_baseline_runs_on_generated_instance(runner):
    result = runner.invoke(cli, QUIET + ["baseline", "--n", "16", "--r", "2", "--degree", "12", "--T", "2"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["filter_summary"]["kind"] == "baseline"


def test_config_file_with_flag_override(runner, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"n": 16, "r": 2, "T": 3, "seed": 4}))
    result = runner.invoke(cli, QUIET + ["estimate", "--config", str(config), "--T", "5"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["T"] == 5
    assert report["n"] == 16
    assert report["seed"] == 4


def test_invalid_thresholds_report_failure(runner):
    result = runner.invoke(cli, QUIET + ["estimate", "--n", "16", "--c1", "0.1", "--c2", "0.5"])
    assert result.exit_code == 1
    error = json.loads(result.output)
    assert error["error"] == "Input validation failed"
    assert error["status"] == "failed"


def test_missing_shard_file_is_rejected(runner, tmp_path):
    result = runner.invoke(cli, QUIET + ["det", "--shards", str(tmp_path / "missing.grnk")])
    assert result.exit_code != 0


def test_verify_poly_prints_csv(runner):
    result = runner.invoke(cli, QUIET + ["verify-poly", "--p", "3"])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == "p,total_degree,composite_error,chebyshev_error"
    assert len(lines) == 5


def test_ensemble_rank_check(runner):
    result = runner.invoke(cli, QUIET + ["lemma3-check", "--n", "40", "--r", "5", "--trials", "5"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["index"] == 6
    assert report["passed"] == 5
    assert "eigenvalues" not in report


def test_experiment_command(runner, tmp_path):
    out = tmp_path / "sweep"
    result = runner.invoke(cli, QUIET + [
        "experiment", "--n", "8", "--m", "2", "--r", "2", "--samples", "20",
        "--p", "1", "--T", "2", "--trials", "2", "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output) == {"status": "ok", "output_dir": str(out), "target_rank": 2}
    for name in ("trials.csv", "summary.csv", "eigenvalues.csv", "summary.json"):
        assert (out / name).exists()


def test_ensemble_check_alias(runner):
    args = ["--n", "40", "--r", "5", "--trials", "2"]
    first = runner.invoke(cli, QUIET + ["lemma3-check"] + args)
    second = runner.invoke(cli, QUIET + ["ensemble-check"] + args)
    assert first.exit_code == 0, first.output
    assert first.output == second.output


def test_config_for_other_protocol_is_rejected(runner, tmp_path):
    config = tmp_path / "det.json"
    config.write_text(json.dumps({"protocol": "deterministic", "n": 16, "r": 2}))
    result = runner.invoke(cli, QUIET + ["estimate", "--config", str(config)])
    assert result.exit_code == 1
    error = json.loads(result.output)
    assert error["kind"] == "InvalidParameterError"
    assert error["status"] == "failed"
    result = runner.invoke(cli, QUIET + ["det", "--config", str(config)])
    assert result.exit_code == 0, result.output


def test_saved_filter_reproduces_estimate(runner, shard_dir, tmp_path):
    saved = tmp_path / "filter.json"
    args = QUIET + ["estimate", "--shards", str(shard_dir), "--T", "2", "--p", "1", "--seed", "3"]
    first = runner.invoke(cli, args + ["--filter-out", str(saved)])
    assert first.exit_code == 0, first.output
    assert FilterDocument.load(saved).p == 1
    second = runner.invoke(cli, args + ["--filter", str(saved)])
    assert second.exit_code == 0, second.output
    assert json.loads(second.output)["rhat"] == json.loads(first.output)["rhat"]


def test_verify_poly_writes_filter_document(runner, tmp_path):
    saved = tmp_path / "filter.json"
    result = runner.invoke(cli, QUIET + ["verify-poly", "--p", "2", "--filter-out", str(saved)])
    assert result.exit_code == 0, result.output
    filt = FilterDocument.load(saved).to_filter()
    assert filt.p == 2
    assert (filt.thresholds.c1, filt.thresholds.c2) == (0.2, 0.1)


def test_experiment_with_saved_filter(runner, tmp_path):
    saved = tmp_path / "filter.json"
    result = runner.invoke(cli, QUIET + ["verify-poly", "--c1", "0.5", "--p", "1", "--filter-out", str(saved)])
    assert result.exit_code == 0, result.output
    out = tmp_path / "sweep"
    result = runner.invoke(cli, QUIET + [
        "experiment", "--filter", str(saved), "--n", "8", "--m", "2", "--r", "2", "--samples", "20",
        "--T", "2", "--trials", "2", "--no-baseline", "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    summary = json.loads((out / "summary.json").read_text())
    assert {row["p"] for row in summary["summary"]} == {1}
    assert summary["config"]["q1_degree"] == FilterDocument.load(saved).q1_degree


def test_baseline_default_degree_follows_loaded_shards(runner, shard_dir):
    result = runner.invoke(cli, QUIET + ["baseline", "--shards", str(shard_dir), "--T", "1"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert degree_for_p(24) == 6
    assert report["filter_summary"]["degree"] == 4 * (2 * degree_for_p(24) + 1) == 52
