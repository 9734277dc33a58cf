"""
tests/test_cli.py
=================
The designtrace command line: subcommand wiring, config echo and exit codes.

Exit codes: 0 success, 1 usage, 2 data, 3 I/O.
"""

from __future__ import annotations

import json
from pathlib import Path

import pandas as pd
import pytest

from designtrace import __version__
from designtrace.cli import main
from designtrace.experiments import read_report_csv
from designtrace.features import read_features_csv
from designtrace.learners import load_model
from designtrace.models import FeatureKind, ModelFamily


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch, tmp_path):
    """Keep a developer's .env / DESIGNTRACE_* settings out of the tests."""
    for key in ("DESIGNTRACE_WORKERS", "DESIGNTRACE_MAPPING", "DESIGNTRACE_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)


def _synth(tmp_path: Path, n: int = 30, corrupt: float = 0.0, seed: int = 4) -> Path:
    out = tmp_path / "raw"
    code = main(
        [
            "synth", "--n", str(n), "--min-len", "15", "--max-len", "40",
            "--corrupt", str(corrupt), "--seed", str(seed),
            "--out", str(out), "--manifest", str(tmp_path / "manifest.csv"), "--quiet",
        ]
    )
    assert code == 0
    return out


# ────────────────────────────────────────────────────────────────────────────
# Usage
# ────────────────────────────────────────────────────────────────────────────

class TestUsage:
    def test_unknown_flag(self, capsys):
        assert main(["synth", "--out", "x", "--bogus"]) == 1
        assert "usage" in capsys.readouterr().err

    def test_no_subcommand(self):
        assert main([]) == 1

    def test_unknown_experiment(self, tmp_path):
        assert main(["experiment", "nope", "--cohort", str(tmp_path), "--out", "r.csv"]) == 1

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "clean" in capsys.readouterr().out

    def test_version_names_mapping(self, capsys):
        assert main(["--version"]) == 0
        out = capsys.readouterr().out
        assert __version__ in out
        assert "default-1" in out

    def test_domain_error_is_usage(self, tmp_path):
        assert main(["synth", "--n", "5", "--success-rate", "1.5", "--out", str(tmp_path / "o"), "--quiet"]) == 1

    def test_prefix_requires_sequence(self, tmp_path):
        raw = _synth(tmp_path, n=6)
        code = main(["encode", str(raw), "--kind", "tally", "--prefix", "0.5", "--out", "f.csv", "--quiet"])
        assert code == 1


# ────────────────────────────────────────────────────────────────────────────
# Subcommands
# ────────────────────────────────────────────────────────────────────────────

class TestPipeline:
    def test_config_echo(self, tmp_path, capsys):
        main(["synth", "--n", "3", "--min-len", "5", "--max-len", "8", "--out", str(tmp_path / "o")])
        first = capsys.readouterr().err.splitlines()[0]
        config = json.loads(first)
        assert config["command"] == "synth"
        assert config["n"] == 3
        assert config["mapping_version"] == "default-1"

    def test_quiet_suppresses_echo(self, tmp_path, capsys):
        main(["synth", "--n", "3", "--min-len", "5", "--max-len", "8", "--out", str(tmp_path / "o"), "--quiet"])
        assert capsys.readouterr().err == ""

    def test_clean_encode_train(self, tmp_path):
        raw = _synth(tmp_path, corrupt=0.3)
        clean = tmp_path / "clean"
        assert main(["clean", str(raw), "--out", str(clean), "--report", "repairs.csv", "--quiet"]) == 0
        report = pd.read_csv(tmp_path / "repairs.csv")
        assert len(report) == 30
        assert len(list(clean.iterdir())) == (report.outcome.isin(["Repaired", "CleanAsIs"])).sum()

        assert main(["encode", str(clean), "--kind", "tally", "--out", "features.csv", "--quiet"]) == 0
        matrix, _ = read_features_csv(tmp_path / "features.csv")
        assert matrix.n_features == 13

        code = main(
            [
                "train", "--features", "features.csv", "--band", "10000", "--seed", "7",
                "--out", "model.json", "--metrics", "metrics.csv", "--max-iters", "500", "--quiet",
            ]
        )
        assert code == 0
        model = load_model(tmp_path / "model.json")
        assert model.family is ModelFamily.LOGISTIC
        assert model.standardization is not None
        metrics = dict(pd.read_csv(tmp_path / "metrics.csv").values)
        assert 0.0 <= float(metrics["test_accuracy"]) <= 1.0
        assert {"majority_baseline", "n_train", "n_test"} <= set(metrics)

    def test_encode_sequence_prefix(self, tmp_path):
        raw = _synth(tmp_path, n=8)
        assert main(["encode", str(raw), "--kind", "sequence", "--prefix", "0.5", "--out", "seq.csv", "--quiet"]) == 0
        matrix, energies = read_features_csv(tmp_path / "seq.csv", FeatureKind.SEQUENCE)
        assert matrix.pad_length <= 20
        assert len(energies) == 8

    def test_train_linear(self, tmp_path):
        raw = _synth(tmp_path)
        main(["encode", str(raw), "--out", "features.csv", "--quiet"])
        code = main(["train", "--features", "features.csv", "--family", "linear", "--out", "m.json",
                     "--metrics", "m.csv", "--quiet"])
        assert code == 0
        metrics = dict(pd.read_csv(tmp_path / "m.csv").values)
        assert {"rmse", "mae", "r2"} <= set(metrics)

    def test_experiment_csv_and_svg(self, tmp_path):
        raw = _synth(tmp_path)
        code = main(
            [
                "experiment", "stability", "--cohort", str(raw), "--iters", "2", "--max-iters", "200",
                "--seed", "3", "--out", "stab.csv", "--svg", "stab.svg", "--quiet",
            ]
        )
        assert code == 0
        report = read_report_csv(tmp_path / "stab.csv")
        assert report.seed_base == 3
        assert report.config["mapping_version"] == "default-1"
        assert (tmp_path / "stab.svg").read_bytes().lstrip().startswith(b"<?xml")

    def test_synth_verify_band(self, tmp_path):
        code = main(["synth", "--n", "10", "--min-len", "10", "--max-len", "20", "--out", "raw",
                     "--verify-band", "10000", "--quiet"])
        assert code == 0
        code = main(["synth", "--n", "10", "--min-len", "10", "--max-len", "20", "--out", "raw2",
                     "--verify-band", "1", "--quiet"])
        assert code == 2


# ────────────────────────────────────────────────────────────────────────────
# Exit codes for bad data / IO
# ────────────────────────────────────────────────────────────────────────────

class TestExitCodes:
    def test_all_unrepairable_is_data_error(self, tmp_path):
        corpus = tmp_path / "junk"
        corpus.mkdir()
        for i in range(3):
            (corpus / f"s{i}.json").write_bytes(b"<<< not json >>>")
        assert main(["experiment", "baseline", "--cohort", str(corpus), "--out", "r.csv", "--quiet"]) == 2
        assert main(["clean", str(corpus), "--out", str(tmp_path / "c"), "--quiet"]) == 2

    def test_degenerate_labels_is_data_error(self, tmp_path):
        raw = _synth(tmp_path)
        main(["encode", str(raw), "--out", "features.csv", "--quiet"])
        code = main(["train", "--features", "features.csv", "--band", "1e9", "--out", "m.json", "--quiet"])
        assert code == 2

    def test_missing_directory_is_io_error(self, tmp_path):
        assert main(["experiment", "hist", "--cohort", str(tmp_path / "absent"), "--out", "r.csv", "--quiet"]) == 3

    def test_missing_features_file_is_io_error(self):
        assert main(["train", "--features", "nope.csv", "--out", "m.json", "--quiet"]) == 3

    def test_bad_mapping_file_is_data_error(self, tmp_path):
        (tmp_path / "mapping.json").write_text('{"version": "x", "rules": []}')
        assert main(["synth", "--n", "2", "--out", "o", "--mapping", "mapping.json", "--quiet"]) == 2

    def test_mapping_from_environment(self, tmp_path, monkeypatch, capsys):
        (tmp_path / "mapping.json").write_text('{"version": "x", "rules": []}')
        monkeypatch.setenv("DESIGNTRACE_MAPPING", str(tmp_path / "mapping.json"))
        assert main(["synth", "--n", "2", "--out", "o", "--quiet"]) == 2
