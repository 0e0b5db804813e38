import csv
import json

import numpy as np
import pytest
from click.testing import CliRunner

from essay_scorer.cli import main
from essay_scorer.features.registry import DEFAULT_REGISTRY

from conftest import make_synthetic_dataset, write_synthetic_tsv


@pytest.fixture(scope="module")
def data_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "train.tsv"
    return str(write_synthetic_tsv(path, make_synthetic_dataset(per_set=4)))


@pytest.fixture
def runner():
    return CliRunner()


class TestStats:
    def test_table(self, runner, data_path):
        result = runner.invoke(main, ["stats", "--data", data_path])
        assert result.exit_code == 0, result.output
        lines = result.output.strip().splitlines()
        assert lines[0].split() == [
            "set", "count", "genre", "mean_len", "range", "min#", "max#"
        ]
        assert len(lines) == 9
        assert lines[1].split()[:2] == ["1", "4"]

    def test_missing_file(self, runner):
        result = runner.invoke(main, ["stats", "--data", "/nonexistent.tsv"])
        assert result.exit_code != 0


class TestFeaturesExtract:
    def test_dataset_csvs(self, runner, data_path, tmp_path):
        result = runner.invoke(
            main, ["features", "extract", "--data", data_path,
                   "--out", str(tmp_path)]
        )
        assert result.exit_code == 0, result.output
        for name in ("features_raw.csv", "features_normalized.csv"):
            with open(tmp_path / name, newline="") as fh:
                rows = list(csv.reader(fh))
            assert rows[0] == ["essay_id", "essay_set",
                              *DEFAULT_REGISTRY.feature_names]
            assert len(rows) == 33  # header + 32 essays
        with open(tmp_path / "features_normalized.csv", newline="") as fh:
            next(fh)
            for row in csv.reader(fh):
                for v in row[2:]:
                    assert 0.0 <= float(v) <= 1.0

    def test_pretagged_single_essay(self, runner, tmp_path):
        tagged = tmp_path / "essay.txt"
        tagged.write_text("The\tDT\ncat\tNN\nsat\tVBD\n.\t.\n")
        result = runner.invoke(
            main, ["features", "extract", "--pretagged", str(tagged),
                   "--out", str(tmp_path / "out")]
        )
        assert result.exit_code == 0, result.output
        with open(tmp_path / "out" / "features_raw.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 2
        assert len(rows[1]) == 2 + DEFAULT_REGISTRY.total_dim

    def test_requires_some_input(self, runner, tmp_path):
        result = runner.invoke(
            main, ["features", "extract", "--out", str(tmp_path)]
        )
        assert result.exit_code != 0
        assert "--data or --pretagged" in result.output


class TestTrainEval:
    def test_train_writes_artifacts_and_eval_matches(self, runner, data_path,
                                                     tmp_path):
        out = tmp_path / "run"
        result = runner.invoke(
            main, ["train", "--target-prompt", "3", "--data", data_path,
                   "--epochs", "2", "--seed", "5", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert "test QWK" in result.output
        assert (out / "checkpoint_3.npz").exists()
        assert (out / "predictions_3.csv").exists()
        assert (out / "results.csv").exists()
        run_log = json.loads((out / "run.json").read_text())
        assert run_log["config"]["seed"] == 5
        assert len(run_log["data_sha256"]) == 64

        with open(out / "results.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        trained_qwk = float(rows[0]["qwk"])

        evald = runner.invoke(
            main, ["eval", "--data", data_path, "--target-prompt", "3",
                   "--checkpoint", str(out / "checkpoint_3.npz")]
        )
        assert evald.exit_code == 0, evald.output
        eval_qwk = float(evald.output.split("QWK")[1].split()[0])
        assert eval_qwk == pytest.approx(trained_qwk, abs=5e-5)

    def test_eval_missing_prompt(self, runner, data_path, tmp_path):
        out = tmp_path / "run"
        runner.invoke(
            main, ["train", "--target-prompt", "1", "--data", data_path,
                   "--epochs", "1", "--out", str(out)]
        )
        single = tmp_path / "single.tsv"
        single.write_text(
            "essay_id\tessay_set\tessay\tdomain1_score\n900\t1\ttext here\t4\n"
        )
        result = runner.invoke(
            main, ["eval", "--data", str(single), "--target-prompt", "2",
                   "--checkpoint", str(out / "checkpoint_1.npz")]
        )
        assert result.exit_code != 0
        assert "no essays" in result.output


class TestConfigFile:
    def test_file_values_used_and_cli_wins(self, runner, data_path, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            f"data = {data_path}\nepochs = 1\nseed = 9\n"
            f"out = {tmp_path / 'from_file'}\n# comment line\n"
        )
        result = runner.invoke(
            main, ["train", "--target-prompt", "2", "--config", str(cfg),
                   "--seed", "11"]
        )
        assert result.exit_code == 0, result.output
        run_log = json.loads(
            (tmp_path / "from_file" / "run.json").read_text()
        )
        assert run_log["config"]["epochs"] == 1   # from file
        assert run_log["config"]["seed"] == 11    # CLI overrides file

    def test_malformed_config_line(self, runner, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("epochs 3\n")
        result = runner.invoke(
            main, ["train", "--target-prompt", "1", "--config", str(cfg)]
        )
        assert result.exit_code != 0
        assert "key=value" in result.output


class TestCv:
    def test_all_folds_and_results(self, runner, tmp_path):
        data = write_synthetic_tsv(
            tmp_path / "tiny.tsv", make_synthetic_dataset(per_set=3)
        )
        out = tmp_path / "cv_run"
        result = runner.invoke(
            main, ["cv", "--data", str(data), "--epochs", "1",
                   "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert "average QWK:" in result.output
        with open(out / "results.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["prompt"] for r in rows] == [str(i) for i in range(1, 9)]
        for i in range(1, 9):
            assert (out / f"checkpoint_{i}.npz").exists()


class TestQwk:
    def test_perfect_agreement(self, runner, tmp_path):
        path = tmp_path / "scores.csv"
        path.write_text("human,predicted\n0,0\n1,1\n2,2\n3,3\n")
        result = runner.invoke(
            main, ["qwk", "--input", str(path), "--range", "0-3"]
        )
        assert result.exit_code == 0, result.output
        assert result.output.strip() == "1.0000"

    def test_hand_value(self, runner, tmp_path):
        path = tmp_path / "scores.csv"
        path.write_text("0,0\n1,1\n2,1\n2,2\n")
        result = runner.invoke(
            main, ["qwk", "--input", str(path), "--range", "0-2"]
        )
        assert result.exit_code == 0, result.output
        assert result.output.strip() == "0.8000"

    def test_bad_range(self, runner, tmp_path):
        path = tmp_path / "scores.csv"
        path.write_text("0,0\n")
        result = runner.invoke(
            main, ["qwk", "--input", str(path), "--range", "three"]
        )
        assert result.exit_code != 0


class TestPosTag:
    def test_text_flag(self, runner):
        result = runner.invoke(main, ["pos-tag", "--text", "The cat sat."])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0] == "The\tDT"
        assert lines[1] == "cat\tNN"
        assert lines[3] == ".\t."

    def test_stdin(self, runner):
        result = runner.invoke(main, ["pos-tag"], input="Dogs run fast.")
        assert result.exit_code == 0, result.output
        assert all("\t" in line for line in result.output.splitlines() if line)

    def test_pretagged_round_trip(self, runner, tmp_path):
        path = tmp_path / "tagged.txt"
        content = "The\tDT\ncat\tNN\n.\t.\n"
        path.write_text(content)
        result = runner.invoke(main, ["pos-tag", "--pretagged", str(path)])
        assert result.exit_code == 0, result.output
        assert result.output.startswith(content.rstrip("\n").split("\n")[0])
