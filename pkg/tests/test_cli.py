import json

import pytest
from click.testing import CliRunner

from retrofitkit.cli import main
from retrofitkit.evaluator import REPORT_SCHEMA
from retrofitkit.gateway import GenerationRecord, load_generations, save_generations
from retrofitkit.ranking import GroundTruthStore


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """One full CLI walkthrough shared by the checks below."""
    root = tmp_path_factory.mktemp("cli")
    runner = CliRunner()

    def run(*args):
        result = runner.invoke(main, [str(a) for a in args])
        assert result.exit_code == 0, result.output
        return result

    paths = {
        "store": root / "store.jsonl",
        "records": root / "records.jsonl",
        "results": root / "results.csv",
        "store2": root / "store2.jsonl",
        "corpus": root / "corpus",
        "gen": root / "gen.jsonl",
        "report": root / "report.json",
    }
    run(
        "pipeline", "--n", 25, "--seed", 0,
        "--store", paths["store"],
        "--export-csv", paths["results"],
        "--export-records", paths["records"],
    )
    run(
        "ingest",
        "--records", paths["records"],
        "--results", paths["results"],
        "--store", paths["store2"],
    )
    run(
        "corpus",
        "--store", paths["store"],
        "--out-dir", paths["corpus"],
        "--holdout", 10,
        "--mask",
    )
    run(
        "generate",
        "--corpus", paths["corpus"] / "eval.jsonl",
        "--store", paths["store"],
        "--out", paths["gen"],
        "--mock", "perfect",
    )
    run(
        "evaluate",
        "--generations", paths["gen"],
        "--store", paths["store"],
        "--out", paths["report"],
    )
    return runner, paths


class TestWalkthrough:
    def test_pipeline_store_loads(self, workspace):
        _, paths = workspace
        assert len(GroundTruthStore.load(paths["store"])) == 25

    def test_ingest_reproduces_store_bytes(self, workspace):
        """External-results ingestion must rebuild the exact same store."""
        _, paths = workspace
        assert paths["store2"].read_bytes() == paths["store"].read_bytes()

    def test_corpus_files_written(self, workspace):
        _, paths = workspace
        for name in ("train.jsonl", "eval.jsonl", "eval_masked.jsonl", "manifest.json"):
            assert (paths["corpus"] / name).exists()
        manifest = json.loads((paths["corpus"] / "manifest.json").read_text())
        assert manifest["n_train"] == 15
        assert manifest["n_eval"] == 10

    def test_generation_file_covers_eval_split(self, workspace):
        _, paths = workspace
        records = load_generations(paths["gen"])
        assert len(records) == 10
        assert all(r.error is None for r in records)

    def test_perfect_report_is_all_ones(self, workspace):
        _, paths = workspace
        report = json.loads(paths["report"].read_text())
        assert report["schema"] == REPORT_SCHEMA
        assert report["n_valid"] == 10
        for metrics in report["objectives"].values():
            assert metrics["top1_accuracy"] == 1.0
            assert metrics["top3_accuracy"] == 1.0
            assert metrics["ndcg_at_3"] == 1.0
        for field in report["field_errors"].values():
            assert field["mape_pct"] == 0.0


class TestFailureModes:
    def test_all_invalid_generations_exit_2(self, workspace, tmp_path):
        runner, paths = workspace
        bad = tmp_path / "bad.jsonl"
        records = load_generations(paths["gen"])
        save_generations(
            bad,
            [
                GenerationRecord(
                    building_id=r.building_id,
                    condition=r.condition,
                    response_text="not json at all",
                    prompt_sha256=r.prompt_sha256,
                )
                for r in records
            ],
        )
        result = runner.invoke(
            main,
            ["evaluate", "--generations", str(bad), "--store", str(paths["store"])],
        )
        assert result.exit_code == 2

    def test_mock_requires_store(self, workspace):
        runner, paths = workspace
        result = runner.invoke(
            main,
            [
                "generate",
                "--corpus", str(paths["corpus"] / "eval.jsonl"),
                "--out", str(paths["corpus"] / "x.jsonl"),
                "--mock", "perfect",
            ],
        )
        assert result.exit_code != 0
        assert "--store" in result.output

    def test_live_requires_endpoint(self, workspace):
        runner, paths = workspace
        result = runner.invoke(
            main,
            [
                "generate",
                "--corpus", str(paths["corpus"] / "eval.jsonl"),
                "--out", str(paths["corpus"] / "x.jsonl"),
            ],
        )
        assert result.exit_code != 0
        assert "--base-url" in result.output

    def test_corpus_holdout_too_large(self, workspace, tmp_path):
        runner, paths = workspace
        result = runner.invoke(
            main,
            [
                "corpus",
                "--store", str(paths["store"]),
                "--out-dir", str(tmp_path / "c"),
                "--holdout", "25",
            ],
        )
        assert result.exit_code != 0

    def test_version_flag(self):
        result = CliRunner().invoke(main, ["--version"])
        assert result.exit_code == 0
