import json

import pytest
from click.testing import CliRunner

from eventlens.cli import main

from .conftest import FIXTURES

CONFIG = str(FIXTURES / "config.json")
CORPUS = str(FIXTURES / "corpus.jsonl")


@pytest.fixture()
def runner():
    return CliRunner()


class TestExtractCommand:
    def test_single_document(self, runner, tmp_path):
        text_file = tmp_path / "doc.txt"
        text_file.write_text("A cholera outbreak struck Tehran.", encoding="utf-8")
        result = runner.invoke(
            main, ["extract", str(text_file), "-c", CONFIG, "--doc-id", "d1"]
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["document"]["id"] == "d1"
        types = [e["event_type"] for s in payload["sentences"] for e in s["events"]]
        assert types == ["Disease-Outbreak"]

    def test_corpus_mode(self, runner, tmp_path):
        out = tmp_path / "out.jsonl"
        result = runner.invoke(
            main, ["extract", CORPUS, "-c", CONFIG, "--corpus", "-o", str(out)]
        )
        assert result.exit_code == 0, result.output
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 3
        assert json.loads(lines[0])["document"]["id"] == "doc-1"


class TestIndexAndSearchCommands:
    def test_index_then_search(self, runner, tmp_path):
        index_path = tmp_path / "events.idx"
        result = runner.invoke(
            main, ["index", CORPUS, "-o", str(index_path), "-c", CONFIG]
        )
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["documents"] == 3 and report["failures"] == []

        search = runner.invoke(
            main,
            [
                "search",
                str(index_path),
                "-c",
                CONFIG,
                "--type",
                "Disease-Outbreak",
                "--agent",
                "cholera",
                "--location",
                "Iran",
            ],
        )
        assert search.exit_code == 0, search.output
        assert "doc-3#e" in search.output
        assert "location=green" in search.output

    def test_nl_search_echoes_query(self, runner, tmp_path):
        index_path = tmp_path / "events.idx"
        runner.invoke(main, ["index", CORPUS, "-o", str(index_path), "-c", CONFIG])
        search = runner.invoke(
            main,
            ["search", str(index_path), "-c", CONFIG, "--nl", "anti-inflation protests in Vietnam"],
        )
        assert search.exit_code == 0, search.output
        echo = json.loads(search.output.splitlines()[0])
        assert echo["event_types"] == ["Protest"]
        assert echo["location"] == "Vietnam"

    def test_invalid_query_fails_cleanly(self, runner, tmp_path):
        index_path = tmp_path / "events.idx"
        runner.invoke(main, ["index", CORPUS, "-o", str(index_path), "-c", CONFIG])
        search = runner.invoke(main, ["search", str(index_path), "-c", CONFIG])
        assert search.exit_code != 0
        assert "empty query" in search.output


class TestEvalCommand:
    def test_perfect_self_score(self, runner, tmp_path):
        pred = tmp_path / "pred.jsonl"
        result = runner.invoke(
            main, ["extract", CORPUS, "-c", CONFIG, "--corpus", "-o", str(pred)]
        )
        assert result.exit_code == 0
        for task in ("anchors", "arguments", "coref"):
            scored = runner.invoke(main, ["eval", str(pred), str(pred), "--task", task])
            assert scored.exit_code == 0, scored.output
            assert "1.0000" in scored.output

    def test_document_mismatch_fails(self, runner, tmp_path):
        pred = tmp_path / "pred.jsonl"
        gold = tmp_path / "gold.jsonl"
        runner.invoke(main, ["extract", CORPUS, "-c", CONFIG, "--corpus", "-o", str(pred)])
        lines = pred.read_text(encoding="utf-8").splitlines()
        gold.write_text("\n".join(lines[:2]) + "\n", encoding="utf-8")
        scored = runner.invoke(main, ["eval", str(pred), str(gold), "--task", "anchors"])
        assert scored.exit_code != 0
        assert "document mismatch" in scored.output
