import sys

import numpy as np
import pytest

from eventlens.providers import load_rule_scorer
from eventlens.remote import RemoteProviderClient, RemoteProviderError, RemoteScorerSet

from .conftest import FIXTURES, make_sentence, subword_tokens

WORKER_ARGV = [
    sys.executable,
    "-m",
    "eventlens.remote_worker",
    "--ontology",
    str(FIXTURES / "ontology.json"),
    "--rules",
    str(FIXTURES / "rules.tsv"),
]


@pytest.fixture(scope="module")
def remote():
    with RemoteProviderClient(WORKER_ARGV) as client:
        yield RemoteScorerSet(client)


class TestRemoteProviders:
    def test_anchor_scores_match_in_process(self, remote, ontology):
        sentence = make_sentence("Anti-inflation protests erupted in Vietnam.")
        tokens = subword_tokens(sentence.text)
        local = load_rule_scorer(str(FIXTURES / "rules.tsv"), ontology)
        local_matrix = local.anchor_scorer.score_anchors(tokens, sentence)
        remote_matrix = remote.anchor_scorer.score_anchors(tokens, sentence)
        assert remote_matrix.tags == local_matrix.tags
        assert np.array_equal(remote_matrix.scores, local_matrix.scores)

    def test_pair_scores_round_trip(self, remote):
        sentence = make_sentence("withdrawal buying")
        scores = remote.pair_scorer.score_pairs(
            ["withdrawal", "buying"], ["Withdrawal", "Purchase"], sentence
        )
        assert scores.get(0, 1, "related-event") == 5.0

    def test_qa_scores_round_trip(self, remote, ontology):
        sentence = make_sentence("Anti-inflation protests erupted in Vietnam")
        tokens = subword_tokens(sentence.text)
        question = "<s> Where did the protests happen? </s> " + sentence.text + " </s>"
        scores = remote.qa_scorer.score_question(question, tokens, sentence)
        local = load_rule_scorer(str(FIXTURES / "rules.tsv"), ontology)
        expected = local.qa_scorer.score_question(question, tokens, sentence)
        assert np.array_equal(scores.start_scores, expected.start_scores)
        assert scores.null_score == expected.null_score

    def test_embeddings_and_cac(self, remote):
        vectors = remote.embeddings.vectors(["oil", "oil"])
        assert vectors.shape == (2, 64)
        assert float(vectors[0] @ vectors[1]) == pytest.approx(1.0)
        assert remote.cac.cac("cholera", "cholera") == pytest.approx(1.0)

    def test_translate(self, remote):
        assert remote.translation.translate("some text", "en") == "some text"

    def test_error_propagates(self, remote):
        with pytest.raises(RemoteProviderError):
            remote.client.request("no_such_kind", {})
