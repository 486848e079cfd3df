"""Reference remote-provider worker: serves the rule scorers, hashed
embeddings, identity translation, and cosine cac over the line-delimited
protocol. Run as:

    python -m eventlens.remote_worker --ontology O.json --rules R.tsv
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import load_ontology
from .providers import (
    EmbeddingCosineCac,
    HashedEmbeddingProvider,
    IdentityTranslationProvider,
    load_rule_scorer,
)
from .remote import (
    matrix_to_dict,
    query_from_dict,
    sentence_from_dict,
    token_from_dict,
)


def serve(ontology_path: str, rules_path: str, dimension: int, stdin=None, stdout=None):
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    ontology = load_ontology(ontology_path)
    scorers = load_rule_scorer(rules_path, ontology)
    embeddings = HashedEmbeddingProvider(dimension)
    translation = IdentityTranslationProvider()
    cac = EmbeddingCosineCac(embeddings)

    def handle(kind: str, payload: dict):
        if kind == "identify":
            return {
                "identities": {
                    "worker": "eventlens-rule-worker",
                    "anchor_scorer": scorers.anchor_scorer.identity,
                    "argument_scorer": scorers.argument_scorer.identity,
                    "pair_scorer": scorers.pair_scorer.identity,
                    "qa_scorer": scorers.qa_scorer.identity,
                    "embeddings": embeddings.identity,
                    "translation": translation.identity,
                    "cac": cac.identity,
                }
            }
        if kind == "anchor_scores":
            tokens = [token_from_dict(t) for t in payload["tokens"]]
            sentence = sentence_from_dict(payload["sentence"])
            return matrix_to_dict(scorers.anchor_scorer.score_anchors(tokens, sentence))
        if kind == "argument_scores":
            matrix = scorers.argument_scorer.score_arguments(
                query_from_dict(payload["query"]),
                payload["role"],
                payload["event_type"],
                [token_from_dict(t) for t in payload["tokens"]],
                sentence_from_dict(payload["sentence"]),
            )
            return matrix_to_dict(matrix)
        if kind == "pair_scores":
            scores = scorers.pair_scorer.score_pairs(
                payload["anchor_texts"],
                payload["anchor_types"],
                sentence_from_dict(payload["sentence"]),
            )
            return {
                "pairs": [
                    {"i": i, "j": j, "scores": dict(labels)}
                    for (i, j), labels in sorted(scores.scores.items())
                ]
            }
        if kind == "qa_scores":
            result = scorers.qa_scorer.score_question(
                payload["question"],
                [token_from_dict(t) for t in payload["tokens"]],
                sentence_from_dict(payload["sentence"]),
            )
            return {
                "start_scores": result.start_scores.tolist(),
                "end_scores": result.end_scores.tolist(),
                "null_score": result.null_score,
            }
        if kind == "embeddings":
            return {"vectors": embeddings.vectors(payload["tokens"]).tolist()}
        if kind == "translate":
            return {"text": translation.translate(payload["text"], payload["language"])}
        if kind == "cac":
            return {"value": cac.cac(payload["english"], payload["foreign"])}
        raise ValueError(f"unknown request kind: {kind}")

    for line in stdin:
        if not line.strip():
            continue
        request = json.loads(line)
        try:
            result = handle(request["kind"], request.get("payload", {}))
            response = {"id": request["id"], "ok": True, "result": result}
        except Exception as exc:
            response = {"id": request.get("id"), "ok": False, "error": str(exc)}
        stdout.write(json.dumps(response, ensure_ascii=False) + "\n")
        stdout.flush()


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ontology", required=True)
    parser.add_argument("--rules", required=True)
    parser.add_argument("--dimension", type=int, default=64)
    args = parser.parse_args(argv)
    serve(args.ontology, args.rules, args.dimension)


if __name__ == "__main__":
    main()
