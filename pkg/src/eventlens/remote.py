"""Line-delimited JSON protocol for out-of-process providers.

A remote provider is any subprocess (or socket peer) that reads one JSON
request per line on stdin and writes one JSON response per line on stdout:

    request:  {"id": <int>, "kind": <str>, "payload": <object>}
    response: {"id": <int>, "ok": true, "result": <object>}
              {"id": <int>, "ok": false, "error": <str>}

Kinds and payloads (all offsets are Unicode scalar-value indices):

    anchor_scores    {"tokens": [token...], "sentence": sentence}
                     -> {"tags": [str...], "scores": [[num...]...]}
    argument_scores  {"query": {"tokens": [str...],
                                "sentence_token_index": [int|null...],
                                "anchor_text": str, "role_id": int},
                      "role": str, "event_type": str,
                      "tokens": [token...], "sentence": sentence}
                     -> {"tags": [str...], "scores": [[num...]...]}
    pair_scores      {"anchor_texts": [str...], "anchor_types": [str...],
               	      "sentence": sentence}
                     -> {"pairs": [{"i": int, "j": int, "scores":
                         {"none": num, "related-event": num,
                          "coreference": num}}...]}
    qa_scores        {"question": str, "tokens": [token...],
                      "sentence": sentence}
                     -> {"start_scores": [num...], "end_scores": [num...],
                         "null_score": num}
    embeddings       {"tokens": [str...]} -> {"vectors": [[num...]...]}
    translate        {"text": str, "language": str} -> {"text": str}
    cac              {"english": str, "foreign": str} -> {"value": num}
    identify         {} -> {"identities": {slot: str...}}

    token:    {"text": str, "start": int, "end": int,
               "word_index": int|null}
    sentence: {"index": int, "text": str, "char_base": int}
"""

from __future__ import annotations

import json
import subprocess
import threading
from typing import Sequence

import numpy as np

from .core import EventLensError, Sentence, Span
from .extraction import ArgumentInput, LabelScoreMatrix, QASpanScores
from .relations import PairScores, RELATION_LABELS
from .tokenization import Subword


def token_to_dict(token: Subword) -> dict:
    return {
        "text": token.text,
        "start": token.span.start,
        "end": token.span.end,
        "word_index": token.word_index,
    }


def token_from_dict(record: dict) -> Subword:
    return Subword(record["text"], Span(record["start"], record["end"]), record["word_index"])


def sentence_to_dict(sentence: Sentence) -> dict:
    return {"index": sentence.index, "text": sentence.text, "char_base": sentence.char_base}


def sentence_from_dict(record: dict) -> Sentence:
    return Sentence(record["index"], record["text"], record["char_base"])


def query_to_dict(query: ArgumentInput) -> dict:
    return {
        "tokens": list(query.tokens),
        "sentence_token_index": list(query.sentence_token_index),
        "anchor_text": query.anchor_text,
        "role_id": query.role_id,
    }


def query_from_dict(record: dict) -> ArgumentInput:
    return ArgumentInput(
        tuple(record["tokens"]),
        tuple(record["sentence_token_index"]),
        record["anchor_text"],
        record["role_id"],
    )


def matrix_to_dict(matrix: LabelScoreMatrix) -> dict:
    return {"tags": list(matrix.tags), "scores": matrix.scores.tolist()}


def matrix_from_dict(record: dict) -> LabelScoreMatrix:
    return LabelScoreMatrix(tuple(record["tags"]), np.array(record["scores"], dtype=float))


class RemoteProviderError(EventLensError):
    pass


class RemoteProviderClient:
    """Talks the wire protocol to a provider subprocess.

    Requests are serialized under a lock (single-call capability); a
    provider advertising concurrency would need one client per worker.
    """

    def __init__(self, argv: Sequence[str]):
        self.argv = list(argv)
        self._proc = subprocess.Popen(
            self.argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
        )
        self._lock = threading.Lock()
        self._next_id = 0

    def request(self, kind: str, payload: dict) -> dict:
        with self._lock:
            self._next_id += 1
            request_id = self._next_id
            line = json.dumps(
                {"id": request_id, "kind": kind, "payload": payload}, ensure_ascii=False
            )
            try:
                self._proc.stdin.write(line + "\n")
                self._proc.stdin.flush()
                response_line = self._proc.stdout.readline()
            except (BrokenPipeError, ValueError) as exc:
                raise RemoteProviderError(f"remote provider died: {exc}") from exc
        if not response_line:
            raise RemoteProviderError("remote provider closed its output")
        response = json.loads(response_line)
        if response.get("id") != request_id:
            raise RemoteProviderError(
                f"response id {response.get('id')} does not match request {request_id}"
            )
        if not response.get("ok"):
            raise RemoteProviderError(str(response.get("error", "unknown remote error")))
        return response["result"]

    def close(self) -> None:
        if self._proc.stdin:
            self._proc.stdin.close()
        self._proc.wait(timeout=10)

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()


class RemoteScorerSet:
    """Adapters exposing a remote provider under the in-process contracts."""

    def __init__(self, client: RemoteProviderClient):
        self.client = client
        identities = client.request("identify", {}).get("identities", {})
        suffix = f"remote({identities.get('worker', 'unknown')})"
        self.anchor_scorer = _RemoteAnchorScorer(client, suffix)
        self.argument_scorer = _RemoteArgumentScorer(client, suffix)
        self.pair_scorer = _RemotePairScorer(client, suffix)
        self.qa_scorer = _RemoteQAScorer(client, suffix)
        self.embeddings = _RemoteEmbeddings(client, suffix)
        self.translation = _RemoteTranslation(client, suffix)
        self.cac = _RemoteCac(client, suffix)


class _RemoteAnchorScorer:
    def __init__(self, client: RemoteProviderClient, identity: str):
        self.client = client
        self.identity = f"anchor-{identity}"

    def score_anchors(self, tokens, sentence) -> LabelScoreMatrix:
        result = self.client.request(
            "anchor_scores",
            {
                "tokens": [token_to_dict(t) for t in tokens],
                "sentence": sentence_to_dict(sentence),
            },
        )
        return matrix_from_dict(result)


class _RemoteArgumentScorer:
    def __init__(self, client: RemoteProviderClient, identity: str):
        self.client = client
        self.identity = f"argument-{identity}"

    def score_arguments(self, query, role, event_type, tokens, sentence) -> LabelScoreMatrix:
        result = self.client.request(
            "argument_scores",
            {
                "query": query_to_dict(query),
                "role": role,
                "event_type": event_type,
                "tokens": [token_to_dict(t) for t in tokens],
                "sentence": sentence_to_dict(sentence),
            },
        )
        return matrix_from_dict(result)


class _RemotePairScorer:
    def __init__(self, client: RemoteProviderClient, identity: str):
        self.client = client
        self.identity = f"pair-{identity}"

    def score_pairs(self, anchor_texts, anchor_types, sentence) -> PairScores:
        result = self.client.request(
            "pair_scores",
            {
                "anchor_texts": list(anchor_texts),
                "anchor_types": list(anchor_types),
                "sentence": sentence_to_dict(sentence),
            },
        )
        table = {}
        for entry in result["pairs"]:
            table[(entry["i"], entry["j"])] = {
                label: float(entry["scores"][label]) for label in RELATION_LABELS
            }
        return PairScores(table)


class _RemoteQAScorer:
    def __init__(self, client: RemoteProviderClient, identity: str):
        self.client = client
        self.identity = f"qa-{identity}"

    def score_question(self, question, tokens, sentence) -> QASpanScores:
        result = self.client.request(
            "qa_scores",
            {
                "question": question,
                "tokens": [token_to_dict(t) for t in tokens],
                "sentence": sentence_to_dict(sentence),
            },
        )
        return QASpanScores(
            np.array(result["start_scores"], dtype=float),
            np.array(result["end_scores"], dtype=float),
            float(result["null_score"]),
        )


class _RemoteEmbeddings:
    def __init__(self, client: RemoteProviderClient, identity: str):
        self.client = client
        self.identity = f"embeddings-{identity}"

    def vectors(self, tokens) -> np.ndarray:
        result = self.client.request("embeddings", {"tokens": list(tokens)})
        return np.array(result["vectors"], dtype=float)


class _RemoteTranslation:
    def __init__(self, client: RemoteProviderClient, identity: str):
        self.client = client
        self.identity = f"translation-{identity}"

    def translate(self, text: str, source_language: str) -> str:
        result = self.client.request("translate", {"text": text, "language": source_language})
        return result["text"]


class _RemoteCac:
    def __init__(self, client: RemoteProviderClient, identity: str):
        self.client = client
        self.identity = f"cac-{identity}"

    def cac(self, english: str, foreign: str) -> float:
        result = self.client.request("cac", {"english": english, "foreign": foreign})
        return float(result["value"])
