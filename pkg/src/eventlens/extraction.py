"""Decoding of scorer outputs into anchors, arguments, and when/where
attachments.

Nothing here touches a neural model: scorers are opaque providers that
return score matrices, and this module turns those scores into character
spans. That split keeps every decoding rule testable with deterministic
fixture scorers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .core import Argument, EventMention, EventLensError, Ontology, Sentence, Span
from .tokenization import (
    LabelStats,
    SCRIPTIO_CONTINUA,
    Subword,
    WHITESPACE_DELIMITED,
    expand_span,
    resolve_word_label,
)

OUTSIDE = "O"


def bio_tagset(event_types: Sequence[str]) -> tuple[str, ...]:
    """Full anchor tagset: O plus B-t/I-t for every event type."""
    tags = [OUTSIDE]
    for t in sorted(event_types):
        tags.append(f"B-{t}")
        tags.append(f"I-{t}")
    return tuple(tags)


SPAN_TAGS = (OUTSIDE, "B", "I")  # untyped tagset for role/argument tagging


@dataclass(frozen=True)
class LabelScoreMatrix:
    """Raw classifier scores: one row per token, one column per tag."""

    tags: tuple[str, ...]
    scores: np.ndarray

    def __post_init__(self):
        if self.scores.ndim != 2 or self.scores.shape[1] != len(self.tags):
            raise ValueError(
                f"score matrix shape {self.scores.shape} does not match "
                f"{len(self.tags)} tags"
            )

    @property
    def n_tokens(self) -> int:
        return self.scores.shape[0]


@dataclass(frozen=True)
class QASpanScores:
    """Extractive-QA scores: per-token start/end plus a no-answer score."""

    start_scores: np.ndarray
    end_scores: np.ndarray
    null_score: float

    def __post_init__(self):
        if self.start_scores.shape != self.end_scores.shape:
            raise ValueError("start/end score lengths differ")


def _tag_parts(tag: str) -> tuple[str, str | None]:
    """Split a BIO tag into (prefix, type); untyped B/I get type None."""
    if tag == OUTSIDE:
        return OUTSIDE, None
    if tag in ("B", "I"):
        return tag, None
    prefix, _, etype = tag.partition("-")
    if prefix not in ("B", "I") or not etype:
        raise ValueError(f"malformed BIO tag: {tag}")
    return prefix, etype


def segment_labels(labels: Sequence[str]) -> list[tuple[int, int, str | None]]:
    """Maximal typed segments (first, last, type) from a BIO label walk.

    An I whose type does not continue the open segment starts a new
    segment of its own type (repair for ill-formed sequences).
    """
    segments: list[tuple[int, int, str | None]] = []
    open_start = None
    open_type: str | None = None
    for i, label in enumerate(labels):
        prefix, etype = _tag_parts(label)
        if prefix == OUTSIDE:
            if open_start is not None:
                segments.append((open_start, i - 1, open_type))
                open_start = None
        elif prefix == "B" or open_start is None or etype != open_type:
            if open_start is not None:
                segments.append((open_start, i - 1, open_type))
            open_start, open_type = i, etype
    if open_start is not None:
        segments.append((open_start, len(labels) - 1, open_type))
    return segments


def softmax_rows(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def decode_bio(
    scores: LabelScoreMatrix, tokens: Sequence[Subword]
) -> list[tuple[Span, str | None, float]]:
    """Greedy BIO decode: per-token argmax, then maximal segments.

    Returns (char span, type, confidence) triples; confidence is the mean
    softmax probability of the chosen tags across the segment.
    """
    if scores.n_tokens != len(tokens):
        raise ValueError(
            f"score rows ({scores.n_tokens}) != token count ({len(tokens)})"
        )
    if scores.n_tokens == 0:
        return []
    probs = softmax_rows(scores.scores)
    choices = scores.scores.argmax(axis=1)
    labels = [scores.tags[c] for c in choices]
    chosen_prob = probs[np.arange(len(tokens)), choices]
    results = []
    for first, last, etype in segment_labels(labels):
        span = Span(tokens[first].span.start, tokens[last].span.end)
        confidence = float(chosen_prob[first : last + 1].mean())
        results.append((span, etype, confidence))
    return results


class AnchorScorer(Protocol):
    identity: str

    def score_anchors(
        self, tokens: Sequence[Subword], sentence: Sentence
    ) -> LabelScoreMatrix: ...


class ArgumentScorer(Protocol):
    identity: str

    def score_arguments(
        self,
        query: "ArgumentInput",
        role: str,
        event_type: str,
        tokens: Sequence[Subword],
        sentence: Sentence,
    ) -> LabelScoreMatrix: ...


class QAScorer(Protocol):
    identity: str

    def score_question(
        self, question: str, tokens: Sequence[Subword], sentence: Sentence
    ) -> QASpanScores: ...


def _word_groups(tokens: Sequence[Subword]) -> list[list[int]]:
    groups: list[list[int]] = []
    current: int | None = None
    for i, tok in enumerate(tokens):
        if tok.word_index != current or not groups:
            groups.append([])
            current = tok.word_index
        groups[-1].append(i)
    return groups


def _resolve_word_tags(
    tokens: Sequence[Subword],
    labels: Sequence[str],
    stats: LabelStats,
) -> tuple[list[str], list[list[int]]]:
    """One tag per word from subword tags.

    A word with a single labeled type keeps that label (partial-word
    labels are repaired later by span expansion); a word whose subwords
    disagree on the type is resolved by the frequency heuristics.
    """
    groups = _word_groups(tokens)
    word_tags = []
    for members in groups:
        tagged = [labels[i] for i in members if labels[i] != OUTSIDE]
        types = {_tag_parts(t)[1] for t in tagged}
        if not tagged:
            word_tags.append(OUTSIDE)
        elif len(types) == 1:
            word_tags.append(tagged[0])
        else:
            word_tags.append(resolve_word_label(tagged, stats))
    return word_tags, groups


def extract_anchors(
    sentence: Sentence,
    tokens: Sequence[Subword],
    anchor_scorer: AnchorScorer,
    stats: LabelStats,
    lang_class: str = WHITESPACE_DELIMITED,
) -> list[tuple[Span, str, float]]:
    """Anchor identification and classification for one sentence.

    Subword scores are collapsed to word-level labels (conflict
    resolution), BIO-decoded, and the resulting spans expanded to word
    boundaries.
    """
    if not tokens:
        return []
    matrix = anchor_scorer.score_anchors(tokens, sentence)
    if matrix.n_tokens != len(tokens):
        raise EventLensError("anchor scorer returned wrong row count")
    probs = softmax_rows(matrix.scores)
    choices = matrix.scores.argmax(axis=1)
    labels = [matrix.tags[c] for c in choices]
    chosen_prob = probs[np.arange(len(tokens)), choices]

    if lang_class == SCRIPTIO_CONTINUA:
        anchors = []
        for first, last, etype in segment_labels(labels):
            span = Span(tokens[first].span.start, tokens[last].span.end)
            confidence = float(chosen_prob[first : last + 1].mean())
            anchors.append((span, etype, confidence))
        return anchors

    word_tags, groups = _resolve_word_tags(tokens, labels, stats)
    anchors = []
    for first_word, last_word, etype in segment_labels(word_tags):
        member_tokens = [i for w in range(first_word, last_word + 1) for i in groups[w]]
        labeled = [i for i in member_tokens if labels[i] != OUTSIDE]
        extent = Span(
            min(tokens[i].span.start for i in labeled),
            max(tokens[i].span.end for i in labeled),
        )
        confidence = float(np.mean([chosen_prob[i] for i in labeled]))
        anchors.append((expand_span(extent, sentence, lang_class), etype, confidence))
    return anchors


@dataclass(frozen=True)
class ArgumentInput:
    """Marked input sequence for argument attachment.

    ``tokens`` is the full formatted sequence (anchor text, ";", role id,
    "</s>", then the sentence with the anchor wrapped in "<"/">").
    ``sentence_token_index`` maps each position back to the original token
    index, or None for prefix/marker positions.
    """

    tokens: tuple[str, ...]
    sentence_token_index: tuple[int | None, ...]
    anchor_text: str
    role_id: int

    def text(self) -> str:
        return " ".join(self.tokens)


def _anchor_token_range(tokens: Sequence[Subword], anchor: Span) -> tuple[int, int]:
    first = last = None
    for i, tok in enumerate(tokens):
        if tok.span.start == anchor.start:
            first = i
        if tok.span.end == anchor.end:
            last = i
    if first is None or last is None or first > last:
        raise EventLensError(
            f"anchor span [{anchor.start}, {anchor.end}) does not align with "
            "token boundaries"
        )
    return first, last


def build_argument_input(
    tokens: Sequence[Subword], anchor: Span, role_id: int, anchor_text: str
) -> ArgumentInput:
    """Format the argument-attachment input for one (anchor, role) pair."""
    first, last = _anchor_token_range(tokens, anchor)
    out: list[str] = anchor_text.split() + [";", str(role_id), "</s>"]
    index: list[int | None] = [None] * len(out)
    for i, tok in enumerate(tokens):
        if i == first:
            out.append("<")
            index.append(None)
        out.append(tok.text)
        index.append(i)
        if i == last:
            out.append(">")
            index.append(None)
    return ArgumentInput(tuple(out), tuple(index), anchor_text, role_id)


def extract_arguments(
    sentence: Sentence,
    tokens: Sequence[Subword],
    event: EventMention,
    ontology: Ontology,
    argument_scorer: ArgumentScorer,
    lang_class: str = WHITESPACE_DELIMITED,
) -> list[Argument]:
    """Decode span arguments for every ontology role, one role at a time.

    Queries are built against the event's first anchor span. related-event
    is excluded here; it is decoded pairwise by the relations module.
    """
    anchor = event.first_anchor
    anchor_text = sentence.slice(anchor)
    arguments: list[Argument] = []
    seen: set[tuple[str, Span]] = set()
    for role in ontology.span_roles():
        query = build_argument_input(tokens, anchor, ontology.role_ids[role], anchor_text)
        matrix = argument_scorer.score_arguments(
            query, role, event.event_type, tokens, sentence
        )
        if matrix.n_tokens != len(query.tokens):
            raise EventLensError("argument scorer returned wrong row count")
        rows = [p for p, orig in enumerate(query.sentence_token_index) if orig is not None]
        sentence_matrix = LabelScoreMatrix(matrix.tags, matrix.scores[rows])
        for raw_span, _etype, confidence in decode_bio(sentence_matrix, tokens):
            span = expand_span(raw_span, sentence, lang_class)
            if (role, span) not in seen:
                seen.add((role, span))
                arguments.append(Argument(role=role, span=span, confidence=confidence))
    return arguments


def best_span(scores: QASpanScores) -> tuple[int, int, float]:
    """Highest-scoring valid (start <= end) pair; lowest indices on ties."""
    starts = scores.start_scores
    ends = scores.end_scores
    best = (-math.inf, -1, -1)
    best_start = 0
    for e in range(len(ends)):
        if starts[e] > starts[best_start]:
            best_start = e
        total = float(starts[best_start] + ends[e])
        if total > best[0]:
            best = (total, best_start, e)
    return best[1], best[2], best[0]


WHEN_TEMPLATE = "<s> When did the {anchor} happen? </s> {context} </s>"
WHERE_TEMPLATE = "<s> Where did the {anchor} happen? </s> {context} </s>"


@dataclass(frozen=True)
class WhenWhere:
    when: Span | None
    where: Span | None
    when_confidence: float | None
    where_confidence: float | None


def _answer(
    template: str,
    anchor_text: str,
    sentence: Sentence,
    tokens: Sequence[Subword],
    qa_scorer: QAScorer,
    lang_class: str,
) -> tuple[Span | None, float | None]:
    question = template.format(anchor=anchor_text, context=sentence.text)
    scores = qa_scorer.score_question(question, tokens, sentence)
    if len(scores.start_scores) != len(tokens):
        raise EventLensError("qa scorer returned wrong token count")
    if len(tokens) == 0:
        return None, None
    first, last, total = best_span(scores)
    if scores.null_score > total:
        return None, None
    span = expand_span(
        Span(tokens[first].span.start, tokens[last].span.end), sentence, lang_class
    )
    # Two-way softmax between the chosen span and the no-answer option.
    confidence = 1.0 / (1.0 + math.exp(min(scores.null_score - total, 700.0)))
    return span, confidence


def extract_when_where(
    sentence: Sentence,
    tokens: Sequence[Subword],
    event: EventMention,
    qa_scorer: QAScorer,
    lang_class: str = WHITESPACE_DELIMITED,
) -> WhenWhere:
    """Attach when/where answers to an event via the QA provider.

    Either answer is absent when the no-answer score beats every valid
    (start, end) pair.
    """
    anchor_text = sentence.slice(event.first_anchor)
    when, when_conf = _answer(
        WHEN_TEMPLATE, anchor_text, sentence, tokens, qa_scorer, lang_class
    )
    where, where_conf = _answer(
        WHERE_TEMPLATE, anchor_text, sentence, tokens, qa_scorer, lang_class
    )
    return WhenWhere(when, where, when_conf, where_conf)
